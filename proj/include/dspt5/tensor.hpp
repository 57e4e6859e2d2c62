// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace dspt5::nn {

// Small reverse-mode autodiff over dense double matrices. Scalars are 1x1.
// Graphs are built per step and released when the handles go out of scope;
// parameters are long-lived nodes flagged requires_grad.

struct TensorNode {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<TensorNode>> parents;
  std::function<void(TensorNode&)> backprop;  // accumulates into parents' grads
};

class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, bool requires_grad = false);
  explicit Tensor(std::shared_ptr<TensorNode> node) : node_(std::move(node)) {}

  static Tensor scalar(double v);
  static Tensor row(const std::vector<double>& values, bool requires_grad = false);
  static Tensor from(std::size_t rows, std::size_t cols, const std::vector<double>& values,
                     bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  std::size_t rows() const { return node_->rows; }
  std::size_t cols() const { return node_->cols; }
  std::size_t size() const { return node_->value.size(); }
  bool requires_grad() const { return node_->requires_grad; }

  double& at(std::size_t r, std::size_t c) { return node_->value[r * node_->cols + c]; }
  double at(std::size_t r, std::size_t c) const { return node_->value[r * node_->cols + c]; }
  double item() const { return node_->value.at(0); }

  std::vector<double>& values() { return node_->value; }
  const std::vector<double>& values() const { return node_->value; }
  const std::vector<double>& grad() const { return node_->grad; }

  std::shared_ptr<TensorNode> node() const { return node_; }

 private:
  std::shared_ptr<TensorNode> node_;
};

/// Reverse pass from a scalar loss. Zeroes the grads of every node
/// reachable from `loss`, seeds d(loss)=1 and runs the tape.
void backward(const Tensor& loss);

// ----- elementwise -----
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor relu(const Tensor& a);
Tensor tanh_op(const Tensor& a);

// ----- shape / linear algebra -----
Tensor matmul(const Tensor& a, const Tensor& b);     // (m,k)x(k,n)
Tensor matmul_nt(const Tensor& a, const Tensor& b);  // (m,k)x(n,k)^T -> (m,n)
Tensor add_rowvec(const Tensor& a, const Tensor& v);  // broadcast 1xn over rows
Tensor concat_rows(const std::vector<Tensor>& parts);
Tensor slice_rows(const Tensor& a, std::size_t start, std::size_t count);
Tensor gather_rows(const Tensor& table, const std::vector<int>& ids);
Tensor rmsnorm_rows(const Tensor& a, const Tensor& gain, double eps = 1e-6);

// ----- reductions / losses -----
Tensor softmax_rows(const Tensor& a);
Tensor mean_all(const Tensor& a);
Tensor dot_flat(const Tensor& a, const Tensor& b);            // scalar
Tensor stack_scalars(const std::vector<Tensor>& scalars);     // 1xn
Tensor logsumexp_row(const Tensor& a);                        // 1xn -> scalar
/// Mean negative log-likelihood of `targets` under row-wise softmax(logits).
Tensor cross_entropy_mean(const Tensor& logits, const std::vector<int>& targets);

}  // namespace dspt5::nn
