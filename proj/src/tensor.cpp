// SPDX-License-Identifier: Apache-2.0
#include "dspt5/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace dspt5::nn {
namespace {

std::shared_ptr<TensorNode> make_node(std::size_t rows, std::size_t cols, bool requires_grad) {
  auto node = std::make_shared<TensorNode>();
  node->rows = rows;
  node->cols = cols;
  node->value.assign(rows * cols, 0.0);
  node->requires_grad = requires_grad;
  return node;
}

Tensor make_result(std::size_t rows, std::size_t cols, std::vector<std::shared_ptr<TensorNode>> parents,
                   std::function<void(TensorNode&)> backprop) {
  bool needs_grad = false;
  for (const auto& p : parents) needs_grad = needs_grad || p->requires_grad;
  auto node = make_node(rows, cols, needs_grad);
  if (needs_grad) {
    node->parents = std::move(parents);
    node->backprop = std::move(backprop);
  }
  return Tensor(node);
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

}  // namespace

Tensor::Tensor(std::size_t rows, std::size_t cols, bool requires_grad)
    : node_(make_node(rows, cols, requires_grad)) {}

Tensor Tensor::scalar(double v) {
  Tensor t(1, 1);
  t.values()[0] = v;
  return t;
}

Tensor Tensor::row(const std::vector<double>& values, bool requires_grad) {
  return from(1, values.size(), values, requires_grad);
}

Tensor Tensor::from(std::size_t rows, std::size_t cols, const std::vector<double>& values,
                    bool requires_grad) {
  if (values.size() != rows * cols) throw std::invalid_argument("Tensor::from: size mismatch");
  Tensor t(rows, cols, requires_grad);
  t.values() = values;
  return t;
}

void backward(const Tensor& loss) {
  if (loss.size() != 1) throw std::invalid_argument("backward: loss must be scalar");

  // Post-order DFS for a reverse topological schedule.
  std::vector<TensorNode*> order;
  std::unordered_set<TensorNode*> seen;
  std::vector<std::pair<TensorNode*, std::size_t>> stack;
  stack.emplace_back(loss.node().get(), 0);
  seen.insert(loss.node().get());
  while (!stack.empty()) {
    auto& [node, next_child] = stack.back();
    if (next_child < node->parents.size()) {
      TensorNode* parent = node->parents[next_child++].get();
      if (seen.insert(parent).second) stack.emplace_back(parent, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  for (TensorNode* node : order) node->grad.assign(node->value.size(), 0.0);
  loss.node()->grad[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    TensorNode* node = *it;
    if (node->backprop) node->backprop(*node);
  }
}

// ---------------------------------------------------------------------------

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  auto pa = a.node(), pb = b.node();
  Tensor out = make_result(a.rows(), a.cols(), {pa, pb}, [pa, pb](TensorNode& self) {
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      pa->grad[i] += self.grad[i];
      pb->grad[i] += self.grad[i];
    }
  });
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = pa->value[i] + pb->value[i];
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "sub");
  auto pa = a.node(), pb = b.node();
  Tensor out = make_result(a.rows(), a.cols(), {pa, pb}, [pa, pb](TensorNode& self) {
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      pa->grad[i] += self.grad[i];
      pb->grad[i] -= self.grad[i];
    }
  });
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = pa->value[i] - pb->value[i];
  return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "mul");
  auto pa = a.node(), pb = b.node();
  Tensor out = make_result(a.rows(), a.cols(), {pa, pb}, [pa, pb](TensorNode& self) {
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      pa->grad[i] += self.grad[i] * pb->value[i];
      pb->grad[i] += self.grad[i] * pa->value[i];
    }
  });
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = pa->value[i] * pb->value[i];
  return out;
}

Tensor scale(const Tensor& a, double factor) {
  auto pa = a.node();
  Tensor out = make_result(a.rows(), a.cols(), {pa}, [pa, factor](TensorNode& self) {
    for (std::size_t i = 0; i < self.grad.size(); ++i) pa->grad[i] += factor * self.grad[i];
  });
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = factor * pa->value[i];
  return out;
}

Tensor relu(const Tensor& a) {
  auto pa = a.node();
  Tensor out = make_result(a.rows(), a.cols(), {pa}, [pa](TensorNode& self) {
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      if (pa->value[i] > 0.0) pa->grad[i] += self.grad[i];
    }
  });
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = std::max(pa->value[i], 0.0);
  return out;
}

Tensor tanh_op(const Tensor& a) {
  auto pa = a.node();
  auto out_node = make_node(a.rows(), a.cols(), pa->requires_grad);
  for (std::size_t i = 0; i < out_node->value.size(); ++i) out_node->value[i] = std::tanh(pa->value[i]);
  if (pa->requires_grad) {
    out_node->parents = {pa};
    out_node->backprop = [pa](TensorNode& self) {
      for (std::size_t i = 0; i < self.grad.size(); ++i) {
        const double y = self.value[i];
        pa->grad[i] += self.grad[i] * (1.0 - y * y);
      }
    };
  }
  return Tensor(out_node);
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
  auto pa = a.node(), pb = b.node();
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Tensor out = make_result(m, n, {pa, pb}, [pa, pb, m, k, n](TensorNode& self) {
    // dA = dC * B^T ; dB = A^T * dC
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double g = self.grad[i * n + j];
        if (g == 0.0) continue;
        for (std::size_t t = 0; t < k; ++t) {
          pa->grad[i * k + t] += g * pb->value[t * n + j];
          pb->grad[t * n + j] += g * pa->value[i * k + t];
        }
      }
    }
  });
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t t = 0; t < k; ++t) {
      const double av = pa->value[i * k + t];
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out.values()[i * n + j] += av * pb->value[t * n + j];
    }
  }
  return out;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("matmul_nt: inner dimensions differ");
  auto pa = a.node(), pb = b.node();
  const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
  Tensor out = make_result(m, n, {pa, pb}, [pa, pb, m, k, n](TensorNode& self) {
    // C = A * B^T ; dA = dC * B ; dB = dC^T * A
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double g = self.grad[i * n + j];
        if (g == 0.0) continue;
        for (std::size_t t = 0; t < k; ++t) {
          pa->grad[i * k + t] += g * pb->value[j * k + t];
          pb->grad[j * k + t] += g * pa->value[i * k + t];
        }
      }
    }
  });
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < k; ++t) acc += pa->value[i * k + t] * pb->value[j * k + t];
      out.values()[i * n + j] = acc;
    }
  }
  return out;
}

Tensor add_rowvec(const Tensor& a, const Tensor& v) {
  if (v.rows() != 1 || v.cols() != a.cols())
    throw std::invalid_argument("add_rowvec: vector must be 1 x cols(a)");
  auto pa = a.node(), pv = v.node();
  const std::size_t n = a.cols();
  Tensor out = make_result(a.rows(), n, {pa, pv}, [pa, pv, n](TensorNode& self) {
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      pa->grad[i] += self.grad[i];
      pv->grad[i % n] += self.grad[i];
    }
  });
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = pa->value[i] + pv->value[i % n];
  return out;
}

Tensor concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: no parts");
  const std::size_t cols = parts.front().cols();
  std::size_t rows = 0;
  std::vector<std::shared_ptr<TensorNode>> parents;
  for (const Tensor& p : parts) {
    if (p.cols() != cols) throw std::invalid_argument("concat_rows: column mismatch");
    rows += p.rows();
    parents.push_back(p.node());
  }
  auto parents_copy = parents;
  Tensor out = make_result(rows, cols, std::move(parents), [parents_copy, cols](TensorNode& self) {
    std::size_t offset = 0;
    for (const auto& p : parents_copy) {
      for (std::size_t i = 0; i < p->value.size(); ++i) p->grad[i] += self.grad[offset + i];
      offset += p->value.size();
    }
  });
  std::size_t offset = 0;
  for (const auto& p : parents_copy) {
    std::copy(p->value.begin(), p->value.end(), out.values().begin() + offset);
    offset += p->value.size();
  }
  return out;
}

Tensor slice_rows(const Tensor& a, std::size_t start, std::size_t count) {
  if (start + count > a.rows()) throw std::invalid_argument("slice_rows: out of range");
  auto pa = a.node();
  const std::size_t cols = a.cols();
  Tensor out = make_result(count, cols, {pa}, [pa, start, cols](TensorNode& self) {
    for (std::size_t i = 0; i < self.grad.size(); ++i) pa->grad[start * cols + i] += self.grad[i];
  });
  std::copy(pa->value.begin() + start * cols, pa->value.begin() + (start + count) * cols,
            out.values().begin());
  return out;
}

Tensor gather_rows(const Tensor& table, const std::vector<int>& ids) {
  auto pt = table.node();
  const std::size_t cols = table.cols();
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= table.rows())
      throw std::out_of_range("gather_rows: id out of range");
  }
  Tensor out = make_result(ids.size(), cols, {pt}, [pt, ids, cols](TensorNode& self) {
    for (std::size_t r = 0; r < ids.size(); ++r) {
      const std::size_t src = static_cast<std::size_t>(ids[r]) * cols;
      for (std::size_t c = 0; c < cols; ++c) pt->grad[src + c] += self.grad[r * cols + c];
    }
  });
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const std::size_t src = static_cast<std::size_t>(ids[r]) * cols;
    std::copy(pt->value.begin() + src, pt->value.begin() + src + cols,
              out.values().begin() + r * cols);
  }
  return out;
}

Tensor rmsnorm_rows(const Tensor& a, const Tensor& gain, double eps) {
  if (gain.rows() != 1 || gain.cols() != a.cols())
    throw std::invalid_argument("rmsnorm_rows: gain must be 1 x cols(a)");
  auto pa = a.node(), pg = gain.node();
  const std::size_t rows = a.rows(), cols = a.cols();

  auto rms = std::make_shared<std::vector<double>>(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    double ss = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double x = pa->value[r * cols + c];
      ss += x * x;
    }
    (*rms)[r] = std::sqrt(ss / static_cast<double>(cols) + eps);
  }

  Tensor out = make_result(rows, cols, {pa, pg}, [pa, pg, rms, rows, cols](TensorNode& self) {
    for (std::size_t r = 0; r < rows; ++r) {
      const double inv_r = 1.0 / (*rms)[r];
      double du_dot_u = 0.0;
      for (std::size_t c = 0; c < cols; ++c) {
        const double u = pa->value[r * cols + c] * inv_r;
        const double du = self.grad[r * cols + c] * pg->value[c];
        pg->grad[c] += self.grad[r * cols + c] * u;
        du_dot_u += du * u;
      }
      const double mean_term = du_dot_u / static_cast<double>(cols);
      for (std::size_t c = 0; c < cols; ++c) {
        const double u = pa->value[r * cols + c] * inv_r;
        const double du = self.grad[r * cols + c] * pg->value[c];
        pa->grad[r * cols + c] += inv_r * (du - u * mean_term);
      }
    }
  });
  for (std::size_t r = 0; r < rows; ++r) {
    const double inv_r = 1.0 / (*rms)[r];
    for (std::size_t c = 0; c < cols; ++c)
      out.values()[r * cols + c] = pa->value[r * cols + c] * inv_r * pg->value[c];
  }
  return out;
}

Tensor softmax_rows(const Tensor& a) {
  auto pa = a.node();
  const std::size_t rows = a.rows(), cols = a.cols();
  auto out_node = make_node(rows, cols, pa->requires_grad);
  for (std::size_t r = 0; r < rows; ++r) {
    double mx = pa->value[r * cols];
    for (std::size_t c = 1; c < cols; ++c) mx = std::max(mx, pa->value[r * cols + c]);
    double total = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double e = std::exp(pa->value[r * cols + c] - mx);
      out_node->value[r * cols + c] = e;
      total += e;
    }
    for (std::size_t c = 0; c < cols; ++c) out_node->value[r * cols + c] /= total;
  }
  if (pa->requires_grad) {
    out_node->parents = {pa};
    out_node->backprop = [pa, rows, cols](TensorNode& self) {
      for (std::size_t r = 0; r < rows; ++r) {
        double dp_dot_p = 0.0;
        for (std::size_t c = 0; c < cols; ++c)
          dp_dot_p += self.grad[r * cols + c] * self.value[r * cols + c];
        for (std::size_t c = 0; c < cols; ++c) {
          const double p = self.value[r * cols + c];
          pa->grad[r * cols + c] += p * (self.grad[r * cols + c] - dp_dot_p);
        }
      }
    };
  }
  return Tensor(out_node);
}

Tensor mean_all(const Tensor& a) {
  auto pa = a.node();
  const double inv_n = 1.0 / static_cast<double>(a.size());
  Tensor out = make_result(1, 1, {pa}, [pa, inv_n](TensorNode& self) {
    for (double& g : pa->grad) g += self.grad[0] * inv_n;
  });
  double total = 0.0;
  for (double v : pa->value) total += v;
  out.values()[0] = total * inv_n;
  return out;
}

Tensor dot_flat(const Tensor& a, const Tensor& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot_flat: size mismatch");
  auto pa = a.node(), pb = b.node();
  Tensor out = make_result(1, 1, {pa, pb}, [pa, pb](TensorNode& self) {
    const double g = self.grad[0];
    for (std::size_t i = 0; i < pa->value.size(); ++i) {
      pa->grad[i] += g * pb->value[i];
      pb->grad[i] += g * pa->value[i];
    }
  });
  double total = 0.0;
  for (std::size_t i = 0; i < pa->value.size(); ++i) total += pa->value[i] * pb->value[i];
  out.values()[0] = total;
  return out;
}

Tensor stack_scalars(const std::vector<Tensor>& scalars) {
  if (scalars.empty()) throw std::invalid_argument("stack_scalars: empty");
  std::vector<std::shared_ptr<TensorNode>> parents;
  for (const Tensor& s : scalars) {
    if (s.size() != 1) throw std::invalid_argument("stack_scalars: inputs must be scalars");
    parents.push_back(s.node());
  }
  auto parents_copy = parents;
  Tensor out = make_result(1, scalars.size(), std::move(parents), [parents_copy](TensorNode& self) {
    for (std::size_t i = 0; i < parents_copy.size(); ++i) parents_copy[i]->grad[0] += self.grad[i];
  });
  for (std::size_t i = 0; i < parents_copy.size(); ++i) out.values()[i] = parents_copy[i]->value[0];
  return out;
}

Tensor logsumexp_row(const Tensor& a) {
  if (a.rows() != 1) throw std::invalid_argument("logsumexp_row: expects a 1xn tensor");
  auto pa = a.node();
  const std::size_t n = a.cols();
  double mx = pa->value[0];
  for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, pa->value[i]);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += std::exp(pa->value[i] - mx);
  const double lse = mx + std::log(total);

  Tensor out = make_result(1, 1, {pa}, [pa, n, lse](TensorNode& self) {
    const double g = self.grad[0];
    for (std::size_t i = 0; i < n; ++i) pa->grad[i] += g * std::exp(pa->value[i] - lse);
  });
  out.values()[0] = lse;
  return out;
}

Tensor cross_entropy_mean(const Tensor& logits, const std::vector<int>& targets) {
  if (targets.empty()) throw std::invalid_argument("cross_entropy_mean: empty target");
  if (targets.size() != logits.rows())
    throw std::invalid_argument("cross_entropy_mean: one target per logit row required");
  auto pl = logits.node();
  const std::size_t rows = logits.rows(), cols = logits.cols();
  for (int t : targets) {
    if (t < 0 || static_cast<std::size_t>(t) >= cols)
      throw std::out_of_range("cross_entropy_mean: target id out of range");
  }

  // Row-wise log-softmax probabilities cached for the backward pass.
  auto probs = std::make_shared<std::vector<double>>(rows * cols);
  double loss = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    double mx = pl->value[r * cols];
    for (std::size_t c = 1; c < cols; ++c) mx = std::max(mx, pl->value[r * cols + c]);
    double total = 0.0;
    for (std::size_t c = 0; c < cols; ++c) total += std::exp(pl->value[r * cols + c] - mx);
    const double log_total = std::log(total);
    for (std::size_t c = 0; c < cols; ++c)
      (*probs)[r * cols + c] = std::exp(pl->value[r * cols + c] - mx - log_total);
    loss -= pl->value[r * cols + targets[r]] - mx - log_total;
  }
  loss /= static_cast<double>(rows);

  Tensor out = make_result(1, 1, {pl}, [pl, probs, targets, rows, cols](TensorNode& self) {
    const double g = self.grad[0] / static_cast<double>(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const double indicator = (static_cast<std::size_t>(targets[r]) == c) ? 1.0 : 0.0;
        pl->grad[r * cols + c] += g * ((*probs)[r * cols + c] - indicator);
      }
    }
  });
  out.values()[0] = loss;
  return out;
}

}  // namespace dspt5::nn
