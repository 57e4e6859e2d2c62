// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "dspt5/tensor.hpp"
#include "json.hpp"

namespace dspt5::nn {

// ---------------------------------------------------------------------------
// Word-level vocabulary shared by the generative model and prompt encoder.

class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;

  Vocab();

  /// Build from tokenized documents, keeping the `max_size` most frequent
  /// words (ties by first occurrence).
  static Vocab build(const std::vector<std::vector<std::string>>& documents, std::size_t max_size);

  int id(const std::string& word) const;
  const std::string& word(int id) const;
  std::size_t size() const { return words_.size(); }

  std::vector<int> encode(const std::vector<std::string>& tokens) const;
  std::vector<std::string> decode(const std::vector<int>& ids) const;  // drops specials

  nlohmann::json to_json() const;
  static Vocab from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

// ---------------------------------------------------------------------------
// Layers. Parameters are long-lived Tensors with requires_grad set; forward
// calls build fresh graph nodes.

struct Linear {
  Tensor weight;  // in x out
  Tensor bias;    // 1 x out

  Linear() = default;
  Linear(std::size_t in, std::size_t out, std::mt19937_64& gen, double init_scale);
  Tensor forward(const Tensor& x) const { return add_rowvec(matmul(x, weight), bias); }
};

struct Attention {
  Linear query, key, value, output;
  std::size_t dim = 0;

  Attention() = default;
  Attention(std::size_t dim, std::mt19937_64& gen, double init_scale);
  /// Scaled dot-product attention of x over memory; causal masks future
  /// positions (only meaningful when memory is x itself).
  Tensor forward(const Tensor& x, const Tensor& memory, bool causal) const;
};

struct FeedForward {
  Linear expand, contract;
  FeedForward() = default;
  FeedForward(std::size_t dim, std::size_t hidden, std::mt19937_64& gen, double init_scale);
  Tensor forward(const Tensor& x) const { return contract.forward(tanh_op(expand.forward(x))); }
};

struct EncoderLayer {
  Tensor norm_attn, norm_ff;  // rmsnorm gains
  Attention attn;
  FeedForward ff;
  EncoderLayer() = default;
  EncoderLayer(std::size_t dim, std::size_t ffn_hidden, std::mt19937_64& gen, double init_scale);
  Tensor forward(const Tensor& x) const;
};

struct DecoderLayer {
  Tensor norm_self, norm_cross, norm_ff;
  Attention self_attn, cross_attn;
  FeedForward ff;
  DecoderLayer() = default;
  DecoderLayer(std::size_t dim, std::size_t ffn_hidden, std::mt19937_64& gen, double init_scale);
  Tensor forward(const Tensor& x, const Tensor& memory) const;
};

/// Stack of encoder layers with learned positional embeddings; input is a
/// sequence of embedding rows.
struct TransformerEncoder {
  Tensor positions;  // max_len x dim
  std::vector<EncoderLayer> layers;
  Tensor final_norm;

  TransformerEncoder() = default;
  TransformerEncoder(std::size_t dim, std::size_t n_layers, std::size_t ffn_hidden,
                     std::size_t max_len, std::mt19937_64& gen, double init_scale);
  Tensor forward(const Tensor& embeds) const;
};

// ---------------------------------------------------------------------------
// Parameter registry and serialization

using ParamMap = std::map<std::string, Tensor>;  // ordered => deterministic updates

nlohmann::json params_to_json(const ParamMap& params);
void params_from_json(const nlohmann::json& j, ParamMap& params);  // shapes must match

// ---------------------------------------------------------------------------
// Toy encoder-decoder generative model (the pluggable backbone's built-in
// implementation).

struct GlmConfig {
  int vocab_size = 256;
  int d_model = 16;
  int n_layers = 2;
  int ffn_hidden = 32;
  int max_len = 640;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static GlmConfig from_json(const nlohmann::json& j);
};

class Seq2SeqModel {
 public:
  explicit Seq2SeqModel(const GlmConfig& config);

  const GlmConfig& config() const { return config_; }

  /// Token embeddings as graph nodes (rows follow `ids`).
  Tensor embed_tokens(const std::vector<int>& ids) const;

  Tensor encode(const Tensor& input_rows) const;

  /// Teacher-forced logits, one row per decoder input position.
  Tensor decoder_logits(const Tensor& encoder_out, const std::vector<int>& decoder_input_ids) const;

  /// Evaluation helper: logits for the next token after `prefix` (prefix
  /// starts with BOS). No gradients are retained.
  std::vector<double> next_token_logits(const Tensor& encoder_out,
                                        const std::vector<int>& prefix) const;

  ParamMap& params() { return params_; }
  const ParamMap& params() const { return params_; }

  nlohmann::json save() const;
  static Seq2SeqModel load(const nlohmann::json& j);

 private:
  void register_params();

  GlmConfig config_;
  Tensor token_embedding_;  // vocab x d
  TransformerEncoder encoder_;
  Tensor decoder_positions_;
  std::vector<DecoderLayer> decoder_layers_;
  Tensor decoder_final_norm_;
  Linear output_projection_;
  ParamMap params_;
};

// ---------------------------------------------------------------------------
// Decoupled weight decay Adam.

class AdamW {
 public:
  AdamW(double lr, double weight_decay = 0.0, double beta1 = 0.9, double beta2 = 0.999,
        double eps = 1e-8)
      : lr_(lr), weight_decay_(weight_decay), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(ParamMap& params);

  double learning_rate() const { return lr_; }

 private:
  struct Moments {
    std::vector<double> m, v;
  };
  double lr_, weight_decay_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::map<std::string, Moments> moments_;
};

/// Gaussian-initialized parameter tensor.
Tensor init_param(std::size_t rows, std::size_t cols, std::mt19937_64& gen, double scale);

}  // namespace dspt5::nn
