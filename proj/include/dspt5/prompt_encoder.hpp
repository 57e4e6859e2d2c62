// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dspt5/nn.hpp"
#include "dspt5/tensor.hpp"
#include "json.hpp"

namespace dspt5::encoder {

enum class Tag { Key, Pos, Neg };
std::string_view to_string(Tag tag);

/// Projected keyword representation: keyword_len x hidden_dim, every entry
/// nonnegative (post-ReLU). Identical shape across key/pos/neg paths.
struct Representation {
  std::size_t keyword_len = 0;
  std::size_t hidden_dim = 0;
  std::vector<double> data;  // row-major
  Tag tag = Tag::Key;
};

struct EncoderConfig {
  int vocab_size = 256;
  int hidden_dim = 16;  // d
  int keyword_len = 16; // n
  int n_layers = 1;
  int ffn_hidden = 32;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static EncoderConfig from_json(const nlohmann::json& j);
};

/// Dot product of the flattened representations; shapes must match.
double similarity(const Representation& a, const Representation& b);

/// Keyword sequence encoder with a position-wise projection head. One
/// instance serves the key/pos/neg paths, so the sequence encoder
/// parameters are shared; W and b live in `projection`.
class PromptEncoder {
 public:
  explicit PromptEncoder(const EncoderConfig& config);

  const EncoderConfig& config() const { return config_; }

  /// Right-pad (or truncate) token ids to keyword_len with the pad id.
  std::vector<int> pad_ids(const std::vector<int>& ids) const;

  /// Autograd path: returns the post-ReLU projected hidden states
  /// (keyword_len x hidden_dim) for padded ids.
  nn::Tensor encode_graph(const std::vector<int>& ids) const;

  /// Evaluation path: plain values copied out of the graph. Throws on an
  /// empty token sequence.
  Representation encode(const std::vector<int>& ids, Tag tag) const;

  nn::ParamMap& params() { return params_; }
  const nn::ParamMap& params() const { return params_; }

  /// Checkpoint layout: `dir/config.json` (with schema tag), `dir/backbone.json`
  /// (shared sequence encoder), `dir/projection.json` (W, b sidecar).
  void save(const std::string& dir) const;
  static PromptEncoder load(const std::string& dir);

 private:
  void register_params();

  EncoderConfig config_;
  nn::Tensor token_embedding_;
  nn::TransformerEncoder backbone_;
  nn::Tensor proj_weight_;  // d x d, applied position-wise
  nn::Tensor proj_bias_;    // 1 x d
  nn::ParamMap params_;
};

}  // namespace dspt5::encoder
