// SPDX-License-Identifier: Apache-2.0
#include "dspt5/nn.hpp"

#include <cmath>
#include <stdexcept>

#include "dspt5/rng.hpp"

namespace dspt5::nn {

// ---------------------------------------------------------------------------
// Vocab

Vocab::Vocab() {
  words_ = {"<pad>", "<bos>", "<eos>", "<unk>"};
  for (std::size_t i = 0; i < words_.size(); ++i) index_[words_[i]] = static_cast<int>(i);
}

Vocab Vocab::build(const std::vector<std::vector<std::string>>& documents, std::size_t max_size) {
  Vocab vocab;
  std::unordered_map<std::string, std::size_t> counts;
  std::vector<std::string> first_seen;
  for (const auto& doc : documents) {
    for (const std::string& tok : doc) {
      auto [it, inserted] = counts.emplace(tok, 0);
      it->second += 1;
      if (inserted) first_seen.push_back(tok);
    }
  }
  std::vector<std::size_t> order(first_seen.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return counts[first_seen[a]] > counts[first_seen[b]];
  });
  for (std::size_t i : order) {
    if (vocab.words_.size() >= max_size) break;
    vocab.index_[first_seen[i]] = static_cast<int>(vocab.words_.size());
    vocab.words_.push_back(first_seen[i]);
  }
  return vocab;
}

int Vocab::id(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocab::word(int id) const { return words_.at(static_cast<std::size_t>(id)); }

std::vector<int> Vocab::encode(const std::vector<std::string>& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const std::string& t : tokens) ids.push_back(id(t));
  return ids;
}

std::vector<std::string> Vocab::decode(const std::vector<int>& ids) const {
  std::vector<std::string> out;
  for (int id : ids) {
    if (id == kPad || id == kBos || id == kEos) continue;
    out.push_back(word(id));
  }
  return out;
}

nlohmann::json Vocab::to_json() const { return nlohmann::json{{"words", words_}}; }

Vocab Vocab::from_json(const nlohmann::json& j) {
  Vocab vocab;
  vocab.words_ = j.at("words").get<std::vector<std::string>>();
  vocab.index_.clear();
  for (std::size_t i = 0; i < vocab.words_.size(); ++i)
    vocab.index_[vocab.words_[i]] = static_cast<int>(i);
  return vocab;
}

// ---------------------------------------------------------------------------
// Layers

Tensor init_param(std::size_t rows, std::size_t cols, std::mt19937_64& gen, double scale) {
  Tensor t(rows, cols, /*requires_grad=*/true);
  rng::Gaussian gaussian;
  for (double& v : t.values()) v = gaussian(gen) * scale;
  return t;
}

namespace {

Tensor ones_row(std::size_t n) {
  Tensor t(1, n, /*requires_grad=*/true);
  for (double& v : t.values()) v = 1.0;
  return t;
}

Tensor causal_mask(std::size_t n) {
  Tensor mask(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) mask.at(i, j) = -1e30;
  }
  return mask;
}

}  // namespace

Linear::Linear(std::size_t in, std::size_t out, std::mt19937_64& gen, double init_scale)
    : weight(init_param(in, out, gen, init_scale)), bias(Tensor(1, out, /*requires_grad=*/true)) {}

Attention::Attention(std::size_t dim, std::mt19937_64& gen, double init_scale)
    : query(dim, dim, gen, init_scale),
      key(dim, dim, gen, init_scale),
      value(dim, dim, gen, init_scale),
      output(dim, dim, gen, init_scale),
      dim(dim) {}

Tensor Attention::forward(const Tensor& x, const Tensor& memory, bool causal) const {
  const Tensor q = query.forward(x);
  const Tensor k = key.forward(memory);
  const Tensor v = value.forward(memory);
  Tensor scores = scale(matmul_nt(q, k), 1.0 / std::sqrt(static_cast<double>(dim)));
  if (causal) scores = add(scores, causal_mask(scores.rows()));
  const Tensor weights = softmax_rows(scores);
  return output.forward(matmul(weights, v));
}

FeedForward::FeedForward(std::size_t dim, std::size_t hidden, std::mt19937_64& gen,
                         double init_scale)
    : expand(dim, hidden, gen, init_scale), contract(hidden, dim, gen, init_scale) {}

EncoderLayer::EncoderLayer(std::size_t dim, std::size_t ffn_hidden, std::mt19937_64& gen,
                           double init_scale)
    : norm_attn(ones_row(dim)),
      norm_ff(ones_row(dim)),
      attn(dim, gen, init_scale),
      ff(dim, ffn_hidden, gen, init_scale) {}

Tensor EncoderLayer::forward(const Tensor& x) const {
  Tensor h = rmsnorm_rows(x, norm_attn);
  h = add(x, attn.forward(h, h, /*causal=*/false));
  const Tensor f = rmsnorm_rows(h, norm_ff);
  return add(h, ff.forward(f));
}

DecoderLayer::DecoderLayer(std::size_t dim, std::size_t ffn_hidden, std::mt19937_64& gen,
                           double init_scale)
    : norm_self(ones_row(dim)),
      norm_cross(ones_row(dim)),
      norm_ff(ones_row(dim)),
      self_attn(dim, gen, init_scale),
      cross_attn(dim, gen, init_scale),
      ff(dim, ffn_hidden, gen, init_scale) {}

Tensor DecoderLayer::forward(const Tensor& x, const Tensor& memory) const {
  Tensor h = rmsnorm_rows(x, norm_self);
  h = add(x, self_attn.forward(h, h, /*causal=*/true));
  Tensor c = rmsnorm_rows(h, norm_cross);
  h = add(h, cross_attn.forward(c, memory, /*causal=*/false));
  const Tensor f = rmsnorm_rows(h, norm_ff);
  return add(h, ff.forward(f));
}

TransformerEncoder::TransformerEncoder(std::size_t dim, std::size_t n_layers,
                                       std::size_t ffn_hidden, std::size_t max_len,
                                       std::mt19937_64& gen, double init_scale)
    : positions(init_param(max_len, dim, gen, init_scale)), final_norm(ones_row(dim)) {
  for (std::size_t i = 0; i < n_layers; ++i) layers.emplace_back(dim, ffn_hidden, gen, init_scale);
}

Tensor TransformerEncoder::forward(const Tensor& embeds) const {
  if (embeds.rows() > positions.rows())
    throw std::invalid_argument("sequence longer than positional table");
  Tensor h = add(embeds, slice_rows(positions, 0, embeds.rows()));
  for (const EncoderLayer& layer : layers) h = layer.forward(h);
  return rmsnorm_rows(h, final_norm);
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json params_to_json(const ParamMap& params) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, tensor] : params) {
    j[name] = {{"rows", tensor.rows()}, {"cols", tensor.cols()}, {"data", tensor.values()}};
  }
  return j;
}

void params_from_json(const nlohmann::json& j, ParamMap& params) {
  for (auto& [name, tensor] : params) {
    if (!j.contains(name)) throw std::runtime_error("checkpoint missing parameter: " + name);
    const auto& entry = j.at(name);
    if (entry.at("rows").get<std::size_t>() != tensor.rows() ||
        entry.at("cols").get<std::size_t>() != tensor.cols())
      throw std::runtime_error("checkpoint shape mismatch for parameter: " + name);
    tensor.values() = entry.at("data").get<std::vector<double>>();
  }
}

// ---------------------------------------------------------------------------
// Seq2SeqModel

nlohmann::json GlmConfig::to_json() const {
  return {{"vocab_size", vocab_size}, {"d_model", d_model},   {"n_layers", n_layers},
          {"ffn_hidden", ffn_hidden}, {"max_len", max_len},   {"seed", seed}};
}

GlmConfig GlmConfig::from_json(const nlohmann::json& j) {
  GlmConfig c;
  c.vocab_size = j.at("vocab_size").get<int>();
  c.d_model = j.at("d_model").get<int>();
  c.n_layers = j.at("n_layers").get<int>();
  c.ffn_hidden = j.at("ffn_hidden").get<int>();
  c.max_len = j.at("max_len").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

Seq2SeqModel::Seq2SeqModel(const GlmConfig& config) : config_(config) {
  std::mt19937_64 gen(config.seed);
  const double init_scale = 0.08;
  const auto dim = static_cast<std::size_t>(config.d_model);
  token_embedding_ = init_param(static_cast<std::size_t>(config.vocab_size), dim, gen, init_scale);
  encoder_ = TransformerEncoder(dim, static_cast<std::size_t>(config.n_layers),
                                static_cast<std::size_t>(config.ffn_hidden),
                                static_cast<std::size_t>(config.max_len), gen, init_scale);
  decoder_positions_ = init_param(static_cast<std::size_t>(config.max_len), dim, gen, init_scale);
  for (int i = 0; i < config.n_layers; ++i)
    decoder_layers_.emplace_back(dim, static_cast<std::size_t>(config.ffn_hidden), gen, init_scale);
  decoder_final_norm_ = Tensor(1, dim, /*requires_grad=*/true);
  for (double& v : decoder_final_norm_.values()) v = 1.0;
  output_projection_ = Linear(dim, static_cast<std::size_t>(config.vocab_size), gen, init_scale);
  register_params();
}

void Seq2SeqModel::register_params() {
  params_.clear();
  params_["token_embedding"] = token_embedding_;
  params_["encoder.positions"] = encoder_.positions;
  params_["encoder.final_norm"] = encoder_.final_norm;
  for (std::size_t i = 0; i < encoder_.layers.size(); ++i) {
    const std::string p = "encoder.layer" + std::to_string(i) + ".";
    EncoderLayer& layer = encoder_.layers[i];
    params_[p + "norm_attn"] = layer.norm_attn;
    params_[p + "norm_ff"] = layer.norm_ff;
    params_[p + "attn.q.w"] = layer.attn.query.weight;
    params_[p + "attn.q.b"] = layer.attn.query.bias;
    params_[p + "attn.k.w"] = layer.attn.key.weight;
    params_[p + "attn.k.b"] = layer.attn.key.bias;
    params_[p + "attn.v.w"] = layer.attn.value.weight;
    params_[p + "attn.v.b"] = layer.attn.value.bias;
    params_[p + "attn.o.w"] = layer.attn.output.weight;
    params_[p + "attn.o.b"] = layer.attn.output.bias;
    params_[p + "ff.expand.w"] = layer.ff.expand.weight;
    params_[p + "ff.expand.b"] = layer.ff.expand.bias;
    params_[p + "ff.contract.w"] = layer.ff.contract.weight;
    params_[p + "ff.contract.b"] = layer.ff.contract.bias;
  }
  params_["decoder.positions"] = decoder_positions_;
  params_["decoder.final_norm"] = decoder_final_norm_;
  for (std::size_t i = 0; i < decoder_layers_.size(); ++i) {
    const std::string p = "decoder.layer" + std::to_string(i) + ".";
    DecoderLayer& layer = decoder_layers_[i];
    params_[p + "norm_self"] = layer.norm_self;
    params_[p + "norm_cross"] = layer.norm_cross;
    params_[p + "norm_ff"] = layer.norm_ff;
    params_[p + "self.q.w"] = layer.self_attn.query.weight;
    params_[p + "self.q.b"] = layer.self_attn.query.bias;
    params_[p + "self.k.w"] = layer.self_attn.key.weight;
    params_[p + "self.k.b"] = layer.self_attn.key.bias;
    params_[p + "self.v.w"] = layer.self_attn.value.weight;
    params_[p + "self.v.b"] = layer.self_attn.value.bias;
    params_[p + "self.o.w"] = layer.self_attn.output.weight;
    params_[p + "self.o.b"] = layer.self_attn.output.bias;
    params_[p + "cross.q.w"] = layer.cross_attn.query.weight;
    params_[p + "cross.q.b"] = layer.cross_attn.query.bias;
    params_[p + "cross.k.w"] = layer.cross_attn.key.weight;
    params_[p + "cross.k.b"] = layer.cross_attn.key.bias;
    params_[p + "cross.v.w"] = layer.cross_attn.value.weight;
    params_[p + "cross.v.b"] = layer.cross_attn.value.bias;
    params_[p + "cross.o.w"] = layer.cross_attn.output.weight;
    params_[p + "cross.o.b"] = layer.cross_attn.output.bias;
    params_[p + "ff.expand.w"] = layer.ff.expand.weight;
    params_[p + "ff.expand.b"] = layer.ff.expand.bias;
    params_[p + "ff.contract.w"] = layer.ff.contract.weight;
    params_[p + "ff.contract.b"] = layer.ff.contract.bias;
  }
  params_["output.w"] = output_projection_.weight;
  params_["output.b"] = output_projection_.bias;
}

Tensor Seq2SeqModel::embed_tokens(const std::vector<int>& ids) const {
  return gather_rows(token_embedding_, ids);
}

Tensor Seq2SeqModel::encode(const Tensor& input_rows) const { return encoder_.forward(input_rows); }

Tensor Seq2SeqModel::decoder_logits(const Tensor& encoder_out,
                                    const std::vector<int>& decoder_input_ids) const {
  Tensor h = add(gather_rows(token_embedding_, decoder_input_ids),
                 slice_rows(decoder_positions_, 0, decoder_input_ids.size()));
  for (const DecoderLayer& layer : decoder_layers_) h = layer.forward(h, encoder_out);
  h = rmsnorm_rows(h, decoder_final_norm_);
  return output_projection_.forward(h);
}

std::vector<double> Seq2SeqModel::next_token_logits(const Tensor& encoder_out,
                                                    const std::vector<int>& prefix) const {
  const Tensor logits = decoder_logits(encoder_out, prefix);
  const std::size_t last = logits.rows() - 1;
  std::vector<double> out(logits.cols());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = logits.at(last, c);
  return out;
}

nlohmann::json Seq2SeqModel::save() const {
  return {{"schema", "dspt5.glm.v1"}, {"config", config_.to_json()}, {"params", params_to_json(params_)}};
}

Seq2SeqModel Seq2SeqModel::load(const nlohmann::json& j) {
  if (j.value("schema", "") != "dspt5.glm.v1") throw std::runtime_error("unknown GLM checkpoint schema");
  Seq2SeqModel model(GlmConfig::from_json(j.at("config")));
  params_from_json(j.at("params"), model.params_);
  return model;
}

// ---------------------------------------------------------------------------
// AdamW

void AdamW::step(ParamMap& params) {
  ++t_;
  const double bias1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bias2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (auto& [name, tensor] : params) {
    auto node = tensor.node();
    if (node->grad.size() != node->value.size()) continue;  // no gradient this step
    Moments& mom = moments_[name];
    if (mom.m.size() != node->value.size()) {
      mom.m.assign(node->value.size(), 0.0);
      mom.v.assign(node->value.size(), 0.0);
    }
    for (std::size_t i = 0; i < node->value.size(); ++i) {
      const double g = node->grad[i];
      mom.m[i] = beta1_ * mom.m[i] + (1.0 - beta1_) * g;
      mom.v[i] = beta2_ * mom.v[i] + (1.0 - beta2_) * g * g;
      const double m_hat = mom.m[i] / bias1;
      const double v_hat = mom.v[i] / bias2;
      node->value[i] -= lr_ * (m_hat / (std::sqrt(v_hat) + eps_) + weight_decay_ * node->value[i]);
    }
    node->grad.clear();  // consumed; parameters untouched next step are skipped
  }
}

}  // namespace dspt5::nn
