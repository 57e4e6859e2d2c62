// SPDX-License-Identifier: Apache-2.0
#include "dspt5/prompt_encoder.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace dspt5::encoder {

std::string_view to_string(Tag tag) {
  switch (tag) {
    case Tag::Key: return "key";
    case Tag::Pos: return "pos";
    case Tag::Neg: return "neg";
  }
  return "key";
}

nlohmann::json EncoderConfig::to_json() const {
  return {{"vocab_size", vocab_size}, {"hidden_dim", hidden_dim}, {"keyword_len", keyword_len},
          {"n_layers", n_layers},     {"ffn_hidden", ffn_hidden}, {"seed", seed}};
}

EncoderConfig EncoderConfig::from_json(const nlohmann::json& j) {
  EncoderConfig c;
  c.vocab_size = j.at("vocab_size").get<int>();
  c.hidden_dim = j.at("hidden_dim").get<int>();
  c.keyword_len = j.at("keyword_len").get<int>();
  c.n_layers = j.at("n_layers").get<int>();
  c.ffn_hidden = j.at("ffn_hidden").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

double similarity(const Representation& a, const Representation& b) {
  if (a.keyword_len != b.keyword_len || a.hidden_dim != b.hidden_dim)
    throw std::invalid_argument("similarity: representation shapes differ");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) dot += a.data[i] * b.data[i];
  return dot;
}

PromptEncoder::PromptEncoder(const EncoderConfig& config) : config_(config) {
  if (config.hidden_dim <= 0 || config.keyword_len <= 0)
    throw std::invalid_argument("EncoderConfig: dimensions must be positive");
  std::mt19937_64 gen(config.seed);
  const double init_scale = 0.08;
  const auto dim = static_cast<std::size_t>(config.hidden_dim);
  token_embedding_ = nn::init_param(static_cast<std::size_t>(config.vocab_size), dim, gen, init_scale);
  backbone_ = nn::TransformerEncoder(dim, static_cast<std::size_t>(config.n_layers),
                                     static_cast<std::size_t>(config.ffn_hidden),
                                     static_cast<std::size_t>(config.keyword_len), gen, init_scale);
  proj_weight_ = nn::init_param(dim, dim, gen, init_scale);
  proj_bias_ = nn::Tensor(1, dim, /*requires_grad=*/true);
  register_params();
}

void PromptEncoder::register_params() {
  params_.clear();
  params_["token_embedding"] = token_embedding_;
  params_["backbone.positions"] = backbone_.positions;
  params_["backbone.final_norm"] = backbone_.final_norm;
  for (std::size_t i = 0; i < backbone_.layers.size(); ++i) {
    const std::string p = "backbone.layer" + std::to_string(i) + ".";
    nn::EncoderLayer& layer = backbone_.layers[i];
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
  params_["projection.w"] = proj_weight_;
  params_["projection.b"] = proj_bias_;
}

std::vector<int> PromptEncoder::pad_ids(const std::vector<int>& ids) const {
  std::vector<int> padded = ids;
  padded.resize(static_cast<std::size_t>(config_.keyword_len), nn::Vocab::kPad);
  return padded;
}

nn::Tensor PromptEncoder::encode_graph(const std::vector<int>& ids) const {
  if (ids.empty()) throw std::invalid_argument("encode: empty token sequence");
  const std::vector<int> padded = pad_ids(ids);
  const nn::Tensor embeds = nn::gather_rows(token_embedding_, padded);
  const nn::Tensor hidden = backbone_.forward(embeds);  // last layer's states, n x d
  // Position-wise projection: r_i = ReLU(W h_i + b).
  return nn::relu(nn::add_rowvec(nn::matmul(hidden, proj_weight_), proj_bias_));
}

Representation PromptEncoder::encode(const std::vector<int>& ids, Tag tag) const {
  const nn::Tensor r = encode_graph(ids);
  Representation rep;
  rep.keyword_len = r.rows();
  rep.hidden_dim = r.cols();
  rep.data = r.values();
  rep.tag = tag;
  return rep;
}

void PromptEncoder::save(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / "config.json");
    nlohmann::json j = config_.to_json();
    j["schema"] = "dspt5.prompt_encoder.v1";
    out << j.dump(2) << "\n";
  }
  nlohmann::json backbone = nlohmann::json::object();
  nlohmann::json projection = nlohmann::json::object();
  {
    nlohmann::json all = nn::params_to_json(params_);
    for (auto& [name, value] : all.items()) {
      if (name.rfind("projection.", 0) == 0) {
        projection[name] = value;
      } else {
        backbone[name] = value;
      }
    }
  }
  {
    std::ofstream out(fs::path(dir) / "backbone.json");
    out << backbone.dump() << "\n";
  }
  {
    std::ofstream out(fs::path(dir) / "projection.json");
    out << projection.dump() << "\n";
  }
}

namespace {

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

PromptEncoder PromptEncoder::load(const std::string& dir) {
  namespace fs = std::filesystem;
  nlohmann::json config_json = read_json_file(fs::path(dir) / "config.json");
  if (config_json.value("schema", "") != "dspt5.prompt_encoder.v1")
    throw std::runtime_error("unknown prompt encoder checkpoint schema in " + dir);
  PromptEncoder encoder(EncoderConfig::from_json(config_json));
  nlohmann::json merged = read_json_file(fs::path(dir) / "backbone.json");
  nlohmann::json projection = read_json_file(fs::path(dir) / "projection.json");
  for (auto& [name, value] : projection.items()) merged[name] = value;
  nn::params_from_json(merged, encoder.params_);
  return encoder;
}

}  // namespace dspt5::encoder
