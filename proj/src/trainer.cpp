// SPDX-License-Identifier: Apache-2.0
#include "dspt5/trainer.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "dspt5/rng.hpp"
#include "dspt5/text.hpp"

namespace dspt5::train {

namespace fs = std::filesystem;

std::string_view to_string(AblationMode mode) {
  switch (mode) {
    case AblationMode::FinetuneOnly: return "finetune_only";
    case AblationMode::Dynamic: return "dynamic";
    case AblationMode::DynSoft: return "dyn_soft";
    case AblationMode::DynSoftCon: return "dyn_soft_con";
    case AblationMode::All: return "all";
  }
  return "all";
}

std::optional<AblationMode> ablation_from_string(std::string_view name) {
  for (AblationMode mode : all_ablation_modes()) {
    if (to_string(mode) == name) return mode;
  }
  return std::nullopt;
}

const std::vector<AblationMode>& all_ablation_modes() {
  static const std::vector<AblationMode> modes = {AblationMode::FinetuneOnly, AblationMode::Dynamic,
                                                  AblationMode::DynSoft, AblationMode::DynSoftCon,
                                                  AblationMode::All};
  return modes;
}

bool uses_soft_prompt(AblationMode mode) {
  return mode == AblationMode::DynSoft || mode == AblationMode::DynSoftCon ||
         mode == AblationMode::All;
}

bool uses_contrastive(AblationMode mode) {
  return mode == AblationMode::DynSoftCon || mode == AblationMode::All;
}

bool uses_crowd_decoding(AblationMode mode) { return mode == AblationMode::All; }

// ---------------------------------------------------------------------------
// Config serialization

nlohmann::json LossConfig::to_json() const {
  return {{"lambda", lambda}, {"tau_nce", tau_nce}, {"negatives_count", negatives_count}};
}

LossConfig LossConfig::from_json(const nlohmann::json& j) {
  LossConfig c;
  c.lambda = j.at("lambda").get<double>();
  c.tau_nce = j.at("tau_nce").get<double>();
  c.negatives_count = j.value("negatives_count", 0);
  return c;
}

nlohmann::json TrainConfig::to_json() const {
  return {{"learning_rate", learning_rate},
          {"batch_size", batch_size},
          {"max_source_len", max_source_len},
          {"prompt_len", prompt_len},
          {"keyword_len", keyword_len},
          {"epochs", epochs},
          {"seed", seed},
          {"ablation_mode", std::string(to_string(ablation_mode))},
          {"weight_decay", weight_decay},
          {"vocab_size", vocab_size},
          {"d_model", d_model},
          {"n_layers", n_layers},
          {"ffn_hidden", ffn_hidden}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.batch_size = j.at("batch_size").get<int>();
  c.max_source_len = j.at("max_source_len").get<int>();
  c.prompt_len = j.at("prompt_len").get<int>();
  c.keyword_len = j.at("keyword_len").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  const auto mode = ablation_from_string(j.at("ablation_mode").get<std::string>());
  if (!mode) throw std::invalid_argument("unknown ablation_mode in config");
  c.ablation_mode = *mode;
  c.weight_decay = j.value("weight_decay", 0.01);
  c.vocab_size = j.at("vocab_size").get<int>();
  c.d_model = j.at("d_model").get<int>();
  c.n_layers = j.at("n_layers").get<int>();
  c.ffn_hidden = j.at("ffn_hidden").get<int>();
  return c;
}

// ---------------------------------------------------------------------------
// Loss operations

double ce_loss(const std::vector<std::vector<double>>& step_distributions,
               const std::vector<int>& targets) {
  if (targets.empty()) throw std::invalid_argument("ce_loss: empty target");
  if (step_distributions.size() != targets.size())
    throw std::invalid_argument("ce_loss: one distribution per target token required");
  double total = 0.0;
  for (std::size_t s = 0; s < targets.size(); ++s) {
    const auto& dist = step_distributions[s];
    const int y = targets[s];
    if (y < 0 || static_cast<std::size_t>(y) >= dist.size())
      throw std::out_of_range("ce_loss: target id outside vocabulary");
    total -= std::log(dist[static_cast<std::size_t>(y)]);
  }
  return total / static_cast<double>(targets.size());
}

double info_nce(const encoder::Representation& key, const encoder::Representation& pos,
                const std::vector<encoder::Representation>& negatives, double tau) {
  if (negatives.empty()) throw std::invalid_argument("info_nce: at least one negative required");
  if (tau <= 0.0) throw std::invalid_argument("info_nce: tau must be positive");
  const double s_pos = encoder::similarity(key, pos) / tau;
  std::vector<double> scores = {s_pos};
  for (const auto& neg : negatives) scores.push_back(encoder::similarity(key, neg) / tau);
  double mx = scores[0];
  for (double s : scores) mx = std::max(mx, s);
  double total = 0.0;
  for (double s : scores) total += std::exp(s - mx);
  return (mx + std::log(total)) - s_pos;
}

double hybrid_loss(double ce, double nce, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("hybrid_loss: lambda must be in [0,1]");
  if (lambda == 0.0) return ce;
  if (lambda == 1.0) return nce;
  return (1.0 - lambda) * ce + lambda * nce;
}

nn::Tensor info_nce_graph(const nn::Tensor& r_key, const nn::Tensor& r_pos,
                          const std::vector<nn::Tensor>& r_negs, double tau) {
  if (r_negs.empty()) throw std::invalid_argument("info_nce: at least one negative required");
  if (tau <= 0.0) throw std::invalid_argument("info_nce: tau must be positive");
  const double inv_tau = 1.0 / tau;
  const nn::Tensor s_pos = nn::scale(nn::dot_flat(r_key, r_pos), inv_tau);
  std::vector<nn::Tensor> scores = {s_pos};
  for (const nn::Tensor& neg : r_negs) scores.push_back(nn::scale(nn::dot_flat(r_key, neg), inv_tau));
  return nn::sub(nn::logsumexp_row(nn::stack_scalars(scores)), s_pos);
}

nn::Tensor hybrid_loss_graph(const nn::Tensor& ce, const nn::Tensor& nce, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("hybrid_loss: lambda must be in [0,1]");
  return nn::add(nn::scale(ce, 1.0 - lambda), nn::scale(nce, lambda));
}

AssembledInput assemble_input(const nn::Tensor& prompt_embeds, const nn::Tensor& soft_keywords,
                              const nn::Tensor& source_embeds) {
  std::vector<nn::Tensor> parts;
  parts.push_back(prompt_embeds);
  if (soft_keywords.defined()) parts.push_back(soft_keywords);
  parts.push_back(source_embeds);
  const std::size_t width = parts.front().cols();
  for (const nn::Tensor& p : parts) {
    if (p.cols() != width) throw std::invalid_argument("assemble_input: embedding widths differ");
  }
  AssembledInput out;
  out.sequence = nn::concat_rows(parts);
  out.attention_mask.assign(out.sequence.rows(), 1);
  return out;
}

// ---------------------------------------------------------------------------
// Training loop

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct PreparedSample {
  std::vector<int> prompt_ids;
  std::vector<int> source_ids;
  std::vector<int> decoder_input;   // BOS + target
  std::vector<int> targets;         // target + EOS
  std::vector<int> keyword_ids;     // unpadded, may be empty
  std::vector<int> key_ids;         // subject terms, unpadded, may be empty
  std::vector<std::string> eligible_negative_pool_source;  // tokenized source
  std::vector<std::pair<std::string, double>> positives;
};

std::vector<int> truncate_ids(std::vector<int> ids, int limit) {
  if (limit > 0 && ids.size() > static_cast<std::size_t>(limit))
    ids.resize(static_cast<std::size_t>(limit));
  return ids;
}

PreparedSample prepare_sample(const corpus::EtdRecord& record, const TrainConfig& config,
                              const nn::Vocab& vocab, const prompt::EmbeddingProvider& embedder,
                              std::vector<std::string>& warnings) {
  PreparedSample sample;
  const prompt::PromptTemplate tmpl{.max_prompt_tokens = config.prompt_len,
                                    .max_keyword_tokens = config.keyword_len};

  sample.eligible_negative_pool_source = text::tokenize_words(record.abstract);

  // Keyword count follows the subject-term count for training pairs.
  const std::size_t m = record.subject_terms.size();
  const std::size_t keyword_count = m > 0 ? m : 4;
  sample.positives = prompt::extract_keywords(record.abstract, embedder, keyword_count);

  std::string prompt_text;
  int prompt_budget = config.prompt_len;
  switch (config.ablation_mode) {
    case AblationMode::FinetuneOnly:
      prompt_text = prompt::kStaticPrompt;
      break;
    case AblationMode::Dynamic:
      prompt_text = prompt::build_prompt(tmpl, sample.positives);
      prompt_budget = config.prompt_len + config.keyword_len;  // keywords ride as text
      break;
    default:
      // Soft modes: the partial fixed prompt only; keywords enter as vectors.
      prompt_text = sample.positives.empty() ? std::string(prompt::kStaticPrompt)
                                             : tmpl.prefix_text;
      break;
  }
  sample.prompt_ids = truncate_ids(vocab.encode(text::tokenize_words(prompt_text)), prompt_budget);
  sample.source_ids = truncate_ids(vocab.encode(sample.eligible_negative_pool_source),
                                   config.max_source_len);

  std::vector<int> target_ids = vocab.encode(text::tokenize_words(record.abstract_general));
  if (target_ids.size() > static_cast<std::size_t>(config.max_source_len)) {
    warnings.push_back("target for " + record.identifier_uri + " truncated to " +
                       std::to_string(config.max_source_len) + " tokens");
    target_ids.resize(static_cast<std::size_t>(config.max_source_len));
  }
  sample.decoder_input.push_back(nn::Vocab::kBos);
  sample.decoder_input.insert(sample.decoder_input.end(), target_ids.begin(), target_ids.end());
  sample.targets = target_ids;
  sample.targets.push_back(nn::Vocab::kEos);

  if (uses_soft_prompt(config.ablation_mode) && !sample.positives.empty()) {
    std::vector<std::string> joined;
    for (const auto& [phrase, score] : sample.positives) {
      for (const std::string& tok : text::split_whitespace(phrase)) joined.push_back(tok);
    }
    sample.keyword_ids = truncate_ids(vocab.encode(joined), config.keyword_len);
  }
  if (!record.subject_terms.empty()) {
    std::vector<std::string> key_tokens;
    for (const std::string& term : record.subject_terms) {
      for (const std::string& tok : text::tokenize_words(term)) key_tokens.push_back(tok);
    }
    sample.key_ids = truncate_ids(vocab.encode(key_tokens), config.keyword_len);
  }
  return sample;
}

nn::Vocab build_vocab(const std::vector<corpus::EtdRecord>& records, const TrainConfig& config) {
  std::vector<std::vector<std::string>> documents;
  documents.push_back(text::tokenize_words(prompt::kStaticPrompt));
  documents.push_back(text::tokenize_words(prompt::PromptTemplate{}.prefix_text));
  for (const corpus::EtdRecord& rec : records) {
    documents.push_back(text::tokenize_words(rec.abstract));
    documents.push_back(text::tokenize_words(rec.abstract_general));
    for (const std::string& term : rec.subject_terms) documents.push_back(text::tokenize_words(term));
  }
  return nn::Vocab::build(documents, static_cast<std::size_t>(config.vocab_size));
}

}  // namespace

void save_checkpoint(const std::string& dir, const nn::Seq2SeqModel& model,
                     const encoder::PromptEncoder& prompt_encoder, const nn::Vocab& vocab,
                     const TrainConfig& config, const LossConfig& loss_config) {
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / "glm.json");
    out << model.save().dump() << "\n";
  }
  prompt_encoder.save((fs::path(dir) / "prompt_encoder").string());
  {
    std::ofstream out(fs::path(dir) / "vocab.json");
    out << vocab.to_json().dump() << "\n";
  }
  {
    nlohmann::json meta = {{"schema", "dspt5.checkpoint.v1"},
                           {"train_config", config.to_json()},
                           {"loss_config", loss_config.to_json()}};
    std::ofstream out(fs::path(dir) / "meta.json");
    out << meta.dump(2) << "\n";
  }
}

Checkpoint load_checkpoint(const std::string& dir) {
  const auto read = [](const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    nlohmann::json j;
    in >> j;
    return j;
  };
  const nlohmann::json meta = read(fs::path(dir) / "meta.json");
  if (meta.value("schema", "") != "dspt5.checkpoint.v1")
    throw std::runtime_error("unknown checkpoint schema in " + dir);
  return Checkpoint{nn::Seq2SeqModel::load(read(fs::path(dir) / "glm.json")),
                    encoder::PromptEncoder::load((fs::path(dir) / "prompt_encoder").string()),
                    nn::Vocab::from_json(read(fs::path(dir) / "vocab.json")),
                    TrainConfig::from_json(meta.at("train_config")),
                    LossConfig::from_json(meta.at("loss_config"))};
}

TrainResult train(const std::vector<corpus::EtdRecord>& train_records,
                  const std::vector<corpus::EtdRecord>& validation_records,
                  const TrainConfig& config, const LossConfig& loss_config,
                  const std::string& run_dir, int max_steps) {
  if (train_records.empty()) throw std::invalid_argument("train: empty training split");
  if (!(loss_config.lambda >= 0.0 && loss_config.lambda <= 1.0))
    throw std::invalid_argument("train: lambda must be in [0,1]");

  TrainResult result;
  std::vector<std::string> warnings;

  const nn::Vocab vocab = build_vocab(train_records, config);
  const prompt::BagOfWordsEmbedder embedder;

  nn::GlmConfig glm_config;
  glm_config.vocab_size = static_cast<int>(vocab.size());
  glm_config.d_model = config.d_model;
  glm_config.n_layers = config.n_layers;
  glm_config.ffn_hidden = config.ffn_hidden;
  glm_config.max_len = config.prompt_len + 2 * config.keyword_len + config.max_source_len + 8;
  glm_config.seed = config.seed;
  nn::Seq2SeqModel model(glm_config);

  encoder::EncoderConfig enc_config;
  enc_config.vocab_size = static_cast<int>(vocab.size());
  enc_config.hidden_dim = config.d_model;
  enc_config.keyword_len = config.keyword_len;
  enc_config.ffn_hidden = config.ffn_hidden;
  enc_config.seed = splitmix64(config.seed ^ 0x70656e63ULL);  // distinct stream per net
  encoder::PromptEncoder prompt_encoder(enc_config);

  std::vector<PreparedSample> samples;
  samples.reserve(train_records.size());
  for (const corpus::EtdRecord& rec : train_records)
    samples.push_back(prepare_sample(rec, config, vocab, embedder, warnings));

  // One optimizer over both parameter sets; map keys keep updates ordered.
  nn::ParamMap all_params;
  for (const auto& [name, tensor] : model.params()) all_params["glm." + name] = tensor;
  for (const auto& [name, tensor] : prompt_encoder.params()) all_params["penc." + name] = tensor;
  nn::AdamW optimizer(config.learning_rate, config.weight_decay);

  std::ofstream log_stream;
  if (!run_dir.empty()) {
    fs::create_directories(run_dir);
    log_stream.open(fs::path(run_dir) / "train_log.jsonl");
  }
  const auto emit = [&](const nlohmann::json& j) {
    if (log_stream.is_open()) log_stream << j.dump() << "\n";
  };

  const bool contrastive = uses_contrastive(config.ablation_mode);
  const bool soft = uses_soft_prompt(config.ablation_mode);

  std::mt19937_64 shuffle_gen(splitmix64(config.seed ^ 0x73687566ULL));
  int step = 0;
  bool stop = false;

  for (int epoch = 0; epoch < config.epochs && !stop; ++epoch) {
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng::shuffle(order, shuffle_gen);

    for (std::size_t batch_start = 0; batch_start < order.size() && !stop;
         batch_start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t batch_end =
          std::min(order.size(), batch_start + static_cast<std::size_t>(config.batch_size));

      std::vector<nn::Tensor> sample_losses;
      double ce_sum = 0.0, nce_sum = 0.0;
      for (std::size_t b = batch_start; b < batch_end; ++b) {
        const PreparedSample& sample = samples[order[b]];
        if (sample.targets.empty() || sample.source_ids.empty()) continue;

        nn::Tensor r_pos;
        if (soft && !sample.keyword_ids.empty())
          r_pos = prompt_encoder.encode_graph(sample.keyword_ids);

        const AssembledInput input = assemble_input(model.embed_tokens(sample.prompt_ids), r_pos,
                                                    model.embed_tokens(sample.source_ids));
        const nn::Tensor encoded = model.encode(input.sequence);
        const nn::Tensor logits = model.decoder_logits(encoded, sample.decoder_input);
        const nn::Tensor ce = nn::cross_entropy_mean(logits, sample.targets);

        nn::Tensor nce;
        if (contrastive && !sample.key_ids.empty() && !sample.keyword_ids.empty()) {
          const std::size_t neg_count = loss_config.negatives_count > 0
                                            ? static_cast<std::size_t>(loss_config.negatives_count)
                                            : std::max<std::size_t>(sample.positives.size(), 1);
          const std::uint64_t neg_seed =
              splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(epoch) * 1315423911ULL +
                                                  order[b]));
          const std::vector<std::string> negatives = prompt::sample_negatives(
              sample.eligible_negative_pool_source, sample.positives, neg_count, neg_seed);
          if (!negatives.empty()) {
            const nn::Tensor r_key = prompt_encoder.encode_graph(sample.key_ids);
            const nn::Tensor r_pos_for_nce =
                r_pos.defined() ? r_pos : prompt_encoder.encode_graph(sample.keyword_ids);
            std::vector<nn::Tensor> r_negs;
            for (const std::string& neg : negatives)
              r_negs.push_back(prompt_encoder.encode_graph(vocab.encode({neg})));
            nce = info_nce_graph(r_key, r_pos_for_nce, r_negs, loss_config.tau_nce);
          }
        }

        const double effective_lambda = nce.defined() ? loss_config.lambda : 0.0;
        const nn::Tensor hybrid = nce.defined()
                                      ? hybrid_loss_graph(ce, nce, effective_lambda)
                                      : ce;
        sample_losses.push_back(hybrid);
        ce_sum += ce.item();
        nce_sum += nce.defined() ? nce.item() : 0.0;
      }
      if (sample_losses.empty()) continue;

      nn::Tensor batch_loss = sample_losses.front();
      for (std::size_t i = 1; i < sample_losses.size(); ++i)
        batch_loss = nn::add(batch_loss, sample_losses[i]);
      batch_loss = nn::scale(batch_loss, 1.0 / static_cast<double>(sample_losses.size()));

      const double hybrid_value = batch_loss.item();
      if (!std::isfinite(hybrid_value)) {
        result.diverged = true;
        result.message = "loss diverged at step " + std::to_string(step + 1) +
                         "; last-good checkpoint: " +
                         (result.checkpoints.empty() ? "none" : result.checkpoints.back());
        break;
      }

      nn::backward(batch_loss);
      optimizer.step(all_params);

      ++step;
      StepLog row{step, ce_sum / static_cast<double>(sample_losses.size()),
                  nce_sum / static_cast<double>(sample_losses.size()), hybrid_value};
      result.steps.push_back(row);
      emit({{"step", row.step}, {"ce", row.ce}, {"nce", row.nce}, {"hybrid", row.hybrid}});
      if (max_steps > 0 && step >= max_steps) stop = true;
    }

    if (result.diverged) break;

    if (!validation_records.empty()) {
      double val_ce = 0.0;
      std::size_t counted = 0;
      for (const corpus::EtdRecord& rec : validation_records) {
        PreparedSample sample = prepare_sample(rec, config, vocab, embedder, warnings);
        if (sample.targets.empty() || sample.source_ids.empty()) continue;
        nn::Tensor r_pos;
        if (soft && !sample.keyword_ids.empty())
          r_pos = prompt_encoder.encode_graph(sample.keyword_ids);
        const AssembledInput input = assemble_input(model.embed_tokens(sample.prompt_ids), r_pos,
                                                    model.embed_tokens(sample.source_ids));
        const nn::Tensor logits =
            model.decoder_logits(model.encode(input.sequence), sample.decoder_input);
        val_ce += nn::cross_entropy_mean(logits, sample.targets).item();
        ++counted;
      }
      if (counted > 0)
        emit({{"epoch", epoch + 1}, {"val_ce", val_ce / static_cast<double>(counted)}});
    }

    if (!run_dir.empty()) {
      const std::string ckpt_dir =
          (fs::path(run_dir) / "checkpoints" / ("epoch-" + std::to_string(epoch + 1))).string();
      save_checkpoint(ckpt_dir, model, prompt_encoder, vocab, config, loss_config);
      result.checkpoints.push_back(ckpt_dir);
    }
  }

  if (!run_dir.empty() && !result.diverged && result.checkpoints.empty()) {
    // Step-capped runs can end mid-epoch; still leave a usable checkpoint.
    const std::string ckpt_dir = (fs::path(run_dir) / "checkpoints" / "epoch-1").string();
    save_checkpoint(ckpt_dir, model, prompt_encoder, vocab, config, loss_config);
    result.checkpoints.push_back(ckpt_dir);
  }

  for (const std::string& w : warnings) std::cerr << "[train] warning: " << w << "\n";
  if (result.message.empty())
    result.message = "completed " + std::to_string(step) + " steps";
  return result;
}

}  // namespace dspt5::train
