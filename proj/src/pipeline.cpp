// SPDX-License-Identifier: Apache-2.0
#include "dspt5/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dspt5/prompt.hpp"
#include "dspt5/rng.hpp"
#include "dspt5/text.hpp"

namespace dspt5::pipeline {

namespace fs = std::filesystem;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<int> truncate_ids(std::vector<int> ids, int limit) {
  if (limit > 0 && ids.size() > static_cast<std::size_t>(limit))
    ids.resize(static_cast<std::size_t>(limit));
  return ids;
}

}  // namespace

decode::CandidatePool generate_for_record(const train::Checkpoint& checkpoint,
                                          const corpus::EtdRecord& record,
                                          std::size_t record_index,
                                          const decode::DecodeConfig& config,
                                          const decode::TokenScorer& scorer) {
  const train::TrainConfig& tc = checkpoint.train_config;
  const nn::Vocab& vocab = checkpoint.vocab;
  const prompt::BagOfWordsEmbedder embedder;
  const prompt::PromptTemplate tmpl{.max_prompt_tokens = tc.prompt_len,
                                    .max_keyword_tokens = tc.keyword_len};

  // Inference-time keyword count: the keyword token budget.
  const auto positives = prompt::extract_keywords(record.abstract, embedder,
                                                  static_cast<std::size_t>(tc.keyword_len));

  std::string prompt_text;
  int prompt_budget = tc.prompt_len;
  switch (tc.ablation_mode) {
    case train::AblationMode::FinetuneOnly:
      prompt_text = prompt::kStaticPrompt;
      break;
    case train::AblationMode::Dynamic:
      prompt_text = prompt::build_prompt(tmpl, positives);
      prompt_budget = tc.prompt_len + tc.keyword_len;
      break;
    default:
      prompt_text = positives.empty() ? std::string(prompt::kStaticPrompt) : tmpl.prefix_text;
      break;
  }
  const std::vector<int> prompt_ids =
      truncate_ids(vocab.encode(text::tokenize_words(prompt_text)), prompt_budget);
  const std::vector<int> source_ids =
      truncate_ids(vocab.encode(text::tokenize_words(record.abstract)), tc.max_source_len);

  nn::Tensor r_pos;
  if (train::uses_soft_prompt(tc.ablation_mode) && !positives.empty()) {
    std::vector<std::string> joined;
    for (const auto& [phrase, score] : positives) {
      for (const std::string& tok : text::split_whitespace(phrase)) joined.push_back(tok);
    }
    r_pos = checkpoint.prompt_encoder.encode_graph(
        truncate_ids(vocab.encode(joined), tc.keyword_len));
  }

  const train::AssembledInput input = train::assemble_input(
      checkpoint.model.embed_tokens(prompt_ids), r_pos, checkpoint.model.embed_tokens(source_ids));
  const nn::Tensor encoder_out = checkpoint.model.encode(input.sequence);

  const int pool_size = train::uses_crowd_decoding(tc.ablation_mode) ? config.num_candidates : 1;
  std::vector<std::vector<std::string>> candidates;
  for (int c = 0; c < pool_size; ++c) {
    std::mt19937_64 gen(splitmix64(config.seed ^ splitmix64(record_index * 2654435761ULL +
                                                            static_cast<std::uint64_t>(c))));
    std::vector<int> prefix = {nn::Vocab::kBos};
    std::vector<int> emitted;
    for (int step = 0; step < config.max_output_tokens; ++step) {
      std::vector<double> logits = checkpoint.model.next_token_logits(encoder_out, prefix);
      logits[nn::Vocab::kPad] = -1e30;
      logits[nn::Vocab::kBos] = -1e30;
      logits[nn::Vocab::kUnk] = -1e30;
      if (step == 0) logits[nn::Vocab::kEos] = -1e30;  // candidates are never empty
      if (config.top_k > 0 && static_cast<std::size_t>(config.top_k) < logits.size()) {
        std::vector<double> sorted = logits;
        std::nth_element(sorted.begin(), sorted.end() - config.top_k, sorted.end());
        const double cutoff = sorted[sorted.size() - static_cast<std::size_t>(config.top_k)];
        for (double& v : logits) {
          if (v < cutoff) v = -1e30;
        }
      }
      const std::size_t token = decode::sample_index(
          decode::temperature_probs(logits, config.tau_decode), gen);
      if (static_cast<int>(token) == nn::Vocab::kEos) break;
      emitted.push_back(static_cast<int>(token));
      prefix.push_back(static_cast<int>(token));
    }
    candidates.push_back(vocab.decode(emitted));
  }

  decode::CandidatePool pool = decode::crowd_select(candidates, config.gamma, scorer);
  pool.source_id = record.identifier_uri;
  return pool;
}

std::vector<decode::CandidatePool> generate_candidates(const train::Checkpoint& checkpoint,
                                                       const std::vector<corpus::EtdRecord>& records,
                                                       const decode::DecodeConfig& config) {
  const decode::OneHotScorer scorer;
  std::vector<decode::CandidatePool> pools;
  pools.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i)
    pools.push_back(generate_for_record(checkpoint, records[i], i, config, scorer));
  return pools;
}

void write_candidates_jsonl(const std::string& path,
                            const std::vector<decode::CandidatePool>& pools) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const decode::CandidatePool& pool : pools) {
    nlohmann::json candidates = nlohmann::json::array();
    for (const auto& tokens : pool.candidates) {
      std::string joined;
      for (const std::string& tok : tokens) {
        if (!joined.empty()) joined += ' ';
        joined += tok;
      }
      candidates.push_back(joined);
    }
    const nlohmann::json j = {{"source_id", pool.source_id},
                              {"candidates", candidates},
                              {"crowd_scores", pool.crowd_scores},
                              {"chosen_index", pool.chosen_index}};
    out << j.dump() << "\n";
  }
}

std::vector<eval::EvalTriple> build_triples(const std::vector<corpus::EtdRecord>& records,
                                            const std::vector<decode::CandidatePool>& pools) {
  if (records.size() != pools.size())
    throw std::invalid_argument("build_triples: records/pools size mismatch");
  std::vector<eval::EvalTriple> triples;
  triples.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& tokens = pools[i].candidates.at(pools[i].chosen_index);
    std::string hypothesis;
    for (const std::string& tok : tokens) {
      if (!hypothesis.empty()) hypothesis += ' ';
      hypothesis += tok;
    }
    eval::EvalTriple t;
    t.source = records[i].abstract;
    t.reference = records[i].abstract_general;
    t.hypothesis = hypothesis;
    t.college = records[i].college;
    triples.push_back(std::move(t));
  }
  return triples;
}

// ---------------------------------------------------------------------------
// Ablation

std::vector<AblationRow> run_ablation(const std::vector<corpus::EtdRecord>& records,
                                      const AblationOptions& options, const std::string& out_dir,
                                      eval::AdapterRegistry& registry) {
  const corpus::CorpusSplit split = corpus::split(records, options.ratio, options.split_seed);
  if (split.test.empty()) throw std::runtime_error("ablate: test split is empty");
  fs::create_directories(out_dir);

  std::vector<AblationRow> rows;
  for (train::AblationMode mode : train::all_ablation_modes()) {
    const std::string variant(train::to_string(mode));
    const std::string variant_dir = (fs::path(out_dir) / variant).string();

    train::TrainConfig tc = options.train_config;
    tc.ablation_mode = mode;
    const train::TrainResult trained =
        train::train(split.train, {}, tc, options.loss_config, variant_dir, options.max_steps);
    if (trained.checkpoints.empty())
      throw std::runtime_error("ablate: variant " + variant + " produced no checkpoint (" +
                               trained.message + ")");

    const train::Checkpoint checkpoint = train::load_checkpoint(trained.checkpoints.back());
    const auto pools = generate_candidates(checkpoint, split.test, options.decode_config);
    write_candidates_jsonl((fs::path(variant_dir) / "candidates.jsonl").string(), pools);

    const auto triples = build_triples(split.test, pools);
    eval::write_triples_jsonl((fs::path(variant_dir) / "triples.jsonl").string(), triples);
    const eval::MetricReport rep = eval::report(triples, registry);
    eval::write_report(rep, (fs::path(variant_dir) / "report").string());

    rows.push_back(AblationRow{variant, rep.overall});
  }
  return rows;
}

namespace {

nlohmann::json row_metrics_json(const eval::MetricRow& m) {
  const auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"s_bleu", m.s_bleu}, {"d_bleu", m.d_bleu}, {"rouge1", m.rouge1},
          {"rouge2", m.rouge2}, {"meteor", m.meteor}, {"sari", m.sari},
          {"fres", m.fres},     {"ltcr", opt(m.ltcr)}, {"mtld", opt(m.mtld)}};
}

}  // namespace

nlohmann::json ablation_table_json(const std::vector<AblationRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const AblationRow& row : rows)
    out.push_back({{"variant", row.variant}, {"metrics", row_metrics_json(row.metrics)}});
  return out;
}

std::string ablation_table_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  out << "variant,s_bleu,d_bleu,rouge1,rouge2,meteor,sari,fres,ltcr,mtld\r\n";
  for (const AblationRow& row : rows) {
    const auto cell = [](double v) { return nlohmann::json(v).dump(); };
    const auto opt = [&](const std::optional<double>& v) {
      return v ? cell(*v) : std::string("null");
    };
    const eval::MetricRow& m = row.metrics;
    out << row.variant << ',' << cell(m.s_bleu) << ',' << cell(m.d_bleu) << ',' << cell(m.rouge1)
        << ',' << cell(m.rouge2) << ',' << cell(m.meteor) << ',' << cell(m.sari) << ','
        << cell(m.fres) << ',' << opt(m.ltcr) << ',' << opt(m.mtld) << "\r\n";
  }
  return out.str();
}

std::string ablation_table_text(const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(14) << "variant" << std::right << std::setw(8) << "s_bleu"
      << std::setw(8) << "d_bleu" << std::setw(8) << "rouge1" << std::setw(8) << "rouge2"
      << std::setw(8) << "meteor" << std::setw(8) << "sari" << std::setw(8) << "fres" << "\n";
  out << std::string(70, '-') << "\n";
  for (const AblationRow& row : rows) {
    const eval::MetricRow& m = row.metrics;
    out << std::left << std::setw(14) << row.variant << std::right << std::fixed
        << std::setprecision(2) << std::setw(8) << m.s_bleu << std::setw(8) << m.d_bleu
        << std::setw(8) << m.rouge1 << std::setw(8) << m.rouge2 << std::setw(8) << m.meteor
        << std::setw(8) << m.sari << std::setw(8) << m.fres << "\n";
  }
  return out.str();
}

}  // namespace dspt5::pipeline
