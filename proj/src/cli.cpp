// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "dspt5/corpus.hpp"
#include "dspt5/decoder.hpp"
#include "dspt5/eval_report.hpp"
#include "dspt5/oai.hpp"
#include "dspt5/pipeline.hpp"
#include "dspt5/runconfig.hpp"
#include "dspt5/stats.hpp"
#include "dspt5/trainer.hpp"
#include "dspt5/rng.hpp"

namespace dspt5::cli {

namespace fs = std::filesystem;

namespace {

nlohmann::json load_config_file(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void register_env_adapters(eval::AdapterRegistry& registry) {
  const char* url = std::getenv(eval::kScorerUrlEnvVar);
  if (url == nullptr || *url == '\0') return;
  for (const std::string& name : eval::adapter_metric_names())
    registry.add(eval::make_http_adapter(name, url));
}

std::string find_checkpoint_dir(const std::string& dir) {
  if (fs::exists(fs::path(dir) / "meta.json")) return dir;
  const fs::path checkpoints = fs::path(dir) / "checkpoints";
  if (fs::exists(checkpoints)) {
    int best = -1;
    for (const auto& entry : fs::directory_iterator(checkpoints)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("epoch-", 0) == 0) {
        try {
          best = std::max(best, std::stoi(name.substr(6)));
        } catch (const std::exception&) {
        }
      }
    }
    if (best >= 0) return (checkpoints / ("epoch-" + std::to_string(best))).string();
  }
  throw std::runtime_error("no checkpoint found under " + dir);
}

// ---------------------------------------------------------------------------

int cmd_harvest(const std::string& endpoint, const std::string& out,
                const std::optional<std::string>& set_spec, int delay_ms,
                const std::string& metadata_prefix, double threshold) {
  oai::HarvestOptions options;
  options.metadata_prefix = metadata_prefix;
  options.set_spec = set_spec;
  options.min_delay_ms = delay_ms;

  std::vector<corpus::EtdRecord> rows;
  std::size_t rejected = 0, unassigned = 0;
  const std::size_t fetched = oai::harvest(endpoint, options, [&](const std::string& record_xml) {
    corpus::ParseResult parsed = corpus::parse_record(record_xml);
    if (std::holds_alternative<corpus::Rejection>(parsed)) {
      const auto& rejection = std::get<corpus::Rejection>(parsed);
      std::cerr << "[harvest] rejected record (missing " << rejection.missing_field << ")\n";
      ++rejected;
      return;
    }
    corpus::EtdRecord record = std::get<corpus::EtdRecord>(std::move(parsed));
    const std::set<corpus::College> colleges =
        corpus::assign_college(record.department, corpus::default_roster(), threshold);
    if (colleges.empty()) {
      ++unassigned;
      record.college = corpus::College::Unassigned;
      rows.push_back(std::move(record));
      return;
    }
    // Multi-college departments produce one row per college.
    for (corpus::College college : colleges) {
      corpus::EtdRecord copy = record;
      copy.college = college;
      rows.push_back(std::move(copy));
    }
  });

  corpus::write_csv_file(out, rows);
  std::cout << "harvested " << fetched << " records: " << rows.size() << " rows written, "
            << rejected << " rejected, " << unassigned << " unassigned\n";
  return 0;
}

int cmd_stats(const std::string& corpus_path, const std::string& out) {
  const auto records = corpus::read_csv_file(corpus_path);
  const nlohmann::json report = stats::corpus_stats_report(records);
  std::ofstream stream(out, std::ios::binary);
  if (!stream) throw std::runtime_error("cannot open for writing: " + out);
  stream << report.dump(2) << "\n";
  std::cout << "stats for " << records.size() << " records written to " << out << "\n";
  return 0;
}

int cmd_split(const std::string& corpus_path, double ratio, std::uint64_t seed,
              const std::string& out_train, const std::string& out_test) {
  const auto records = corpus::read_csv_file(corpus_path);
  const corpus::CorpusSplit split = corpus::split(records, ratio, seed);
  for (const std::string& warning : split.warnings) std::cerr << "[split] " << warning << "\n";
  corpus::write_csv_file(out_train, split.train);
  corpus::write_csv_file(out_test, split.test);
  std::cout << "split " << records.size() << " rows into " << split.train.size() << " train / "
            << split.test.size() << " test\n";
  return 0;
}

int cmd_train(const nlohmann::json& resolved, const std::string& corpus_path,
              const std::string& college_filter, std::string run_dir) {
  train::TrainConfig tc = train::TrainConfig::from_json(resolved.at("train"));
  train::LossConfig lc = train::LossConfig::from_json(resolved.at("loss"));

  auto records = corpus::read_csv_file(corpus_path);
  if (!college_filter.empty()) {
    const auto college = corpus::college_from_abbrev(college_filter);
    if (!college) throw std::runtime_error("unknown college: " + college_filter);
    std::erase_if(records, [&](const corpus::EtdRecord& r) { return r.college != *college; });
  }
  if (records.empty()) throw std::runtime_error("no training records after filtering");

  // Validation comes from a held-out slice of the Engineering college.
  std::vector<corpus::EtdRecord> train_records, val_records;
  {
    std::vector<std::size_t> eng_rows;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (records[i].college == corpus::College::Engineering) eng_rows.push_back(i);
    }
    std::set<std::size_t> held_out;
    if (eng_rows.size() >= 5) {
      std::mt19937_64 gen(tc.seed ^ 0x76616cULL);
      rng::shuffle(eng_rows, gen);
      const std::size_t n_val = std::max<std::size_t>(1, eng_rows.size() / 10);
      held_out.insert(eng_rows.begin(), eng_rows.begin() + static_cast<long>(n_val));
    } else if (!eng_rows.empty()) {
      std::cerr << "[train] too few Engineering rows for a validation slice; skipping\n";
    } else {
      std::cerr << "[train] no Engineering rows; training without validation\n";
    }
    for (std::size_t i = 0; i < records.size(); ++i)
      (held_out.contains(i) ? val_records : train_records).push_back(records[i]);
  }

  if (run_dir.empty())
    run_dir = (fs::path("runs") / ("train-" + config_hash(resolved).substr(0, 12))).string();
  RunDirLock lock(run_dir);
  dump_resolved_config(run_dir, "train", resolved);

  const int max_steps = resolved.value("max_steps", 0);
  const train::TrainResult result = train::train(train_records, val_records, tc, lc, run_dir, max_steps);
  if (result.diverged) {
    std::cerr << "[train] " << result.message << "\n";
    return 1;
  }
  std::cout << "train: " << result.message << "; run dir " << run_dir << "\n";
  for (const std::string& ckpt : result.checkpoints) std::cout << "checkpoint: " << ckpt << "\n";
  return 0;
}

int cmd_generate(const nlohmann::json& resolved, const std::string& checkpoint_dir,
                 const std::string& corpus_path, const std::string& out) {
  decode::DecodeConfig dc;
  dc.tau_decode = resolved.at("tau").get<double>();
  dc.gamma = resolved.at("gamma").get<double>();
  dc.num_candidates = resolved.at("num_candidates").get<int>();
  dc.max_output_tokens = resolved.at("max_output_tokens").get<int>();
  dc.top_k = resolved.at("top_k").get<int>();
  dc.seed = resolved.at("seed").get<std::uint64_t>();
  if (!(dc.tau_decode > 0.0 && dc.tau_decode <= 1.0))
    throw std::runtime_error("tau must be in (0,1]");

  const train::Checkpoint checkpoint = train::load_checkpoint(find_checkpoint_dir(checkpoint_dir));
  const auto records = corpus::read_csv_file(corpus_path);
  const auto pools = pipeline::generate_candidates(checkpoint, records, dc);
  pipeline::write_candidates_jsonl(out, pools);
  {
    nlohmann::json with_hash = resolved;
    with_hash["subcommand"] = "generate";
    with_hash["resolved_config_hash"] = config_hash(with_hash);
    std::ofstream cfg(out + ".config.json", std::ios::binary);
    cfg << with_hash.dump(2) << "\n";
  }
  std::cout << "generated " << pools.size() << " candidate pools into " << out << "\n";
  return 0;
}

int cmd_evaluate(const nlohmann::json& resolved, const std::string& triples_path,
                 const std::string& out_dir, bool reference_bertscore) {
  const auto triples = eval::read_triples_jsonl(triples_path);
  eval::AdapterRegistry registry;
  register_env_adapters(registry);
  if (reference_bertscore) registry.add(eval::make_reference_bertscore_adapter());

  const eval::MetricReport rep = eval::report(triples, registry);
  eval::write_report(rep, out_dir);
  dump_resolved_config(out_dir, "evaluate", resolved);
  std::cout << "evaluated " << triples.size() << " triples; report in " << out_dir << "\n";
  return 0;
}

int cmd_ablate(const nlohmann::json& resolved, const std::string& corpus_path,
               const std::string& out_dir, bool reference_bertscore) {
  pipeline::AblationOptions options;
  options.ratio = resolved.at("ratio").get<double>();
  options.split_seed = resolved.at("split_seed").get<std::uint64_t>();
  options.train_config = train::TrainConfig::from_json(resolved.at("train"));
  options.loss_config = train::LossConfig::from_json(resolved.at("loss"));
  options.decode_config.tau_decode = resolved.at("tau").get<double>();
  options.decode_config.gamma = resolved.at("gamma").get<double>();
  options.decode_config.num_candidates = resolved.at("num_candidates").get<int>();
  options.decode_config.max_output_tokens = resolved.at("max_output_tokens").get<int>();
  options.decode_config.seed = resolved.at("seed").get<std::uint64_t>();
  options.max_steps = resolved.value("max_steps", 0);

  const auto records = corpus::read_csv_file(corpus_path);
  RunDirLock lock(out_dir);
  dump_resolved_config(out_dir, "ablate", resolved);

  eval::AdapterRegistry registry;
  register_env_adapters(registry);
  if (reference_bertscore) registry.add(eval::make_reference_bertscore_adapter());

  const auto rows = pipeline::run_ablation(records, options, out_dir, registry);
  {
    std::ofstream out(fs::path(out_dir) / "combined_table.json", std::ios::binary);
    out << pipeline::ablation_table_json(rows).dump(2) << "\n";
  }
  {
    std::ofstream out(fs::path(out_dir) / "combined_table.csv", std::ios::binary);
    out << pipeline::ablation_table_csv(rows);
  }
  std::cout << pipeline::ablation_table_text(rows);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Academic-to-general-audience paraphrasing pipeline"};
  app.require_subcommand(1);
  int exit_code = 0;

  // --- harvest ---
  auto* harvest = app.add_subcommand("harvest", "Harvest ETD metadata over OAI-PMH into a CSV");
  std::string h_endpoint, h_out, h_set, h_prefix = "dim";
  int h_delay = 0;
  double h_threshold = 0.85;
  harvest->add_option("--endpoint", h_endpoint, "OAI-PMH base URL")->required();
  harvest->add_option("--out", h_out, "Output corpus CSV")->required();
  harvest->add_option("--set", h_set, "OAI-PMH set spec");
  harvest->add_option("--delay-ms", h_delay, "Minimum delay between requests");
  harvest->add_option("--metadata-prefix", h_prefix, "Metadata prefix (default dim)");
  harvest->add_option("--college-threshold", h_threshold, "Fuzzy-match threshold");
  harvest->callback([&] {
    exit_code = cmd_harvest(h_endpoint, h_out,
                            h_set.empty() ? std::nullopt : std::optional<std::string>(h_set),
                            h_delay, h_prefix, h_threshold);
  });

  // --- stats ---
  auto* stats_cmd = app.add_subcommand("stats", "Per-college corpus statistics report");
  std::string s_corpus, s_out = "stats.json";
  stats_cmd->add_option("--corpus", s_corpus, "Corpus CSV")->required();
  stats_cmd->add_option("--out", s_out, "Output JSON report");
  stats_cmd->callback([&] { exit_code = cmd_stats(s_corpus, s_out); });

  // --- split ---
  auto* split_cmd = app.add_subcommand("split", "Stratified train/test split");
  std::string sp_corpus, sp_train = "train.csv", sp_test = "test.csv";
  double sp_ratio = 0.8;
  std::uint64_t sp_seed = 0;
  split_cmd->add_option("--corpus", sp_corpus, "Corpus CSV")->required();
  split_cmd->add_option("--ratio", sp_ratio, "Train fraction (default 0.8)");
  split_cmd->add_option("--seed", sp_seed, "Shuffle seed");
  split_cmd->add_option("--out-train", sp_train, "Train CSV path");
  split_cmd->add_option("--out-test", sp_test, "Test CSV path");
  split_cmd->callback([&] { exit_code = cmd_split(sp_corpus, sp_ratio, sp_seed, sp_train, sp_test); });

  // --- train ---
  auto* train_cmd = app.add_subcommand("train", "Fine-tune the backbone + prompt encoder");
  std::string t_corpus, t_college, t_run_dir, t_config, t_ablation;
  train::TrainConfig t_defaults;
  train::LossConfig t_loss_defaults;
  double t_lr = t_defaults.learning_rate, t_lambda = t_loss_defaults.lambda,
         t_tau = t_loss_defaults.tau_nce, t_wd = t_defaults.weight_decay;
  int t_batch = t_defaults.batch_size, t_epochs = t_defaults.epochs,
      t_max_src = t_defaults.max_source_len, t_prompt_len = t_defaults.prompt_len,
      t_keyword_len = t_defaults.keyword_len, t_vocab = t_defaults.vocab_size,
      t_d_model = t_defaults.d_model, t_layers = t_defaults.n_layers,
      t_ffn = t_defaults.ffn_hidden, t_negatives = t_loss_defaults.negatives_count,
      t_max_steps = 0;
  std::uint64_t t_seed = 0;
  train_cmd->add_option("--corpus", t_corpus, "Training corpus CSV")->required();
  train_cmd->add_option("--college", t_college, "Restrict to one college (abbreviation)");
  auto* o_ablation = train_cmd->add_option("--ablation", t_ablation,
                                           "finetune_only|dynamic|dyn_soft|dyn_soft_con|all");
  auto* o_lr = train_cmd->add_option("--lr", t_lr, "Learning rate (default 5e-5)");
  auto* o_lambda = train_cmd->add_option("--lambda", t_lambda, "Contrastive weight (default 0.3)");
  auto* o_tau = train_cmd->add_option("--tau-nce", t_tau, "InfoNCE temperature (default 0.1)");
  auto* o_negatives = train_cmd->add_option("--negatives", t_negatives,
                                            "Negatives per sample (0 = match positives)");
  auto* o_batch = train_cmd->add_option("--batch-size", t_batch, "Batch size (default 4)");
  auto* o_epochs = train_cmd->add_option("--epochs", t_epochs, "Epochs (default 1)");
  auto* o_seed = train_cmd->add_option("--seed", t_seed, "Seed");
  auto* o_max_src = train_cmd->add_option("--max-source-len", t_max_src, "Source tokens (default 512)");
  auto* o_prompt_len = train_cmd->add_option("--prompt-len", t_prompt_len, "Prompt tokens (default 16)");
  auto* o_keyword_len = train_cmd->add_option("--keyword-len", t_keyword_len, "Keyword tokens (default 16)");
  auto* o_vocab = train_cmd->add_option("--vocab-size", t_vocab, "Vocabulary cap");
  auto* o_d_model = train_cmd->add_option("--d-model", t_d_model, "Model width");
  auto* o_layers = train_cmd->add_option("--n-layers", t_layers, "Encoder/decoder layers");
  auto* o_ffn = train_cmd->add_option("--ffn-hidden", t_ffn, "Feed-forward width");
  auto* o_wd = train_cmd->add_option("--weight-decay", t_wd, "AdamW weight decay");
  auto* o_max_steps = train_cmd->add_option("--max-steps", t_max_steps, "Cap optimizer steps (0 = off)");
  train_cmd->add_option("--run-dir", t_run_dir, "Run directory (default runs/train-<hash>)");
  train_cmd->add_option("--config", t_config, "JSON config file (flags override it)");
  train_cmd->callback([&] {
    nlohmann::json train_json = t_defaults.to_json();
    nlohmann::json loss_json = t_loss_defaults.to_json();
    const nlohmann::json file = load_config_file(t_config);
    if (file.contains("train")) train_json = merge_config(train_json, file.at("train"));
    if (file.contains("loss")) loss_json = merge_config(loss_json, file.at("loss"));
    nlohmann::json cli_train = nlohmann::json::object();
    if (o_ablation->count() > 0) cli_train["ablation_mode"] = t_ablation;
    if (o_lr->count() > 0) cli_train["learning_rate"] = t_lr;
    if (o_batch->count() > 0) cli_train["batch_size"] = t_batch;
    if (o_epochs->count() > 0) cli_train["epochs"] = t_epochs;
    if (o_seed->count() > 0) cli_train["seed"] = t_seed;
    if (o_max_src->count() > 0) cli_train["max_source_len"] = t_max_src;
    if (o_prompt_len->count() > 0) cli_train["prompt_len"] = t_prompt_len;
    if (o_keyword_len->count() > 0) cli_train["keyword_len"] = t_keyword_len;
    if (o_vocab->count() > 0) cli_train["vocab_size"] = t_vocab;
    if (o_d_model->count() > 0) cli_train["d_model"] = t_d_model;
    if (o_layers->count() > 0) cli_train["n_layers"] = t_layers;
    if (o_ffn->count() > 0) cli_train["ffn_hidden"] = t_ffn;
    if (o_wd->count() > 0) cli_train["weight_decay"] = t_wd;
    train_json = merge_config(train_json, cli_train);
    nlohmann::json cli_loss = nlohmann::json::object();
    if (o_lambda->count() > 0) cli_loss["lambda"] = t_lambda;
    if (o_tau->count() > 0) cli_loss["tau_nce"] = t_tau;
    if (o_negatives->count() > 0) cli_loss["negatives_count"] = t_negatives;
    loss_json = merge_config(loss_json, cli_loss);

    nlohmann::json resolved = {{"train", train_json}, {"loss", loss_json}, {"corpus", t_corpus}};
    if (o_max_steps->count() > 0) {
      resolved["max_steps"] = t_max_steps;
    } else if (file.contains("max_steps")) {
      resolved["max_steps"] = file.at("max_steps");
    }
    if (!t_college.empty()) resolved["college"] = t_college;
    exit_code = cmd_train(resolved, t_corpus, t_college, t_run_dir);
  });

  // --- generate ---
  auto* gen_cmd = app.add_subcommand("generate", "Sample candidates and crowd-select outputs");
  std::string g_checkpoint, g_corpus, g_out = "candidates.jsonl", g_config;
  decode::DecodeConfig g_defaults;
  double g_tau = g_defaults.tau_decode, g_gamma = g_defaults.gamma;
  int g_num = g_defaults.num_candidates, g_max_tokens = g_defaults.max_output_tokens,
      g_top_k = g_defaults.top_k;
  std::uint64_t g_seed = 0;
  gen_cmd->add_option("--checkpoint", g_checkpoint, "Checkpoint or run directory")->required();
  gen_cmd->add_option("--corpus", g_corpus, "Test corpus CSV")->required();
  gen_cmd->add_option("--out", g_out, "Candidates JSONL path");
  auto* go_num = gen_cmd->add_option("--num-candidates", g_num, "Pool size (default 16)");
  auto* go_tau = gen_cmd->add_option("--tau", g_tau, "Sampling temperature (default 0.5)");
  auto* go_gamma = gen_cmd->add_option("--gamma", g_gamma, "Edit alignment weight (default 0.1)");
  auto* go_max = gen_cmd->add_option("--max-output-tokens", g_max_tokens, "Generation cap");
  auto* go_topk = gen_cmd->add_option("--top-k", g_top_k, "Optional top-k cutoff (0 = off)");
  auto* go_seed = gen_cmd->add_option("--seed", g_seed, "Sampling seed");
  gen_cmd->add_option("--config", g_config, "JSON config file (flags override it)");
  gen_cmd->callback([&] {
    nlohmann::json resolved = {{"tau", g_defaults.tau_decode},
                               {"gamma", g_defaults.gamma},
                               {"num_candidates", g_defaults.num_candidates},
                               {"max_output_tokens", g_defaults.max_output_tokens},
                               {"top_k", g_defaults.top_k},
                               {"seed", 0}};
    resolved = merge_config(resolved, load_config_file(g_config));
    nlohmann::json cli_json = nlohmann::json::object();
    if (go_tau->count() > 0) cli_json["tau"] = g_tau;
    if (go_gamma->count() > 0) cli_json["gamma"] = g_gamma;
    if (go_num->count() > 0) cli_json["num_candidates"] = g_num;
    if (go_max->count() > 0) cli_json["max_output_tokens"] = g_max_tokens;
    if (go_topk->count() > 0) cli_json["top_k"] = g_top_k;
    if (go_seed->count() > 0) cli_json["seed"] = g_seed;
    resolved = merge_config(resolved, cli_json);
    resolved["checkpoint"] = g_checkpoint;
    resolved["corpus"] = g_corpus;
    exit_code = cmd_generate(resolved, g_checkpoint, g_corpus, g_out);
  });

  // --- evaluate ---
  auto* eval_cmd = app.add_subcommand("evaluate", "Metric report over (source, reference, hypothesis) triples");
  std::string e_triples, e_out = "report";
  bool e_ref_bertscore = false;
  eval_cmd->add_option("--triples", e_triples, "Triples JSONL")->required();
  eval_cmd->add_option("--out", e_out, "Report directory");
  eval_cmd->add_flag("--reference-bertscore", e_ref_bertscore,
                     "Use the built-in deterministic bertscore adapter");
  eval_cmd->callback([&] {
    const nlohmann::json resolved = {{"triples", e_triples},
                                     {"reference_bertscore", e_ref_bertscore}};
    exit_code = cmd_evaluate(resolved, e_triples, e_out, e_ref_bertscore);
  });

  // --- ablate ---
  auto* ablate_cmd = app.add_subcommand("ablate", "Run the five component variants and combine the results");
  std::string a_corpus, a_out = "ablation", a_config;
  bool a_ref_bertscore = false;
  double a_ratio = 0.8;
  std::uint64_t a_split_seed = 0;
  int a_max_steps = 0;
  ablate_cmd->add_option("--corpus", a_corpus, "Corpus CSV")->required();
  ablate_cmd->add_option("--out", a_out, "Output directory");
  auto* ao_ratio = ablate_cmd->add_option("--ratio", a_ratio, "Split ratio (default 0.8)");
  auto* ao_seed = ablate_cmd->add_option("--split-seed", a_split_seed, "Split seed");
  auto* ao_max_steps = ablate_cmd->add_option("--max-steps", a_max_steps, "Cap steps per variant");
  ablate_cmd->add_flag("--reference-bertscore", a_ref_bertscore,
                       "Use the built-in deterministic bertscore adapter");
  ablate_cmd->add_option("--config", a_config, "JSON config file (flags override it)");
  ablate_cmd->callback([&] {
    train::TrainConfig tc;
    train::LossConfig lc;
    decode::DecodeConfig dc;
    nlohmann::json resolved = {{"train", tc.to_json()},
                               {"loss", lc.to_json()},
                               {"ratio", a_ratio},
                               {"split_seed", a_split_seed},
                               {"tau", dc.tau_decode},
                               {"gamma", dc.gamma},
                               {"num_candidates", dc.num_candidates},
                               {"max_output_tokens", dc.max_output_tokens},
                               {"seed", 0},
                               {"max_steps", 0}};
    const nlohmann::json file = load_config_file(a_config);
    for (const auto& [key, value] : file.items()) {
      if (key == "train" || key == "loss") {
        resolved[key] = merge_config(resolved[key], value);
      } else {
        resolved[key] = value;
      }
    }
    if (ao_ratio->count() > 0) resolved["ratio"] = a_ratio;
    if (ao_seed->count() > 0) resolved["split_seed"] = a_split_seed;
    if (ao_max_steps->count() > 0) resolved["max_steps"] = a_max_steps;
    resolved["corpus"] = a_corpus;
    exit_code = cmd_ablate(resolved, a_corpus, a_out, a_ref_bertscore);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}

}  // namespace dspt5::cli
