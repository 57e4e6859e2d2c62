// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "dspt5/corpus.hpp"
#include "dspt5/decoder.hpp"
#include "dspt5/eval_report.hpp"
#include "dspt5/trainer.hpp"
#include "json.hpp"

namespace dspt5::pipeline {

/// Sample candidate outputs for one record and pick the crowd winner.
/// Non-crowd ablation modes sample a single candidate. Sampling masks the
/// pad/bos/unk ids and never emits EOS as the first token, so a candidate
/// is always non-empty. Deterministic per (seed, record index, candidate).
decode::CandidatePool generate_for_record(const train::Checkpoint& checkpoint,
                                          const corpus::EtdRecord& record,
                                          std::size_t record_index,
                                          const decode::DecodeConfig& config,
                                          const decode::TokenScorer& scorer);

std::vector<decode::CandidatePool> generate_candidates(const train::Checkpoint& checkpoint,
                                                       const std::vector<corpus::EtdRecord>& records,
                                                       const decode::DecodeConfig& config);

/// candidates.jsonl: {source_id, candidates, crowd_scores, chosen_index}.
void write_candidates_jsonl(const std::string& path,
                            const std::vector<decode::CandidatePool>& pools);

/// Join each pool's chosen candidate with the record's reference into an
/// evaluation triple (records and pools pair by index).
std::vector<eval::EvalTriple> build_triples(const std::vector<corpus::EtdRecord>& records,
                                            const std::vector<decode::CandidatePool>& pools);

/// One ablation table row: variant name + the overall metric panel.
struct AblationRow {
  std::string variant;
  eval::MetricRow metrics;
};

struct AblationOptions {
  double ratio = 0.8;
  std::uint64_t split_seed = 0;
  train::TrainConfig train_config;   // ablation_mode overridden per variant
  train::LossConfig loss_config;
  decode::DecodeConfig decode_config;
  int max_steps = 0;  // 0 = full epochs
};

/// Run the five component variants (finetune_only, dynamic, dyn_soft,
/// dyn_soft_con, all) end to end: train, generate on the test split,
/// evaluate. Artifacts land under out_dir/<variant>/.
std::vector<AblationRow> run_ablation(const std::vector<corpus::EtdRecord>& records,
                                      const AblationOptions& options, const std::string& out_dir,
                                      eval::AdapterRegistry& registry);

nlohmann::json ablation_table_json(const std::vector<AblationRow>& rows);
std::string ablation_table_csv(const std::vector<AblationRow>& rows);
std::string ablation_table_text(const std::vector<AblationRow>& rows);

}  // namespace dspt5::pipeline
