// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dspt5/corpus.hpp"
#include "dspt5/nn.hpp"
#include "dspt5/prompt.hpp"
#include "dspt5/prompt_encoder.hpp"
#include "json.hpp"

namespace dspt5::train {

enum class AblationMode { FinetuneOnly, Dynamic, DynSoft, DynSoftCon, All };

std::string_view to_string(AblationMode mode);
std::optional<AblationMode> ablation_from_string(std::string_view name);
const std::vector<AblationMode>& all_ablation_modes();

/// Whether a mode feeds soft keyword vectors into the model input.
bool uses_soft_prompt(AblationMode mode);
/// Whether a mode adds the contrastive term to the loss.
bool uses_contrastive(AblationMode mode);
/// Whether crowd-sampling decoding applies at inference.
bool uses_crowd_decoding(AblationMode mode);

struct LossConfig {
  double lambda = 0.3;      // contrastive weight
  double tau_nce = 0.1;     // InfoNCE temperature
  int negatives_count = 0;  // 0 = match the positives count per sample

  nlohmann::json to_json() const;
  static LossConfig from_json(const nlohmann::json& j);
};

struct TrainConfig {
  double learning_rate = 5e-5;
  int batch_size = 4;
  int max_source_len = 512;
  int prompt_len = 16;
  int keyword_len = 16;
  int epochs = 1;
  std::uint64_t seed = 0;
  AblationMode ablation_mode = AblationMode::All;
  double weight_decay = 0.01;

  // Built-in backbone dimensions.
  int vocab_size = 256;
  int d_model = 16;
  int n_layers = 2;
  int ffn_hidden = 32;

  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

// ---------------------------------------------------------------------------
// Loss operations

/// Mean negative log-likelihood of `targets` given per-step probability
/// distributions (teacher forced).
double ce_loss(const std::vector<std::vector<double>>& step_distributions,
               const std::vector<int>& targets);

/// -log( exp(s(key,pos)/tau) / (exp(s(key,pos)/tau) + sum_neg exp(s(key,neg)/tau)) ),
/// computed with max subtraction. Requires at least one negative.
double info_nce(const encoder::Representation& key, const encoder::Representation& pos,
                const std::vector<encoder::Representation>& negatives, double tau);

/// (1 - lambda) * ce + lambda * nce; lambda outside [0,1] is a config error.
double hybrid_loss(double ce, double nce, double lambda);

// Autograd versions used by the training loop.
nn::Tensor info_nce_graph(const nn::Tensor& r_key, const nn::Tensor& r_pos,
                          const std::vector<nn::Tensor>& r_negs, double tau);
nn::Tensor hybrid_loss_graph(const nn::Tensor& ce, const nn::Tensor& nce, double lambda);

/// Model input sequence E_prompt (+) r_pos (+) E_X with an attention mask
/// covering the full concatenation. Parts must share the embedding width;
/// r_pos may be undefined (ablations without a soft prompt).
struct AssembledInput {
  nn::Tensor sequence;
  std::vector<int> attention_mask;  // all ones over the concatenation
};
AssembledInput assemble_input(const nn::Tensor& prompt_embeds, const nn::Tensor& soft_keywords,
                              const nn::Tensor& source_embeds);

// ---------------------------------------------------------------------------
// Training loop

struct StepLog {
  int step = 0;
  double ce = 0.0;
  double nce = 0.0;
  double hybrid = 0.0;
};

struct TrainResult {
  std::vector<StepLog> steps;
  std::vector<std::string> checkpoints;  // one directory per completed epoch
  bool diverged = false;
  std::string message;
};

/// Fine-tune the built-in backbone + prompt encoder on a corpus split.
/// Writes train_log.jsonl and checkpoints/epoch-N/ under run_dir (pass an
/// empty run_dir to keep everything in memory). Deterministic for a fixed
/// seed. `max_steps` > 0 caps total optimizer steps (smoke runs).
TrainResult train(const std::vector<corpus::EtdRecord>& train_records,
                  const std::vector<corpus::EtdRecord>& validation_records,
                  const TrainConfig& config, const LossConfig& loss_config,
                  const std::string& run_dir, int max_steps = 0);

/// Checkpoint loading for generation/evaluation.
struct Checkpoint {
  nn::Seq2SeqModel model;
  encoder::PromptEncoder prompt_encoder;
  nn::Vocab vocab;
  TrainConfig train_config;
  LossConfig loss_config;
};
Checkpoint load_checkpoint(const std::string& dir);
void save_checkpoint(const std::string& dir, const nn::Seq2SeqModel& model,
                     const encoder::PromptEncoder& prompt_encoder, const nn::Vocab& vocab,
                     const TrainConfig& config, const LossConfig& loss_config);

}  // namespace dspt5::train
