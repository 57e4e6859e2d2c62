// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dspt5/levenshtein.hpp"

namespace dspt5::decode {

struct DecodeConfig {
  double tau_decode = 0.5;   // sampling temperature, in (0,1]
  double gamma = 0.1;        // edit-similarity weight in the crowd objective
  int num_candidates = 16;   // pool size C_n
  int max_output_tokens = 128;
  int top_k = 0;             // 0 = plain temperature softmax (extension flag)
  std::uint64_t seed = 0;
};

struct CandidatePool {
  std::string source_id;
  std::vector<std::vector<std::string>> candidates;
  std::vector<double> crowd_scores;
  std::size_t chosen_index = 0;
};

/// Per-token embeddings for BERTScore-style alignment. Implementations must
/// be deterministic for fixed inputs.
class TokenScorer {
 public:
  virtual ~TokenScorer() = default;
  /// Unit-normalized embedding per token (rows), given both sides so
  /// vocabulary-relative scorers can build a joint space.
  virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& tokens,
                                                 const std::vector<std::string>& other) const = 0;
};

/// Deterministic reference scorer: one-hot over the pair's joint vocabulary,
/// so cosine is 1 for equal tokens and 0 otherwise.
class OneHotScorer final : public TokenScorer {
 public:
  std::vector<std::vector<double>> embed(const std::vector<std::string>& tokens,
                                         const std::vector<std::string>& other) const override;
};

/// softmax(logits / tau); throws std::invalid_argument unless tau in (0,1].
std::vector<double> temperature_probs(const std::vector<double>& logits, double tau);

/// Inverse-CDF draw from `probs` using one uniform from `gen`.
std::size_t sample_index(const std::vector<double>& probs, std::mt19937_64& gen);

/// Greedy-matching F1 over pairwise token cosine similarities
/// (BERTScore-style): precision averages each candidate token's best match,
/// recall averages each reference token's best match.
double semantic_alignment(const std::vector<std::string>& candidate,
                          const std::vector<std::string>& other, const TokenScorer& scorer);

/// Crowd selection: each candidate is scored by the sum over the other
/// candidates of semantic + gamma * edit-similarity alignment; the argmax
/// (lowest index on ties) wins. Self-comparisons are excluded. Throws
/// std::invalid_argument on an empty pool.
CandidatePool crowd_select(const std::vector<std::vector<std::string>>& candidates, double gamma,
                           const TokenScorer& scorer);

}  // namespace dspt5::decode
