// SPDX-License-Identifier: Apache-2.0
#include "dspt5/decoder.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "dspt5/rng.hpp"

namespace dspt5::decode {

double levenshtein_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  const std::size_t longest = std::max(a.size(), b.size());
  const std::size_t dist = levenshtein_distance(a, b);
  return 1.0 - static_cast<double>(dist) / static_cast<double>(longest);
}

std::vector<std::vector<double>> OneHotScorer::embed(const std::vector<std::string>& tokens,
                                                     const std::vector<std::string>& other) const {
  std::map<std::string, std::size_t> vocab;
  for (const std::string& t : tokens) vocab.emplace(t, vocab.size());
  for (const std::string& t : other) vocab.emplace(t, vocab.size());
  std::vector<std::vector<double>> out(tokens.size(), std::vector<double>(vocab.size(), 0.0));
  for (std::size_t i = 0; i < tokens.size(); ++i) out[i][vocab.at(tokens[i])] = 1.0;
  return out;
}

std::vector<double> temperature_probs(const std::vector<double>& logits, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("temperature must be in (0,1]");
  if (logits.empty()) throw std::invalid_argument("empty logits");
  double max_scaled = logits[0] / tau;
  for (double v : logits) max_scaled = std::max(max_scaled, v / tau);
  std::vector<double> probs(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] / tau - max_scaled);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

std::size_t sample_index(const std::vector<double>& probs, std::mt19937_64& gen) {
  const double u = rng::uniform01(gen);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  return probs.size() - 1;
}

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

double semantic_alignment(const std::vector<std::string>& candidate,
                          const std::vector<std::string>& other, const TokenScorer& scorer) {
  if (candidate.empty() || other.empty()) return 0.0;
  const auto cand_vecs = scorer.embed(candidate, other);
  const auto other_vecs = scorer.embed(other, candidate);

  std::vector<std::vector<double>> sim(cand_vecs.size(), std::vector<double>(other_vecs.size()));
  for (std::size_t i = 0; i < cand_vecs.size(); ++i) {
    for (std::size_t j = 0; j < other_vecs.size(); ++j) sim[i][j] = cosine(cand_vecs[i], other_vecs[j]);
  }

  double precision = 0.0;
  for (std::size_t i = 0; i < cand_vecs.size(); ++i) {
    double best = 0.0;
    for (std::size_t j = 0; j < other_vecs.size(); ++j) best = std::max(best, sim[i][j]);
    precision += best;
  }
  precision /= static_cast<double>(cand_vecs.size());

  double recall = 0.0;
  for (std::size_t j = 0; j < other_vecs.size(); ++j) {
    double best = 0.0;
    for (std::size_t i = 0; i < cand_vecs.size(); ++i) best = std::max(best, sim[i][j]);
    recall += best;
  }
  recall /= static_cast<double>(other_vecs.size());

  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

CandidatePool crowd_select(const std::vector<std::vector<std::string>>& candidates, double gamma,
                           const TokenScorer& scorer) {
  if (candidates.empty()) throw std::invalid_argument("crowd_select: empty candidate pool");

  CandidatePool pool;
  pool.candidates = candidates;
  pool.crowd_scores.assign(candidates.size(), 0.0);

  const std::size_t n = candidates.size();
  // Alignment entries are pairwise-independent; both directions are needed
  // since semantic F1 is symmetric but computed once per ordered pair here.
  std::vector<std::vector<double>> sem(n, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> lev(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      sem[i][j] = sem[j][i] = semantic_alignment(candidates[i], candidates[j], scorer);
      lev[i][j] = lev[j][i] = levenshtein_similarity(candidates[i], candidates[j]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double score = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      score += sem[i][j] + gamma * lev[i][j];
    }
    pool.crowd_scores[i] = score;
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (pool.crowd_scores[i] > pool.crowd_scores[best]) best = i;
  }
  pool.chosen_index = best;
  return pool;
}

}  // namespace dspt5::decode
