// SPDX-License-Identifier: Apache-2.0
#include "dspt5/prompt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "dspt5/rng.hpp"
#include "dspt5/text.hpp"

namespace dspt5::prompt {

nlohmann::json KeywordSet::to_json() const {
  nlohmann::json pos = nlohmann::json::array();
  for (const auto& [phrase, score] : positives) pos.push_back({phrase, score});
  return {{"source_id", source_id}, {"positives", pos}, {"negatives", negatives}};
}

KeywordSet KeywordSet::from_json(const nlohmann::json& j) {
  KeywordSet set;
  set.source_id = j.at("source_id").get<std::string>();
  for (const auto& entry : j.at("positives"))
    set.positives.emplace_back(entry.at(0).get<std::string>(), entry.at(1).get<double>());
  set.negatives = j.at("negatives").get<std::vector<std::string>>();
  return set;
}

std::vector<double> BagOfWordsEmbedder::embed(const std::vector<std::string>& phrase_tokens,
                                              const std::vector<std::string>& document_tokens) const {
  std::map<std::string, std::size_t> vocab;
  for (const std::string& t : document_tokens) vocab.emplace(t, vocab.size());
  std::vector<double> vec(vocab.size(), 0.0);
  for (const std::string& t : phrase_tokens) {
    auto it = vocab.find(t);
    if (it != vocab.end()) vec[it->second] += 1.0;
  }
  return vec;
}

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) dot += a[i] * b[i];
  for (double v : a) na += v * v;
  for (double v : b) nb += v * v;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

struct Candidate {
  std::string phrase;
  std::size_t position;
  double score;
};

}  // namespace

std::vector<std::pair<std::string, double>> extract_keywords(const std::string& document,
                                                             const EmbeddingProvider& embedder,
                                                             std::size_t count) {
  const std::vector<std::string> tokens = text::tokenize_words(document);
  if (tokens.empty() || count == 0) return {};

  // Candidate phrases: non-stop unigrams and bigrams of non-stop tokens,
  // deduplicated at their earliest position.
  std::map<std::string, std::size_t> first_position;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!text::is_stop_word(tokens[i])) first_position.emplace(tokens[i], i);
    if (i + 1 < tokens.size() && !text::is_stop_word(tokens[i]) &&
        !text::is_stop_word(tokens[i + 1]))
      first_position.emplace(tokens[i] + " " + tokens[i + 1], i);
  }
  if (first_position.empty()) return {};

  const std::vector<double> doc_vec = embedder.embed(tokens, tokens);

  std::vector<Candidate> candidates;
  candidates.reserve(first_position.size());
  for (const auto& [phrase, position] : first_position) {
    const std::vector<std::string> phrase_tokens = text::split_whitespace(phrase);
    candidates.push_back({phrase, position, cosine(doc_vec, embedder.embed(phrase_tokens, tokens))});
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.position < b.position;
  });

  std::vector<std::pair<std::string, double>> out;
  for (const Candidate& c : candidates) {
    if (out.size() >= count) break;
    out.emplace_back(c.phrase, c.score);
  }
  return out;
}

std::string build_prompt(const PromptTemplate& tmpl,
                         const std::vector<std::pair<std::string, double>>& positives) {
  if (positives.empty()) return kStaticPrompt;
  std::string keywords;
  int used_tokens = 0;
  for (const auto& [phrase, score] : positives) {
    const auto phrase_tokens = text::split_whitespace(phrase);
    if (used_tokens + static_cast<int>(phrase_tokens.size()) > tmpl.max_keyword_tokens) break;
    if (!keywords.empty()) keywords += tmpl.separator;
    keywords += phrase;
    used_tokens += static_cast<int>(phrase_tokens.size());
  }
  if (keywords.empty()) return kStaticPrompt;
  return tmpl.prefix_text + keywords;
}

std::vector<std::string> sample_negatives(const std::vector<std::string>& source_tokens,
                                          const std::vector<std::pair<std::string, double>>& positives,
                                          std::size_t count, std::uint64_t seed) {
  std::set<std::string> blocked;
  for (const auto& [phrase, score] : positives) {
    for (const std::string& tok : text::split_whitespace(phrase)) blocked.insert(tok);
  }

  // Distinct eligible tokens in first-occurrence order (deterministic base
  // ordering for the seeded draw).
  std::vector<std::string> eligible;
  std::set<std::string> seen;
  for (const std::string& raw : source_tokens) {
    const std::string tok = text::to_lower(raw);
    if (tok.empty() || text::is_stop_word(tok) || blocked.contains(tok)) continue;
    if (seen.insert(tok).second) eligible.push_back(tok);
  }
  if (eligible.empty()) return {};

  std::mt19937_64 gen(seed);
  const auto picks = rng::sample_without_replacement(eligible.size(), count, gen);
  std::vector<std::string> out;
  out.reserve(picks.size());
  for (std::size_t idx : picks) out.push_back(eligible[idx]);
  return out;
}

}  // namespace dspt5::prompt
