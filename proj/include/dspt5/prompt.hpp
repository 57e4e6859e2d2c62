// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace dspt5::prompt {

/// Ranked extracted keywords (K^pos) and sampled negatives (K^neg) for one
/// source document. Negatives are guaranteed disjoint from the positives.
struct KeywordSet {
  std::string source_id;
  std::vector<std::pair<std::string, double>> positives;  // non-increasing score
  std::vector<std::string> negatives;

  nlohmann::json to_json() const;
  static KeywordSet from_json(const nlohmann::json& j);
};

struct PromptTemplate {
  std::string prefix_text = "Generate the document by reducing the domain knowledge of ";
  std::string separator = ", ";
  int max_prompt_tokens = 16;
  int max_keyword_tokens = 16;
};

/// Instruction used when keyword extraction yields nothing (and by the
/// plain fine-tuning ablation).
inline constexpr const char* kStaticPrompt =
    "Generate another version of the provided document for general audiences.";

/// Fixed-width text embeddings for keyword scoring. Implementations must be
/// deterministic.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  /// `document_tokens` defines the embedding space for vocabulary-relative
  /// implementations; `phrase_tokens` is the text to embed.
  virtual std::vector<double> embed(const std::vector<std::string>& phrase_tokens,
                                    const std::vector<std::string>& document_tokens) const = 0;
};

/// Deterministic reference embedder: term-frequency bag over the document's
/// own vocabulary, so cosine(document, phrase) rewards frequent terms.
class BagOfWordsEmbedder final : public EmbeddingProvider {
 public:
  std::vector<double> embed(const std::vector<std::string>& phrase_tokens,
                            const std::vector<std::string>& document_tokens) const override;
};

/// Top-`count` 1-2 gram candidate phrases by cosine similarity between the
/// document embedding and the phrase embedding, stop words filtered, ties
/// broken by earlier document position.
std::vector<std::pair<std::string, double>> extract_keywords(const std::string& document,
                                                             const EmbeddingProvider& embedder,
                                                             std::size_t count);

/// Template prefix + separator-joined keywords, truncated to the keyword
/// token budget; falls back to the static prompt when `positives` is empty.
std::string build_prompt(const PromptTemplate& tmpl,
                         const std::vector<std::pair<std::string, double>>& positives);

/// Uniform sample without replacement from the source's distinct tokens,
/// excluding stop words and any token occurring in a positive phrase.
/// Deterministic for a fixed seed.
std::vector<std::string> sample_negatives(const std::vector<std::string>& source_tokens,
                                          const std::vector<std::pair<std::string, double>>& positives,
                                          std::size_t count, std::uint64_t seed);

}  // namespace dspt5::prompt
