// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace dspt5::eval {

enum class BleuMode { Sentence, Document };

using Tokens = std::vector<std::string>;

/// 4-gram precision geometric mean with brevity penalty, in percent.
/// Document mode scores the whole text as one segment (no smoothing).
/// Sentence mode segments both sides, pairs sentences by index up to the
/// shorter count, applies add-one smoothing on n>=2 precisions and averages
/// the per-sentence scores.
double bleu(const std::string& hypothesis, const std::vector<std::string>& references,
            BleuMode mode);
double bleu_tokens(const Tokens& hypothesis, const std::vector<Tokens>& references, bool smooth);

/// n-gram overlap F-measure in percent, n in {1,2}.
double rouge_n(const std::string& hypothesis, const std::string& reference, int n);
double rouge_n_tokens(const Tokens& hypothesis, const Tokens& reference, int n);

/// Unigram alignment (exact, then stemmed) with fragmentation penalty:
/// score = F_mean * (1 - 0.5 * (chunks/matches)^3), F_mean = PR/(0.9P+0.1R),
/// in percent.
double meteor(const std::string& hypothesis, const std::string& reference);
double meteor_tokens(const Tokens& hypothesis, const Tokens& reference);

/// Mean of add-F1, keep-F1 and delete-precision over n-grams n=1..4 against
/// source and reference, scaled to [0,100]. Components with empty
/// denominators count as perfect (published convention).
double sari(const std::string& source, const std::string& hypothesis, const std::string& reference);
double sari_tokens(const Tokens& source, const Tokens& hypothesis, const Tokens& reference);

/// Porter stemmer (used by the METEOR stem stage).
std::string porter_stem(const std::string& word);

}  // namespace dspt5::eval
