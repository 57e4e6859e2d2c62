// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dspt5/corpus.hpp"
#include "json.hpp"

namespace dspt5::stats {

struct SentenceStats {
  double avg_sentences = 0.0;     // mean sentence count per document
  double avg_sentence_len = 0.0;  // words per sentence, pooled over the corpus
  std::size_t documents_used = 0;
  std::size_t documents_skipped = 0;  // zero-sentence documents, excluded
};

/// Per-document sentence counts averaged over documents; sentence length is
/// total words over total sentences (the sentence-count-weighted mean of
/// per-document means).
SentenceStats sentence_stats(const std::vector<std::string>& documents);

struct MtldResult {
  std::optional<double> value;  // missing when no factor ever completes
  bool reliable = true;         // false below 50 tokens
};

/// Bidirectional MTLD, type-token-ratio threshold 0.72: the factor count
/// grows by 1 whenever the running TTR drops below the threshold (segment
/// resets); the final partial factor counts (1 - TTR)/(1 - 0.72). The
/// result averages the forward and reversed passes.
MtldResult mtld(const std::vector<std::string>& tokens);

/// Flesch Reading-Ease Score: 206.835 - 1.015 (words/sentences)
/// - 84.6 (syllables/words). Throws on empty text.
double fres(const std::string& text_in);

/// The eight readability formulas behind the consensus, as integer grades.
struct GradeVotes {
  int flesch_kincaid = 0;
  int flesch_reading_ease = 0;  // FRES bucketed to a grade
  int smog = 0;
  int coleman_liau = 0;
  int automated_readability = 0;
  int dale_chall = 0;
  int linsear_write = 0;
  int gunning_fog = 0;

  std::vector<int> as_vector() const;
};

GradeVotes readability_grades(const std::string& text_in);

struct GradeBand {
  int lower = 0;  // band is lower-(lower+1)
  std::string label() const;  // e.g. "15th-16th"
};

/// Modal grade of the eight votes, ties broken toward the lower grade.
GradeBand readability_consensus(const std::string& text_in);

// ---------------------------------------------------------------------------
// Per-college report (source = academic abstracts, target = general-audience)

struct SideStats {
  double avg_sentences = 0.0;
  double avg_sentence_len = 0.0;
  std::optional<double> mtld;
  bool mtld_reliable = true;
  GradeBand readability;
};

struct CollegeStats {
  SideStats source;
  SideStats target;
  std::size_t documents = 0;
};

/// Stats per college plus an "all" aggregate, as a JSON report keyed by
/// college abbreviation. MTLD and readability are computed over the
/// college's concatenated documents.
nlohmann::json corpus_stats_report(const std::vector<corpus::EtdRecord>& records);

CollegeStats college_stats(const std::vector<const corpus::EtdRecord*>& records);

}  // namespace dspt5::stats
