// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dspt5/corpus.hpp"
#include "json.hpp"

namespace dspt5::eval {

struct EvalTriple {
  std::string source;     // academic abstract
  std::string reference;  // general-audience abstract
  std::string hypothesis; // model output
  corpus::College college = corpus::College::Unassigned;
};

/// JSONL: one {source, reference, hypothesis, college} object per line.
/// Empty source/reference/hypothesis is a validation error.
std::vector<EvalTriple> read_triples_jsonl(const std::string& path);
void write_triples_jsonl(const std::string& path, const std::vector<EvalTriple>& triples);

/// Lexical translation consistency: for each unigram source keyword
/// appearing in at least two sources, the rendering in each hypothesis is
/// the verbatim token when present, otherwise an absent marker; a term's
/// consistency is the modal rendering share. Returns the mean over terms
/// as percent, or nullopt when no term repeats.
std::optional<double> ltcr(const std::vector<EvalTriple>& triples);

// ---------------------------------------------------------------------------
// Metric adapters (model-backed scorers the repo does not ship)

class MetricAdapter {
 public:
  virtual ~MetricAdapter() = default;
  virtual std::string name() const = 0;
  virtual std::string version() const = 0;
  /// One percent score per triple; throwing marks the adapter failed.
  virtual std::vector<double> score(const std::vector<EvalTriple>& triples) = 0;
};

class AdapterRegistry {
 public:
  void add(std::shared_ptr<MetricAdapter> adapter);
  bool has(const std::string& name) const;

  /// Mean percent over triples, or nullopt when the adapter is missing or
  /// failed (a diagnostic is logged; a number is never fabricated).
  /// Per-triple results are cached by (triple content, adapter version);
  /// cache hits return the stored value byte-identically.
  std::optional<double> score(const std::string& name, const std::vector<EvalTriple>& triples);

 private:
  std::map<std::string, std::shared_ptr<MetricAdapter>> adapters_;
  std::map<std::string, double> cache_;  // key: sha256(name|version|triple)
};

/// Reference bertscore adapter backed by the decoder's deterministic
/// one-hot alignment scorer.
std::shared_ptr<MetricAdapter> make_reference_bertscore_adapter();

/// Adapter that POSTs {"metric", "triples"} to `url` and expects
/// {"scores": [...]}; used for bertscore/blonde/comet/toxicity endpoints
/// (environment variable DSPT5_SCORER_URL, no default).
std::shared_ptr<MetricAdapter> make_http_adapter(const std::string& metric_name,
                                                 const std::string& url);

inline constexpr const char* kScorerUrlEnvVar = "DSPT5_SCORER_URL";
const std::vector<std::string>& adapter_metric_names();  // bertscore, blonde, comet, toxicity

// ---------------------------------------------------------------------------
// Report

/// Metric panel for one college (or overall). Adapter-backed fields are
/// nullopt when unavailable and serialize as null, never 0.
struct MetricRow {
  std::size_t triples = 0;
  double s_bleu = 0.0;
  double d_bleu = 0.0;
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double meteor = 0.0;
  double sari = 0.0;
  double fres = 0.0;
  std::optional<double> ltcr;
  std::optional<double> mtld;
  std::optional<double> bertscore_f1;
  std::optional<double> blonde_f1;
  std::optional<double> comet;
  std::optional<double> toxicity;
};

struct MetricReport {
  std::map<std::string, MetricRow> by_college;  // keyed by abbreviation
  MetricRow overall;
  nlohmann::json metadata;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// Compute every in-scope metric per college and overall; adapter metrics
/// come from `registry` (may be empty). Throws on an empty triple set.
MetricReport report(const std::vector<EvalTriple>& triples, AdapterRegistry& registry);

/// Write report.json and report.csv under `out_dir` with a deterministic
/// layout.
void write_report(const MetricReport& rep, const std::string& out_dir);

}  // namespace dspt5::eval
