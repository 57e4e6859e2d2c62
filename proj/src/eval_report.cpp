// SPDX-License-Identifier: Apache-2.0
#include "dspt5/eval_report.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "dspt5/decoder.hpp"
#include "dspt5/metrics.hpp"
#include "dspt5/prompt.hpp"
#include "dspt5/sha256.hpp"
#include "dspt5/stats.hpp"
#include "dspt5/text.hpp"
#include "httplib.h"

namespace dspt5::eval {

namespace fs = std::filesystem;

std::vector<EvalTriple> read_triples_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<EvalTriple> triples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    EvalTriple t;
    t.source = j.at("source").get<std::string>();
    t.reference = j.at("reference").get<std::string>();
    t.hypothesis = j.at("hypothesis").get<std::string>();
    if (t.source.empty() || t.reference.empty() || t.hypothesis.empty())
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": source, reference and hypothesis must be non-empty");
    if (j.contains("college")) {
      const auto college = corpus::college_from_abbrev(j.at("college").get<std::string>());
      t.college = college.value_or(corpus::College::Unassigned);
    }
    triples.push_back(std::move(t));
  }
  return triples;
}

void write_triples_jsonl(const std::string& path, const std::vector<EvalTriple>& triples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const EvalTriple& t : triples) {
    const nlohmann::json j = {{"source", t.source},
                              {"reference", t.reference},
                              {"hypothesis", t.hypothesis},
                              {"college", std::string(corpus::college_abbrev(t.college))}};
    out << j.dump() << "\n";
  }
}

// ---------------------------------------------------------------------------
// LTCR

std::optional<double> ltcr(const std::vector<EvalTriple>& triples) {
  const prompt::BagOfWordsEmbedder embedder;
  constexpr std::size_t kKeywordsPerSource = 10;
  constexpr const char* kAbsent = "\x01absent";

  // term -> renderings across the documents whose source contains it.
  std::map<std::string, std::vector<std::string>> renderings;
  for (const EvalTriple& triple : triples) {
    std::set<std::string> terms;
    for (const auto& [phrase, score] :
         prompt::extract_keywords(triple.source, embedder, kKeywordsPerSource)) {
      if (phrase.find(' ') == std::string::npos) terms.insert(phrase);  // unigrams only
    }
    std::set<std::string> hyp_tokens;
    for (const std::string& tok : text::tokenize_words(triple.hypothesis)) hyp_tokens.insert(tok);
    for (const std::string& term : terms)
      renderings[term].push_back(hyp_tokens.contains(term) ? term : kAbsent);
  }

  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& [term, rendered] : renderings) {
    if (rendered.size() < 2) continue;
    std::map<std::string, std::size_t> counts;
    std::size_t modal = 0;
    for (const std::string& r : rendered) modal = std::max(modal, ++counts[r]);
    sum += static_cast<double>(modal) / static_cast<double>(rendered.size());
    ++counted;
  }
  if (counted == 0) return std::nullopt;
  return 100.0 * sum / static_cast<double>(counted);
}

// ---------------------------------------------------------------------------
// Adapters

void AdapterRegistry::add(std::shared_ptr<MetricAdapter> adapter) {
  adapters_[adapter->name()] = std::move(adapter);
}

bool AdapterRegistry::has(const std::string& name) const { return adapters_.contains(name); }

std::optional<double> AdapterRegistry::score(const std::string& name,
                                             const std::vector<EvalTriple>& triples) {
  auto it = adapters_.find(name);
  if (it == adapters_.end()) return std::nullopt;
  MetricAdapter& adapter = *it->second;

  const auto cache_key = [&](const EvalTriple& t) {
    return util::sha256_hex(name + "\x1f" + adapter.version() + "\x1f" + t.source + "\x1f" +
                            t.reference + "\x1f" + t.hypothesis);
  };

  std::vector<double> scores(triples.size(), 0.0);
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    auto hit = cache_.find(cache_key(triples[i]));
    if (hit != cache_.end()) {
      scores[i] = hit->second;
    } else {
      missing.push_back(i);
    }
  }
  if (!missing.empty()) {
    std::vector<EvalTriple> batch;
    for (std::size_t i : missing) batch.push_back(triples[i]);
    std::vector<double> fresh;
    try {
      fresh = adapter.score(batch);
    } catch (const std::exception& e) {
      std::cerr << "[evaluate] adapter '" << name << "' failed: " << e.what() << "\n";
      return std::nullopt;
    }
    if (fresh.size() != batch.size()) {
      std::cerr << "[evaluate] adapter '" << name << "' returned " << fresh.size()
                << " scores for " << batch.size() << " triples\n";
      return std::nullopt;
    }
    for (std::size_t k = 0; k < missing.size(); ++k) {
      scores[missing[k]] = fresh[k];
      cache_[cache_key(triples[missing[k]])] = fresh[k];
    }
  }

  if (scores.empty()) return std::nullopt;
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

namespace {

class ReferenceBertscoreAdapter final : public MetricAdapter {
 public:
  std::string name() const override { return "bertscore"; }
  std::string version() const override { return "reference-onehot-v1"; }
  std::vector<double> score(const std::vector<EvalTriple>& triples) override {
    const decode::OneHotScorer scorer;
    std::vector<double> out;
    out.reserve(triples.size());
    for (const EvalTriple& t : triples) {
      out.push_back(100.0 * decode::semantic_alignment(text::tokenize_words(t.hypothesis),
                                                       text::tokenize_words(t.reference), scorer));
    }
    return out;
  }
};

class HttpAdapter final : public MetricAdapter {
 public:
  HttpAdapter(std::string metric_name, std::string url)
      : metric_name_(std::move(metric_name)), url_(std::move(url)) {}

  std::string name() const override { return metric_name_; }
  std::string version() const override { return "http:" + url_; }

  std::vector<double> score(const std::vector<EvalTriple>& triples) override {
    nlohmann::json payload = {{"metric", metric_name_}, {"triples", nlohmann::json::array()}};
    for (const EvalTriple& t : triples) {
      payload["triples"].push_back(
          {{"source", t.source}, {"reference", t.reference}, {"hypothesis", t.hypothesis}});
    }
    const std::size_t scheme_end = url_.find("://");
    if (scheme_end == std::string::npos) throw std::runtime_error("bad adapter URL: " + url_);
    const std::size_t path_start = url_.find('/', scheme_end + 3);
    const std::string origin = path_start == std::string::npos ? url_ : url_.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url_.substr(path_start);

    httplib::Client client(origin);
    client.set_read_timeout(300);
    httplib::Result res = client.Post(path, payload.dump(), "application/json");
    if (!res) throw std::runtime_error("adapter request failed: " + httplib::to_string(res.error()));
    if (res->status != 200) throw std::runtime_error("adapter HTTP " + std::to_string(res->status));
    return nlohmann::json::parse(res->body).at("scores").get<std::vector<double>>();
  }

 private:
  std::string metric_name_;
  std::string url_;
};

}  // namespace

std::shared_ptr<MetricAdapter> make_reference_bertscore_adapter() {
  return std::make_shared<ReferenceBertscoreAdapter>();
}

std::shared_ptr<MetricAdapter> make_http_adapter(const std::string& metric_name,
                                                 const std::string& url) {
  return std::make_shared<HttpAdapter>(metric_name, url);
}

const std::vector<std::string>& adapter_metric_names() {
  static const std::vector<std::string> names = {"bertscore", "blonde", "comet", "toxicity"};
  return names;
}

// ---------------------------------------------------------------------------
// Report

namespace {

MetricRow compute_row(const std::vector<EvalTriple>& triples, AdapterRegistry& registry) {
  MetricRow row;
  row.triples = triples.size();
  double fres_sum = 0.0;
  std::size_t fres_count = 0;
  std::vector<std::string> hyp_tokens_all;

  for (const EvalTriple& t : triples) {
    row.s_bleu += bleu(t.hypothesis, {t.reference}, BleuMode::Sentence);
    row.d_bleu += bleu(t.hypothesis, {t.reference}, BleuMode::Document);
    row.rouge1 += rouge_n(t.hypothesis, t.reference, 1);
    row.rouge2 += rouge_n(t.hypothesis, t.reference, 2);
    row.meteor += meteor(t.hypothesis, t.reference);
    row.sari += sari(t.source, t.hypothesis, t.reference);
    try {
      fres_sum += stats::fres(t.hypothesis);
      ++fres_count;
    } catch (const std::invalid_argument&) {
      // sentence-less hypothesis; skipped from the FRES mean
    }
    const auto toks = text::tokenize_words(t.hypothesis);
    hyp_tokens_all.insert(hyp_tokens_all.end(), toks.begin(), toks.end());
  }
  const double n = static_cast<double>(triples.size());
  row.s_bleu /= n;
  row.d_bleu /= n;
  row.rouge1 /= n;
  row.rouge2 /= n;
  row.meteor /= n;
  row.sari /= n;
  row.fres = fres_count > 0 ? fres_sum / static_cast<double>(fres_count) : 0.0;
  row.ltcr = ltcr(triples);
  row.mtld = stats::mtld(hyp_tokens_all).value;

  row.bertscore_f1 = registry.score("bertscore", triples);
  row.blonde_f1 = registry.score("blonde", triples);
  row.comet = registry.score("comet", triples);
  row.toxicity = registry.score("toxicity", triples);
  return row;
}

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json row_to_json(const MetricRow& row) {
  return {{"triples", row.triples},
          {"s_bleu", row.s_bleu},
          {"d_bleu", row.d_bleu},
          {"rouge1", row.rouge1},
          {"rouge2", row.rouge2},
          {"meteor", row.meteor},
          {"sari", row.sari},
          {"fres", row.fres},
          {"ltcr", opt_json(row.ltcr)},
          {"mtld", opt_json(row.mtld)},
          {"bertscore_f1", opt_json(row.bertscore_f1)},
          {"blonde_f1", opt_json(row.blonde_f1)},
          {"comet", opt_json(row.comet)},
          {"toxicity", opt_json(row.toxicity)}};
}

std::string number_cell(double v) { return nlohmann::json(v).dump(); }

std::string opt_cell(const std::optional<double>& v) { return v ? number_cell(*v) : "null"; }

}  // namespace

nlohmann::json MetricReport::to_json() const {
  nlohmann::json colleges = nlohmann::json::object();
  for (const auto& [abbrev, row] : by_college) colleges[abbrev] = row_to_json(row);
  return {{"colleges", colleges}, {"overall", row_to_json(overall)}, {"metadata", metadata}};
}

std::string MetricReport::to_csv() const {
  std::ostringstream out;
  out << "college,triples,s_bleu,d_bleu,rouge1,rouge2,meteor,sari,fres,ltcr,mtld,"
         "bertscore_f1,blonde_f1,comet,toxicity\r\n";
  const auto emit = [&](const std::string& name, const MetricRow& row) {
    out << name << ',' << row.triples << ',' << number_cell(row.s_bleu) << ','
        << number_cell(row.d_bleu) << ',' << number_cell(row.rouge1) << ','
        << number_cell(row.rouge2) << ',' << number_cell(row.meteor) << ','
        << number_cell(row.sari) << ',' << number_cell(row.fres) << ',' << opt_cell(row.ltcr)
        << ',' << opt_cell(row.mtld) << ',' << opt_cell(row.bertscore_f1) << ','
        << opt_cell(row.blonde_f1) << ',' << opt_cell(row.comet) << ',' << opt_cell(row.toxicity)
        << "\r\n";
  };
  for (corpus::College college : corpus::all_colleges()) {
    const std::string abbrev(corpus::college_abbrev(college));
    auto it = by_college.find(abbrev);
    if (it != by_college.end()) emit(abbrev, it->second);
  }
  auto unassigned = by_college.find("unassigned");
  if (unassigned != by_college.end()) emit("unassigned", unassigned->second);
  emit("overall", overall);
  return out.str();
}

MetricReport report(const std::vector<EvalTriple>& triples, AdapterRegistry& registry) {
  if (triples.empty()) throw std::invalid_argument("report: empty triple set");

  MetricReport rep;
  std::map<corpus::College, std::vector<EvalTriple>> by_college;
  for (const EvalTriple& t : triples) by_college[t.college].push_back(t);
  for (const auto& [college, group] : by_college) {
    const std::string key = college == corpus::College::Unassigned
                                ? "unassigned"
                                : std::string(corpus::college_abbrev(college));
    rep.by_college[key] = compute_row(group, registry);
  }
  rep.overall = compute_row(triples, registry);
  rep.metadata = {{"sentence_bleu_smoothing", "add-one on n>=2 precisions"},
                  {"meteor", "exact+porter-stem stages, position-greedy alignment"},
                  {"ltcr", "unigram source keywords, verbatim-rendering interpretation"},
                  {"rouge_stemming", "none"},
                  {"tokenizer", "lowercase word tokenizer"}};
  return rep;
}

void write_report(const MetricReport& rep, const std::string& out_dir) {
  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "report.json", std::ios::binary);
    out << rep.to_json().dump(2) << "\n";
  }
  {
    std::ofstream out(fs::path(out_dir) / "report.csv", std::ios::binary);
    out << rep.to_csv();
  }
}

}  // namespace dspt5::eval
