// SPDX-License-Identifier: Apache-2.0
#include "dspt5/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "dspt5/text.hpp"

namespace dspt5::eval {
namespace {

using Counter = std::map<std::vector<std::string>, std::size_t>;

Counter ngram_counts(const Tokens& tokens, std::size_t n) {
  Counter counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)] += 1;
  }
  return counts;
}

std::size_t total(const Counter& c) {
  std::size_t sum = 0;
  for (const auto& [gram, count] : c) sum += count;
  return sum;
}

Counter intersect(const Counter& a, const Counter& b) {
  Counter out;
  for (const auto& [gram, count] : a) {
    auto it = b.find(gram);
    if (it != b.end()) out[gram] = std::min(count, it->second);
  }
  return out;
}

Counter subtract(const Counter& a, const Counter& b) {
  Counter out;
  for (const auto& [gram, count] : a) {
    auto it = b.find(gram);
    const std::size_t other = it == b.end() ? 0 : it->second;
    if (count > other) out[gram] = count - other;
  }
  return out;
}

double harmonic(double p, double r) {
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

}  // namespace

// ---------------------------------------------------------------------------
// BLEU

double bleu_tokens(const Tokens& hypothesis, const std::vector<Tokens>& references, bool smooth) {
  if (references.empty()) throw std::invalid_argument("bleu: no references");
  if (hypothesis.empty()) return 0.0;

  double log_precision_sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const Counter hyp_counts = ngram_counts(hypothesis, n);
    Counter best_ref;
    for (const Tokens& ref : references) {
      const Counter ref_counts = ngram_counts(ref, n);
      for (const auto& [gram, count] : ref_counts) {
        best_ref[gram] = std::max(best_ref[gram], count);
      }
    }
    std::size_t matched = 0;
    for (const auto& [gram, count] : hyp_counts) {
      auto it = best_ref.find(gram);
      if (it != best_ref.end()) matched += std::min(count, it->second);
    }
    const std::size_t possible = total(hyp_counts);

    double p;
    if (smooth && n >= 2) {
      p = static_cast<double>(matched + 1) / static_cast<double>(possible + 1);
    } else {
      if (possible == 0 || matched == 0) return 0.0;
      p = static_cast<double>(matched) / static_cast<double>(possible);
    }
    log_precision_sum += std::log(p);
  }

  // Brevity penalty against the closest reference length (ties -> shorter).
  const std::size_t c = hypothesis.size();
  std::size_t r = references.front().size();
  for (const Tokens& ref : references) {
    const auto diff = [&](std::size_t len) {
      return len > c ? len - c : c - len;
    };
    if (diff(ref.size()) < diff(r) || (diff(ref.size()) == diff(r) && ref.size() < r))
      r = ref.size();
  }
  const double bp = c >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
  return 100.0 * bp * std::exp(log_precision_sum / 4.0);
}

double bleu(const std::string& hypothesis, const std::vector<std::string>& references,
            BleuMode mode) {
  if (references.empty()) throw std::invalid_argument("bleu: no references");

  if (mode == BleuMode::Document) {
    std::vector<Tokens> ref_tokens;
    for (const std::string& ref : references) ref_tokens.push_back(text::tokenize_words(ref));
    return bleu_tokens(text::tokenize_words(hypothesis), ref_tokens, /*smooth=*/false);
  }

  const auto hyp_sentences = text::split_sentences(hypothesis);
  std::vector<std::vector<std::string>> ref_sentences;
  for (const std::string& ref : references) ref_sentences.push_back(text::split_sentences(ref));

  std::size_t pairs = hyp_sentences.size();
  for (const auto& sentences : ref_sentences) pairs = std::min(pairs, sentences.size());
  if (pairs == 0) return 0.0;

  double sum = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    std::vector<Tokens> refs_i;
    for (const auto& sentences : ref_sentences) refs_i.push_back(text::tokenize_words(sentences[i]));
    sum += bleu_tokens(text::tokenize_words(hyp_sentences[i]), refs_i, /*smooth=*/true);
  }
  return sum / static_cast<double>(pairs);
}

// ---------------------------------------------------------------------------
// ROUGE

double rouge_n_tokens(const Tokens& hypothesis, const Tokens& reference, int n) {
  if (n < 1) throw std::invalid_argument("rouge_n: n must be >= 1");
  const Counter hyp = ngram_counts(hypothesis, static_cast<std::size_t>(n));
  const Counter ref = ngram_counts(reference, static_cast<std::size_t>(n));
  const std::size_t overlap = total(intersect(hyp, ref));
  const std::size_t hyp_total = total(hyp);
  const std::size_t ref_total = total(ref);
  if (hyp_total == 0 || ref_total == 0) return 0.0;
  const double p = static_cast<double>(overlap) / static_cast<double>(hyp_total);
  const double r = static_cast<double>(overlap) / static_cast<double>(ref_total);
  return 100.0 * harmonic(p, r);
}

double rouge_n(const std::string& hypothesis, const std::string& reference, int n) {
  return rouge_n_tokens(text::tokenize_words(hypothesis), text::tokenize_words(reference), n);
}

// ---------------------------------------------------------------------------
// METEOR

namespace {

// Position-greedy unigram alignment: hypothesis tokens left to right, each
// matched to the first free reference position passing `match`.
template <typename MatchFn>
void align_stage(const Tokens& hyp, const Tokens& ref, std::vector<int>& hyp_to_ref,
                 std::vector<char>& ref_used, MatchFn match) {
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    if (hyp_to_ref[i] >= 0) continue;
    for (std::size_t j = 0; j < ref.size(); ++j) {
      if (ref_used[j]) continue;
      if (match(hyp[i], ref[j])) {
        hyp_to_ref[i] = static_cast<int>(j);
        ref_used[j] = 1;
        break;
      }
    }
  }
}

}  // namespace

double meteor_tokens(const Tokens& hypothesis, const Tokens& reference) {
  if (hypothesis.empty() || reference.empty()) return 0.0;

  std::vector<int> hyp_to_ref(hypothesis.size(), -1);
  std::vector<char> ref_used(reference.size(), 0);
  align_stage(hypothesis, reference, hyp_to_ref, ref_used,
              [](const std::string& a, const std::string& b) { return a == b; });
  align_stage(hypothesis, reference, hyp_to_ref, ref_used,
              [](const std::string& a, const std::string& b) {
                return porter_stem(a) == porter_stem(b);
              });

  std::size_t matches = 0;
  for (int j : hyp_to_ref) {
    if (j >= 0) ++matches;
  }
  if (matches == 0) return 0.0;

  const double p = static_cast<double>(matches) / static_cast<double>(hypothesis.size());
  const double r = static_cast<double>(matches) / static_cast<double>(reference.size());
  const double f_mean = p * r / (0.9 * p + 0.1 * r);

  // Chunks: maximal runs of alignment pairs contiguous on both sides.
  std::size_t chunks = 0;
  int prev_hyp = -2, prev_ref = -2;
  for (std::size_t i = 0; i < hypothesis.size(); ++i) {
    if (hyp_to_ref[i] < 0) continue;
    if (static_cast<int>(i) != prev_hyp + 1 || hyp_to_ref[i] != prev_ref + 1) ++chunks;
    prev_hyp = static_cast<int>(i);
    prev_ref = hyp_to_ref[i];
  }

  const double frag = static_cast<double>(chunks) / static_cast<double>(matches);
  const double penalty = 0.5 * frag * frag * frag;
  return 100.0 * f_mean * (1.0 - penalty);
}

double meteor(const std::string& hypothesis, const std::string& reference) {
  return meteor_tokens(text::tokenize_words(hypothesis), text::tokenize_words(reference));
}

// ---------------------------------------------------------------------------
// SARI

namespace {

struct PR {
  double precision = 1.0;  // vacuous components count as perfect
  double recall = 1.0;
};

double f1_or_zero(const PR& pr) {
  if (pr.precision <= 0.0 && pr.recall <= 0.0) return 0.0;
  if (pr.precision + pr.recall == 0.0) return 0.0;
  return 2.0 * pr.precision * pr.recall / (pr.precision + pr.recall);
}

}  // namespace

double sari_tokens(const Tokens& source, const Tokens& hypothesis, const Tokens& reference) {
  double keep_sum = 0.0, add_sum = 0.0, del_sum = 0.0;

  for (std::size_t n = 1; n <= 4; ++n) {
    const Counter s = ngram_counts(source, n);
    const Counter c = ngram_counts(hypothesis, n);
    const Counter r = ngram_counts(reference, n);

    // KEEP: n-grams retained from the source, credited when the reference
    // keeps them too (counter semantics).
    const Counter kept = intersect(s, c);
    const Counter kept_good = intersect(kept, r);
    const Counter kept_wanted = intersect(s, r);
    PR keep;
    if (total(kept) > 0)
      keep.precision = static_cast<double>(total(kept_good)) / static_cast<double>(total(kept));
    if (total(kept_wanted) > 0)
      keep.recall = static_cast<double>(total(kept_good)) / static_cast<double>(total(kept_wanted));
    keep_sum += f1_or_zero(keep);

    // ADD: new n-grams (set semantics).
    std::set<std::vector<std::string>> s_set, c_set, r_set;
    for (const auto& [g, _] : s) s_set.insert(g);
    for (const auto& [g, _] : c) c_set.insert(g);
    for (const auto& [g, _] : r) r_set.insert(g);
    std::size_t added = 0, added_good = 0, addable = 0;
    for (const auto& g : c_set) {
      if (!s_set.contains(g)) {
        ++added;
        if (r_set.contains(g)) ++added_good;
      }
    }
    for (const auto& g : r_set) {
      if (!s_set.contains(g)) ++addable;
    }
    PR add;
    if (added > 0) add.precision = static_cast<double>(added_good) / static_cast<double>(added);
    if (addable > 0) add.recall = static_cast<double>(added_good) / static_cast<double>(addable);
    add_sum += f1_or_zero(add);

    // DELETE: precision only (counter semantics).
    const Counter deleted = subtract(s, c);
    const Counter deleted_good = subtract(deleted, r);
    double del_precision = 1.0;
    if (total(deleted) > 0)
      del_precision = static_cast<double>(total(deleted_good)) / static_cast<double>(total(deleted));
    del_sum += del_precision;
  }

  return 100.0 * (keep_sum / 4.0 + add_sum / 4.0 + del_sum / 4.0) / 3.0;
}

double sari(const std::string& source, const std::string& hypothesis, const std::string& reference) {
  return sari_tokens(text::tokenize_words(source), text::tokenize_words(hypothesis),
                     text::tokenize_words(reference));
}

// ---------------------------------------------------------------------------
// Porter stemmer

namespace {

bool is_consonant(const std::string& w, std::size_t i) {
  switch (w[i]) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// Measure: number of VC sequences in [C](VC)^m[V].
std::size_t measure(const std::string& w) {
  std::size_t m = 0;
  bool in_vowel_run = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!is_consonant(w, i)) {
      in_vowel_run = true;
    } else if (in_vowel_run) {
      ++m;
      in_vowel_run = false;
    }
  }
  return m;
}

bool contains_vowel(const std::string& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!is_consonant(w, i)) return true;
  }
  return false;
}

bool ends_double_consonant(const std::string& w) {
  const std::size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: stem ends cvc where the final c is not w, x or y.
bool ends_cvc(const std::string& w) {
  const std::size_t n = w.size();
  if (n < 3) return false;
  if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) || !is_consonant(w, n - 1)) return false;
  const char last = w[n - 1];
  return last != 'w' && last != 'x' && last != 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         std::string_view(w).substr(w.size() - suffix.size()) == suffix;
}

std::string stem_minus(const std::string& w, std::size_t suffix_len) {
  return w.substr(0, w.size() - suffix_len);
}

// Replace `suffix` by `replacement` when measure(stem) > threshold.
bool rule(std::string& w, std::string_view suffix, std::string_view replacement,
          std::size_t min_measure) {
  if (!ends_with(w, suffix)) return false;
  const std::string stem = stem_minus(w, suffix.size());
  if (measure(stem) <= min_measure - 1) return true;  // matched but condition failed
  w = stem + std::string(replacement);
  return true;
}

}  // namespace

std::string porter_stem(const std::string& word) {
  std::string w = text::to_lower(word);
  if (w.size() <= 2) return w;

  // Step 1a
  if (ends_with(w, "sses")) {
    w = stem_minus(w, 2);
  } else if (ends_with(w, "ies")) {
    w = stem_minus(w, 2);
  } else if (!ends_with(w, "ss") && ends_with(w, "s")) {
    w = stem_minus(w, 1);
  }

  // Step 1b
  bool did_1b = false;
  if (ends_with(w, "eed")) {
    if (measure(stem_minus(w, 3)) > 0) w = stem_minus(w, 1);
  } else if (ends_with(w, "ed") && contains_vowel(stem_minus(w, 2))) {
    w = stem_minus(w, 2);
    did_1b = true;
  } else if (ends_with(w, "ing") && contains_vowel(stem_minus(w, 3))) {
    w = stem_minus(w, 3);
    did_1b = true;
  }
  if (did_1b) {
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
      w += "e";
    } else if (ends_double_consonant(w) && !ends_with(w, "l") && !ends_with(w, "s") &&
               !ends_with(w, "z")) {
      w = stem_minus(w, 1);
    } else if (measure(w) == 1 && ends_cvc(w)) {
      w += "e";
    }
  }

  // Step 1c
  if (ends_with(w, "y") && contains_vowel(stem_minus(w, 1))) w[w.size() - 1] = 'i';

  // Step 2 (m > 0)
  static const std::pair<const char*, const char*> step2[] = {
      {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
      {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
      {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
      {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
      {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"}};
  for (const auto& [suffix, replacement] : step2) {
    if (rule(w, suffix, replacement, 1)) break;
  }

  // Step 3 (m > 0)
  static const std::pair<const char*, const char*> step3[] = {
      {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
      {"ical", "ic"},  {"ful", ""},   {"ness", ""}};
  for (const auto& [suffix, replacement] : step3) {
    if (rule(w, suffix, replacement, 1)) break;
  }

  // Step 4 (m > 1)
  static const char* step4[] = {"al",   "ance", "ence", "er",  "ic",  "able", "ible",
                                "ant",  "ement", "ment", "ent", "ou",  "ism",  "ate",
                                "iti",  "ous",  "ive",  "ize"};
  bool removed = false;
  for (const char* suffix : step4) {
    if (ends_with(w, suffix)) {
      const std::string stem = stem_minus(w, std::string_view(suffix).size());
      if (measure(stem) > 1) {
        w = stem;
        removed = true;
      }
      break;
    }
  }
  if (!removed && ends_with(w, "ion")) {
    const std::string stem = stem_minus(w, 3);
    if (measure(stem) > 1 && (ends_with(stem, "s") || ends_with(stem, "t"))) w = stem;
  }

  // Step 5a
  if (ends_with(w, "e")) {
    const std::string stem = stem_minus(w, 1);
    const std::size_t m = measure(stem);
    if (m > 1 || (m == 1 && !ends_cvc(stem))) w = stem;
  }
  // Step 5b
  if (measure(w) > 1 && ends_double_consonant(w) && ends_with(w, "l")) w = stem_minus(w, 1);

  return w;
}

}  // namespace dspt5::eval
