// SPDX-License-Identifier: Apache-2.0
#include "dspt5/text.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace dspt5::text {
namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '\'' || c == '-';
}

bool is_vowel(char c) {
  switch (c) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
    case 'y':
      return true;
    default:
      return false;
  }
}

const std::unordered_set<std::string>& stop_words() {
  static const std::unordered_set<std::string> words = {
      "a",       "about",   "above",   "after",    "again",     "against",  "all",     "am",
      "an",      "and",     "any",     "are",      "as",        "at",       "be",      "because",
      "been",    "before",  "being",   "below",    "between",   "both",     "but",     "by",
      "can",     "cannot",  "could",   "did",      "do",        "does",     "doing",   "down",
      "during",  "each",    "few",     "for",      "from",      "further",  "had",     "has",
      "have",    "having",  "he",      "her",      "here",      "hers",     "herself", "him",
      "himself", "his",     "how",     "i",        "if",        "in",       "into",    "is",
      "it",      "its",     "itself",  "just",     "me",        "more",     "most",    "my",
      "myself",  "no",      "nor",     "not",      "now",       "of",       "off",     "on",
      "once",    "only",    "or",      "other",    "our",       "ours",     "ourselves",
      "out",     "over",    "own",     "same",     "she",       "should",   "so",      "some",
      "such",    "than",    "that",    "the",      "their",     "theirs",   "them",    "themselves",
      "then",    "there",   "these",   "they",     "this",      "those",    "through", "to",
      "too",     "under",   "until",   "up",       "upon",      "very",     "was",     "we",
      "were",    "what",    "when",    "where",    "which",     "while",    "who",     "whom",
      "why",     "will",    "with",    "within",   "without",   "would",    "you",     "your",
      "yours",   "yourself", "yourselves"};
  return words;
}

// Trailing-period-stripped, lowercased tokens that should not end a sentence.
const std::unordered_set<std::string>& abbreviations() {
  static const std::unordered_set<std::string> abbr = {
      "dr",   "mr",  "mrs", "ms",  "prof", "sr",  "jr",   "st",     "no",  "vol",
      "fig",  "figs", "eq",  "eqs", "sec",  "secs", "ch",  "pp",     "etc", "vs",
      "al",   "e.g", "i.e", "cf",  "ca",   "approx", "dept", "univ", "inc", "ltd",
      "co",   "u.s", "u.k", "ph.d", "m.s", "b.s",  "b.a",  "m.a"};
  return abbr;
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> tokenize_words(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && !is_word_char(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && is_word_char(s[i])) ++i;
    if (i > start) {
      std::string_view tok = s.substr(start, i - start);
      while (!tok.empty() && (tok.front() == '\'' || tok.front() == '-')) tok.remove_prefix(1);
      while (!tok.empty() && (tok.back() == '\'' || tok.back() == '-')) tok.remove_suffix(1);
      if (!tok.empty()) out.push_back(to_lower(tok));
    }
  }
  return out;
}

bool is_stop_word(std::string_view lowercase_token) {
  return stop_words().contains(std::string(lowercase_token));
}

std::size_t count_letters(std::string_view token) {
  std::size_t n = 0;
  for (char c : token) {
    if (std::isalnum(static_cast<unsigned char>(c))) ++n;
  }
  return n;
}

std::size_t count_syllables(std::string_view word) {
  std::string w;
  w.reserve(word.size());
  for (char c : word) {
    if (std::isalpha(static_cast<unsigned char>(c))) w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (w.empty()) return word.empty() ? 0 : 1;

  std::size_t groups = 0;
  bool in_group = false;
  for (char c : w) {
    if (is_vowel(c)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }

  const auto ends_with = [&](std::string_view suffix) {
    return w.size() >= suffix.size() && std::string_view(w).substr(w.size() - suffix.size()) == suffix;
  };

  // Silent trailing e ("make"), but keep consonant+le ("table").
  if (groups > 1 && ends_with("e") && !ends_with("le")) --groups;
  if (groups > 1 && ends_with("ed") && w.size() >= 3) {
    const char before = w[w.size() - 3];
    if (before != 't' && before != 'd' && !is_vowel(before)) --groups;
  }
  if (groups > 1 && ends_with("es") && w.size() >= 3) {
    const char before = w[w.size() - 3];
    if (before != 's' && before != 'c' && before != 'x' && before != 'z' && before != 'g' &&
        before != 'h' && !is_vowel(before))
      --groups;
  }
  return std::max<std::size_t>(groups, 1);
}

std::vector<std::string> split_sentences(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;

  const auto flush = [&](std::size_t end) {
    std::string_view piece = s.substr(start, end - start);
    while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.front()))) piece.remove_prefix(1);
    while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.back()))) piece.remove_suffix(1);
    if (!piece.empty()) out.emplace_back(piece);
    start = end;
  };

  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c != '.' && c != '!' && c != '?') continue;

    // Consume any run of terminal punctuation and closing quotes.
    std::size_t j = i + 1;
    while (j < s.size() && (s[j] == '.' || s[j] == '!' || s[j] == '?' || s[j] == '"' ||
                            s[j] == '\'' || s[j] == ')' || s[j] == ']'))
      ++j;
    if (j >= s.size()) break;  // end of text closes the sentence below
    if (!std::isspace(static_cast<unsigned char>(s[j]))) continue;

    std::size_t k = j;
    while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
    if (k >= s.size()) break;
    const char next = s[k];
    const bool opens_sentence = std::isupper(static_cast<unsigned char>(next)) ||
                                std::isdigit(static_cast<unsigned char>(next)) || next == '"' ||
                                next == '\'';
    if (!opens_sentence) continue;

    if (c == '.') {
      // Token immediately before the period, lowercased, without the period.
      std::size_t t = i;
      while (t > start && !std::isspace(static_cast<unsigned char>(s[t - 1]))) --t;
      std::string token = to_lower(s.substr(t, i - t));
      if (!token.empty() && token.back() == '.') token.pop_back();
      if (abbreviations().contains(token)) continue;
      if (token.size() == 1 && std::isalpha(static_cast<unsigned char>(token[0]))) continue;  // initials
    }

    i = j - 1;
    flush(j);
  }
  flush(s.size());
  return out;
}

}  // namespace dspt5::text
