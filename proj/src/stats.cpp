// SPDX-License-Identifier: Apache-2.0
#include "dspt5/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "dspt5/text.hpp"

namespace dspt5::stats {
namespace {

constexpr double kTtrThreshold = 0.72;
constexpr std::size_t kMtldReliableTokens = 50;

struct TextCounts {
  std::size_t sentences = 0;
  std::size_t words = 0;
  std::size_t syllables = 0;
  std::size_t letters = 0;
  std::size_t polysyllables = 0;  // words with >= 3 syllables
  std::size_t difficult = 0;      // not on the easy-word list
};

// Abridged easy-word list (stop words count as easy as well). The full
// published list is not bundled; grade votes that depend on it are
// documented as approximate.
const std::unordered_set<std::string>& easy_words() {
  static const std::unordered_set<std::string> words = {
      "time", "year", "day", "way", "man", "men", "woman", "women", "world", "life", "hand",
      "part", "child", "children", "eye", "place", "work", "week", "case", "point", "number",
      "group", "fact", "get", "got", "make", "made", "go", "went", "gone", "know", "knew",
      "known", "take", "took", "think", "thought", "see", "saw", "seen", "come", "came", "want",
      "wanted", "look", "looked", "use", "used", "find", "found", "give", "gave", "tell", "told",
      "ask", "asked", "seem", "seemed", "feel", "felt", "try", "tried", "leave", "left", "call",
      "called", "good", "new", "first", "last", "long", "great", "little", "own", "old", "right",
      "big", "high", "small", "large", "next", "early", "young", "few", "bad", "same", "able",
      "also", "back", "even", "still", "well", "never", "help", "talk", "turn", "start", "show",
      "hear", "heard", "play", "run", "ran", "move", "like", "live", "believe", "hold", "bring",
      "happen", "write", "wrote", "sit", "sat", "stand", "stood", "lose", "lost", "pay", "paid",
      "meet", "met", "set", "learn", "change", "lead", "led", "watch", "follow", "stop", "speak",
      "spoke", "read", "spend", "spent", "grow", "grew", "open", "walk", "win", "won", "teach",
      "taught", "offer", "buy", "bought", "serve", "die", "died", "send", "sent", "build",
      "built", "stay", "fall", "fell", "cut", "reach", "raise", "cat", "dog", "sun", "rain",
      "water", "air", "fire", "earth", "tree", "bird", "fish", "house", "home", "school", "book",
      "word", "letter", "sound", "music", "color", "food", "milk", "bread", "apple", "car",
      "road", "city", "town", "farm", "field", "hill", "river", "sea", "wind", "snow", "ice",
      "hot", "cold", "warm", "dry", "wet", "light", "dark", "red", "blue", "green", "white",
      "black", "yellow", "round", "full", "empty", "fast", "slow", "easy", "hard", "soft",
      "loud", "quiet", "clean", "many", "much", "every", "together", "again", "always", "often",
      "soon", "today", "night", "morning", "thing", "something", "anything", "nothing",
      "everything", "people", "person", "friend", "mother", "father", "boy", "girl", "baby",
      "name", "story", "paper", "picture", "room", "door", "window", "table", "chair", "bed",
      "box", "ball", "game", "toy", "head", "face", "ear", "nose", "mouth", "hair", "arm",
      "leg", "foot", "feet", "body", "heart", "end", "side", "top", "line", "kind", "need",
      "keep", "kept", "let", "say", "said", "put", "mean", "meant", "plant", "animal", "study"};
  return words;
}

bool is_easy_word(const std::string& token) {
  if (text::is_stop_word(token)) return true;
  if (easy_words().contains(token)) return true;
  // Bare numbers read as easy.
  return std::all_of(token.begin(), token.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

TextCounts count_text(const std::string& text_in) {
  TextCounts counts;
  const auto sentences = text::split_sentences(text_in);
  counts.sentences = sentences.size();
  for (const std::string& word : text::split_whitespace(text_in)) {
    ++counts.words;
    counts.letters += text::count_letters(word);
    const std::size_t syll = text::count_syllables(word);
    counts.syllables += syll;
    if (syll >= 3) ++counts.polysyllables;
  }
  for (const std::string& token : text::tokenize_words(text_in)) {
    if (!is_easy_word(token)) ++counts.difficult;
  }
  return counts;
}

int round_grade(double value) {
  const long g = std::lround(value);
  return static_cast<int>(std::max(0L, g));
}

int fres_grade(double score) {
  if (score >= 90.0) return 5;
  if (score >= 80.0) return 6;
  if (score >= 70.0) return 7;
  if (score >= 60.0) return 8;
  if (score >= 50.0) return 10;
  if (score >= 40.0) return 11;
  if (score >= 30.0) return 12;
  return 13;
}

int dale_chall_grade(double score) {
  if (score <= 4.9) return 4;
  if (score <= 5.9) return 5;
  if (score <= 6.9) return 7;
  if (score <= 7.9) return 9;
  if (score <= 8.9) return 11;
  if (score <= 9.9) return 13;
  return 16;
}

double mtld_one_direction(const std::vector<std::string>& tokens) {
  double factors = 0.0;
  std::set<std::string> types;
  std::size_t segment_tokens = 0;
  double ttr = 1.0;
  for (const std::string& token : tokens) {
    types.insert(token);
    ++segment_tokens;
    ttr = static_cast<double>(types.size()) / static_cast<double>(segment_tokens);
    if (ttr < kTtrThreshold) {
      factors += 1.0;
      types.clear();
      segment_tokens = 0;
      ttr = 1.0;
    }
  }
  if (segment_tokens > 0) factors += (1.0 - ttr) / (1.0 - kTtrThreshold);
  if (factors == 0.0) return 0.0;  // caller maps to "undefined"
  return static_cast<double>(tokens.size()) / factors;
}

}  // namespace

SentenceStats sentence_stats(const std::vector<std::string>& documents) {
  if (documents.empty()) throw std::invalid_argument("sentence_stats: empty document list");
  SentenceStats out;
  std::size_t total_sentences = 0;
  std::size_t total_words = 0;
  for (const std::string& doc : documents) {
    const auto sentences = text::split_sentences(doc);
    if (sentences.empty()) {
      ++out.documents_skipped;
      continue;
    }
    ++out.documents_used;
    total_sentences += sentences.size();
    for (const std::string& sentence : sentences)
      total_words += text::split_whitespace(sentence).size();
  }
  if (out.documents_used == 0) return out;
  out.avg_sentences = static_cast<double>(total_sentences) / static_cast<double>(out.documents_used);
  out.avg_sentence_len = static_cast<double>(total_words) / static_cast<double>(total_sentences);
  return out;
}

MtldResult mtld(const std::vector<std::string>& tokens) {
  MtldResult result;
  result.reliable = tokens.size() >= kMtldReliableTokens;
  if (tokens.empty()) {
    result.value = std::nullopt;
    return result;
  }
  const double forward = mtld_one_direction(tokens);
  std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
  const double backward = mtld_one_direction(reversed);
  if (forward == 0.0 || backward == 0.0) {
    result.value = std::nullopt;
    return result;
  }
  result.value = 0.5 * (forward + backward);
  return result;
}

double fres(const std::string& text_in) {
  const TextCounts counts = count_text(text_in);
  if (counts.sentences == 0 || counts.words == 0)
    throw std::invalid_argument("fres: text has no sentences");
  const double wps = static_cast<double>(counts.words) / static_cast<double>(counts.sentences);
  const double spw = static_cast<double>(counts.syllables) / static_cast<double>(counts.words);
  return 206.835 - 1.015 * wps - 84.6 * spw;
}

std::vector<int> GradeVotes::as_vector() const {
  return {flesch_kincaid,       flesch_reading_ease, smog,         coleman_liau,
          automated_readability, dale_chall,         linsear_write, gunning_fog};
}

GradeVotes readability_grades(const std::string& text_in) {
  const TextCounts c = count_text(text_in);
  if (c.sentences == 0 || c.words == 0)
    throw std::invalid_argument("readability: text has no sentences");
  const double words = static_cast<double>(c.words);
  const double sentences = static_cast<double>(c.sentences);
  const double wps = words / sentences;
  const double spw = static_cast<double>(c.syllables) / words;

  GradeVotes votes;
  votes.flesch_kincaid = round_grade(0.39 * wps + 11.8 * spw - 15.59);
  votes.flesch_reading_ease = fres_grade(206.835 - 1.015 * wps - 84.6 * spw);
  votes.smog = round_grade(
      1.0430 * std::sqrt(static_cast<double>(c.polysyllables) * 30.0 / sentences) + 3.1291);
  const double letters_per_100 = 100.0 * static_cast<double>(c.letters) / words;
  const double sentences_per_100 = 100.0 * sentences / words;
  votes.coleman_liau = round_grade(0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8);
  votes.automated_readability =
      round_grade(4.71 * static_cast<double>(c.letters) / words + 0.5 * wps - 21.43);

  double dc = 0.1579 * (100.0 * static_cast<double>(c.difficult) / words) + 0.0496 * wps;
  if (100.0 * static_cast<double>(c.difficult) / words > 5.0) dc += 3.6365;
  votes.dale_chall = dale_chall_grade(dc);

  // Linsear Write over the first 100-word sample.
  {
    std::size_t sampled_words = 0, easy = 0, hard = 0, sample_sentences = 0;
    for (const std::string& sentence : text::split_sentences(text_in)) {
      if (sampled_words >= 100) break;
      ++sample_sentences;
      for (const std::string& word : text::split_whitespace(sentence)) {
        if (sampled_words >= 100) break;
        ++sampled_words;
        if (text::count_syllables(word) >= 3) {
          ++hard;
        } else {
          ++easy;
        }
      }
    }
    const double provisional = (static_cast<double>(easy) + 3.0 * static_cast<double>(hard)) /
                               static_cast<double>(std::max<std::size_t>(sample_sentences, 1));
    const double grade = provisional > 20.0 ? provisional / 2.0 : provisional / 2.0 - 1.0;
    votes.linsear_write = round_grade(grade);
  }

  votes.gunning_fog =
      round_grade(0.4 * (wps + 100.0 * static_cast<double>(c.polysyllables) / words));
  return votes;
}

std::string GradeBand::label() const {
  const auto ordinal = [](int n) {
    const int mod100 = n % 100;
    const char* suffix = "th";
    if (mod100 < 11 || mod100 > 13) {
      switch (n % 10) {
        case 1: suffix = "st"; break;
        case 2: suffix = "nd"; break;
        case 3: suffix = "rd"; break;
        default: break;
      }
    }
    return std::to_string(n) + suffix;
  };
  return ordinal(lower) + "-" + ordinal(lower + 1);
}

GradeBand readability_consensus(const std::string& text_in) {
  const GradeVotes votes = readability_grades(text_in);
  std::map<int, int> counts;
  for (int grade : votes.as_vector()) counts[grade] += 1;
  int best_grade = counts.begin()->first;
  int best_count = counts.begin()->second;
  for (const auto& [grade, count] : counts) {
    if (count > best_count) {  // ties keep the lower grade (map is ordered)
      best_grade = grade;
      best_count = count;
    }
  }
  return GradeBand{best_grade};
}

// ---------------------------------------------------------------------------

namespace {

SideStats side_stats(const std::vector<std::string>& documents) {
  SideStats side;
  const SentenceStats s = sentence_stats(documents);
  side.avg_sentences = s.avg_sentences;
  side.avg_sentence_len = s.avg_sentence_len;

  std::vector<std::string> tokens;
  std::string joined;
  for (const std::string& doc : documents) {
    const auto doc_tokens = text::tokenize_words(doc);
    tokens.insert(tokens.end(), doc_tokens.begin(), doc_tokens.end());
    if (!joined.empty()) joined += "\n";
    joined += doc;
  }
  const MtldResult m = mtld(tokens);
  side.mtld = m.value;
  side.mtld_reliable = m.reliable;
  side.readability = readability_consensus(joined);
  return side;
}

nlohmann::json side_to_json(const CollegeStats& stats) {
  nlohmann::json j;
  j["documents"] = stats.documents;
  j["avg_sentences_src"] = stats.source.avg_sentences;
  j["avg_sentences_tgt"] = stats.target.avg_sentences;
  j["avg_sentence_len_src"] = stats.source.avg_sentence_len;
  j["avg_sentence_len_tgt"] = stats.target.avg_sentence_len;
  j["mtld_src"] = stats.source.mtld ? nlohmann::json(*stats.source.mtld) : nlohmann::json(nullptr);
  j["mtld_tgt"] = stats.target.mtld ? nlohmann::json(*stats.target.mtld) : nlohmann::json(nullptr);
  j["mtld_reliable"] = stats.source.mtld_reliable && stats.target.mtld_reliable;
  j["readability_consensus_src"] = stats.source.readability.label();
  j["readability_consensus_tgt"] = stats.target.readability.label();
  return j;
}

}  // namespace

CollegeStats college_stats(const std::vector<const corpus::EtdRecord*>& records) {
  if (records.empty()) throw std::invalid_argument("college_stats: no records");
  std::vector<std::string> sources, targets;
  for (const corpus::EtdRecord* rec : records) {
    sources.push_back(rec->abstract);
    targets.push_back(rec->abstract_general);
  }
  CollegeStats stats;
  stats.documents = records.size();
  stats.source = side_stats(sources);
  stats.target = side_stats(targets);
  return stats;
}

nlohmann::json corpus_stats_report(const std::vector<corpus::EtdRecord>& records) {
  if (records.empty()) throw std::invalid_argument("corpus_stats_report: no records");
  std::map<corpus::College, std::vector<const corpus::EtdRecord*>> by_college;
  std::vector<const corpus::EtdRecord*> all;
  for (const corpus::EtdRecord& rec : records) {
    by_college[rec.college].push_back(&rec);
    all.push_back(&rec);
  }

  nlohmann::json colleges = nlohmann::json::object();
  for (corpus::College college : corpus::all_colleges()) {
    auto it = by_college.find(college);
    if (it == by_college.end()) continue;
    colleges[std::string(corpus::college_abbrev(college))] = side_to_json(college_stats(it->second));
  }
  if (by_college.contains(corpus::College::Unassigned)) {
    colleges["unassigned"] = side_to_json(college_stats(by_college[corpus::College::Unassigned]));
  }

  return {{"colleges", colleges},
          {"all", side_to_json(college_stats(all))},
          {"metadata",
           {{"sentence_segmentation", "punctuation+abbreviation heuristic"},
            {"syllables", "vowel-group heuristic (approximate)"},
            {"mtld", "bidirectional, ttr threshold 0.72, min 50 tokens"},
            {"dale_chall_word_list", "abridged"}}}};
}

}  // namespace dspt5::stats
