// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dspt5::text {

std::string to_lower(std::string_view s);

/// Split on runs of whitespace; no other normalization.
std::vector<std::string> split_whitespace(std::string_view s);

/// Word tokenizer used across prompt building and evaluation: lowercases,
/// splits on anything outside [A-Za-z0-9'-], then trims leading/trailing
/// apostrophes and hyphens from each token.
std::vector<std::string> tokenize_words(std::string_view s);

bool is_stop_word(std::string_view lowercase_token);

/// Runs of letters/digits in the token (used for letter counts).
std::size_t count_letters(std::string_view token);

/// Heuristic English syllable count: vowel groups with silent-e and
/// common-suffix corrections, minimum 1 for a non-empty word.
std::size_t count_syllables(std::string_view word);

/// Sentence segmentation: [.!?] ends a sentence when followed by
/// whitespace and an uppercase letter, digit or opening quote, unless the
/// preceding token is a known abbreviation. End of text always closes the
/// last sentence.
std::vector<std::string> split_sentences(std::string_view s);

}  // namespace dspt5::text
