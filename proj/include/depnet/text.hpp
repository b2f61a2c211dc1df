#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

namespace depnet {

// UTF-8 decode; invalid bytes decode to U+FFFD and consume one byte.
std::vector<uint32_t> utf8_decode(const std::string& s);
std::string utf8_encode(uint32_t cp);
std::string utf8_encode(const std::vector<uint32_t>& cps);

bool is_emoji(uint32_t cp);
// Variation selectors, ZWJ, skin tones: glued onto the preceding emoji token.
bool is_emoji_extender(uint32_t cp);

// Lowercases (ASCII), replaces URLs with <url> and @mentions with <user>,
// keeps emoji as standalone tokens, splits on whitespace and punctuation.
std::vector<std::string> tokenize(const std::string& text);

// Unigram hits plus hyphen-joined-bigram hits for lexicon entries that
// contain a '-' (so "sleep-deprivation" matches the tokens [sleep, deprivation]).
long count_matches(const std::vector<std::string>& tokens,
                   const std::unordered_set<std::string>& entries);

// Fraction of ASCII letters among letter-like characters (emoji and
// whitespace excluded). Vacuously 1.0 when there are none.
double ascii_letter_fraction(const std::string& text);
void ascii_letter_counts(const std::string& text, long& ascii_letters, long& foreign);

}  // namespace depnet
