#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace filco::text {

// Lowercase tokens; never empty, never containing whitespace.
using TokenList = std::vector<std::string>;

// Splits on (Unicode) whitespace and punctuation, drops punctuation and
// folds ASCII letters to lowercase. Non-ASCII letters pass through as-is.
TokenList tokenize(std::string_view text);

std::string join_tokens(const TokenList& tokens);

inline std::size_t token_count(std::string_view text) { return tokenize(text).size(); }

// Open-domain QA answer normalization: lowercase, delete punctuation,
// drop the articles a/an/the, collapse whitespace.
std::string normalize_answer(std::string_view text);

// ASCII case-insensitive substring test. An empty needle never matches.
bool contains_ci(std::string_view haystack, std::string_view needle);

struct SentenceFragment {
  int index = 0;
  std::size_t start = 0;  // byte offsets, [start, end)
  std::size_t end = 0;
};

// Rule-based sentence splitter. A boundary is a run of . ! ? (optionally
// followed by closing quotes/brackets), then whitespace, then an uppercase
// ASCII letter or an opening quote/bracket. A period ending a known
// abbreviation ("Dr.", "e.g.", "U.S.", ...) or a single-letter initial
// ("J.") is not a boundary. Fragments exclude surrounding whitespace;
// whitespace-only text yields no fragments.
std::vector<SentenceFragment> split_sentences(std::string_view text);

}  // namespace filco::text
