#include "filco/text.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

namespace filco::text {
namespace {

struct CodePoint {
  char32_t value;
  std::size_t length;  // bytes consumed
};

// Decodes one UTF-8 sequence. Invalid bytes decode as themselves with
// length 1 so that arbitrary byte strings stay processable.
CodePoint decode(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  auto cont = [&](std::size_t k) {
    return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  auto byte = [&](std::size_t k) { return static_cast<char32_t>(s[i + k] & 0x3F); };
  if ((b0 & 0xE0) == 0xC0 && cont(1)) return {((b0 & 0x1Fu) << 6) | byte(1), 2};
  if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2))
    return {((b0 & 0x0Fu) << 12) | (byte(1) << 6) | byte(2), 3};
  if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3))
    return {((b0 & 0x07u) << 18) | (byte(1) << 12) | (byte(2) << 6) | byte(3), 4};
  return {0xFFFD0000u | b0, 1};  // outside Unicode range: never classified
}

bool is_space(char32_t c) {
  return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
         c == 0x205F || c == 0x3000;
}

bool is_punct(char32_t c) {
  if (c < 0x80) return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
                       (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  return c == 0xA1 || c == 0xA7 || c == 0xAB || c == 0xB6 || c == 0xB7 || c == 0xBB ||
         c == 0xBF || (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x3001 && c <= 0x3003) || (c >= 0x3008 && c <= 0x3011) ||
         (c >= 0xFF01 && c <= 0xFF0F) || (c >= 0xFF1A && c <= 0xFF20);
}

char lower_ascii(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_article(std::string_view w) { return w == "a" || w == "an" || w == "the"; }

constexpr std::array<std::string_view, 27> kAbbreviations{
    "mr.",  "mrs.", "ms.",  "dr.",  "prof.", "sr.",  "jr.",   "st.",  "vs.",
    "etc.", "e.g.", "i.e.", "u.s.", "u.k.",  "inc.", "ltd.",  "co.",  "corp.",
    "mt.",  "gen.", "col.", "lt.",  "capt.", "sgt.", "rev.",  "fig.", "al.",
};

// Length in bytes of an opening quote/bracket at i, or 0.
std::size_t opener_length(std::string_view s, std::size_t i) {
  const char c = s[i];
  if (c == '(' || c == '[' || c == '"' || c == '\'') return 1;
  // U+201C, U+2018
  if (s.substr(i, 3) == "\xE2\x80\x9C" || s.substr(i, 3) == "\xE2\x80\x98") return 3;
  return 0;
}

// Length in bytes of a closing quote/bracket at i, or 0.
std::size_t closer_length(std::string_view s, std::size_t i) {
  const char c = s[i];
  if (c == ')' || c == ']' || c == '"' || c == '\'') return 1;
  if (s.substr(i, 3) == "\xE2\x80\x9D" || s.substr(i, 3) == "\xE2\x80\x99") return 3;
  return 0;
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

bool space_at(std::string_view s, std::size_t i) { return is_space(decode(s, i).value); }

// Whether the '.' at position dot closes an abbreviation or an initial.
bool is_abbreviation(std::string_view s, std::size_t dot) {
  std::size_t start = dot;
  while (start > 0 && !space_at(s, start - 1)) --start;
  while (start < dot && opener_length(s, start)) start += opener_length(s, start);
  std::string word;
  for (std::size_t k = start; k <= dot; ++k) word += lower_ascii(s[k]);
  if (std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end())
    return true;
  return word.size() == 2 && s[start] >= 'A' && s[start] <= 'Z';
}

}  // namespace

TokenList tokenize(std::string_view text) {
  TokenList tokens;
  std::string current;
  for (std::size_t i = 0; i < text.size();) {
    const auto cp = decode(text, i);
    if (is_space(cp.value) || is_punct(cp.value)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      for (std::size_t k = 0; k < cp.length; ++k) current += lower_ascii(text[i + k]);
    }
    i += cp.length;
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string join_tokens(const TokenList& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::string normalize_answer(std::string_view text) {
  std::string stripped;
  for (std::size_t i = 0; i < text.size();) {
    const auto cp = decode(text, i);
    if (is_space(cp.value)) {
      stripped += ' ';
    } else if (!is_punct(cp.value)) {
      for (std::size_t k = 0; k < cp.length; ++k) stripped += lower_ascii(text[i + k]);
    }
    i += cp.length;
  }
  std::string out;
  std::size_t pos = 0;
  while (pos < stripped.size()) {
    while (pos < stripped.size() && stripped[pos] == ' ') ++pos;
    std::size_t end = pos;
    while (end < stripped.size() && stripped[end] != ' ') ++end;
    if (end > pos) {
      std::string_view word(stripped.data() + pos, end - pos);
      if (!is_article(word)) {
        if (!out.empty()) out += ' ';
        out += word;
      }
    }
    pos = end;
  }
  return out;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                        [](char a, char b) { return lower_ascii(a) == lower_ascii(b); });
  return it != haystack.end();
}

std::vector<SentenceFragment> split_sentences(std::string_view text) {
  std::vector<SentenceFragment> out;
  const std::size_t n = text.size();
  auto skip_space = [&](std::size_t i) {
    while (i < n && space_at(text, i)) i += decode(text, i).length;
    return i;
  };

  std::size_t start = skip_space(0);
  std::size_t i = start;
  while (i < n) {
    if (!is_terminal(text[i])) {
      ++i;
      continue;
    }
    std::size_t last_terminal = i;
    std::size_t j = i + 1;
    while (j < n && is_terminal(text[j])) last_terminal = j++;
    while (j < n) {
      const std::size_t len = closer_length(text, j);
      if (!len) break;
      j += len;
    }
    const bool single_period = text[i] == '.' && last_terminal == i;
    if (j < n && space_at(text, j)) {
      const std::size_t next = skip_space(j);
      if (next < n && ((text[next] >= 'A' && text[next] <= 'Z') || opener_length(text, next) > 0) &&
          !(single_period && is_abbreviation(text, i))) {
        out.push_back({static_cast<int>(out.size()), start, j});
        start = next;
        i = next;
        continue;
      }
    }
    i = j;
  }

  std::size_t end = n;
  while (end > start) {
    // step back over trailing whitespace, one code point at a time
    std::size_t k = end - 1;
    while (k > start && (static_cast<unsigned char>(text[k]) & 0xC0) == 0x80) --k;
    if (!space_at(text, k)) break;
    end = k;
  }
  if (end > start) out.push_back({static_cast<int>(out.size()), start, end});
  return out;
}

}  // namespace filco::text
