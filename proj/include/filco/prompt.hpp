#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "filco/types.hpp"

namespace filco {

// Prompt layouts for the filter model (CTX) and the generator (GEN).
// Placeholders are {query}, {context}, {title} and {text}; substitution is
// a single pass, so placeholder-like text inside values is left alone.
struct PromptTemplates {
  // Replaces the per-task GEN default when set.
  std::optional<std::string> gen;
  std::string ctx_query = "question: {query}";
  std::string ctx_passage = "context: {title}: {text}";
  std::string ctx_passage_untitled = "context: {text}";
  std::string ctx_footer = "filtered:";
};

// "context: {context}\nquestion: {query}\nanswer:" with the question and
// answer markers renamed for dialog ("dialog history") and fact
// verification ("claim" / "judgment").
std::string gen_pattern(TaskKind task, const PromptTemplates& templates = {});

std::string render_gen(TaskKind task, std::string_view context, std::string_view query,
                       const PromptTemplates& templates = {});

// passages must already be restricted to the top-k.
std::string render_ctx(std::string_view query, std::span<const Passage> passages,
                       const PromptTemplates& templates = {});

// Single-pass placeholder substitution; unknown placeholders are kept.
std::string substitute(std::string_view pattern,
                       std::initializer_list<std::pair<std::string_view, std::string_view>> values);

}  // namespace filco
