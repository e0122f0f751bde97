#include "filco/prompt.hpp"

namespace filco {

std::string substitute(std::string_view pattern,
                       std::initializer_list<std::pair<std::string_view, std::string_view>> values) {
  std::string out;
  out.reserve(pattern.size());
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] == '{') {
      const auto close = pattern.find('}', i);
      if (close != std::string_view::npos) {
        const auto name = pattern.substr(i + 1, close - i - 1);
        bool replaced = false;
        for (const auto& [key, value] : values) {
          if (key == name) {
            out += value;
            replaced = true;
            break;
          }
        }
        if (replaced) {
          i = close + 1;
          continue;
        }
      }
    }
    out += pattern[i++];
  }
  return out;
}

std::string gen_pattern(TaskKind task, const PromptTemplates& templates) {
  if (templates.gen) return *templates.gen;
  switch (task) {
    case TaskKind::kDialog: return "context: {context}\ndialog history: {query}\nanswer:";
    case TaskKind::kFactVerification: return "context: {context}\nclaim: {query}\njudgment:";
    default: return "context: {context}\nquestion: {query}\nanswer:";
  }
}

std::string render_gen(TaskKind task, std::string_view context, std::string_view query,
                       const PromptTemplates& templates) {
  return substitute(gen_pattern(task, templates), {{"context", context}, {"query", query}});
}

std::string render_ctx(std::string_view query, std::span<const Passage> passages,
                       const PromptTemplates& templates) {
  std::string out = substitute(templates.ctx_query, {{"query", query}});
  for (const auto& p : passages) {
    out += '\n';
    const auto& pattern = p.title.empty() ? templates.ctx_passage_untitled : templates.ctx_passage;
    out += substitute(pattern, {{"title", p.title}, {"text", p.text}});
  }
  out += '\n';
  out += templates.ctx_footer;
  return out;
}

}  // namespace filco
