#include "filco/silver.hpp"

#include <vector>

#include "filco/text.hpp"

namespace filco {

std::string join_span_texts(const Selection& selection) {
  std::string out;
  for (const auto& s : selection.spans) {
    if (!out.empty()) out += ' ';
    out += s.text;
  }
  return out;
}

SilverRecord build_ctx_record(const Example& example, std::span<const Passage> passages,
                              const Selection& selection, int k,
                              const PromptTemplates& templates) {
  std::vector<Passage> top;
  for (const auto& p : passages)
    if (p.rank <= k) top.push_back(p);

  SilverRecord rec;
  rec.id = example.id;
  rec.role = RecordRole::kCtxTrain;
  rec.input = render_ctx(example.query, top, templates);
  rec.target = join_span_texts(selection);
  rec.meta.measure = selection.measure_used;
  rec.meta.mode = ContextMode::kFilco;
  rec.meta.input_tokens = text::token_count(rec.input);
  rec.meta.context_tokens = text::token_count(rec.target);
  return rec;
}

SilverRecord build_gen_record(const Example& example, const ContextAssembly& context,
                              bool with_target, std::optional<Measure> measure,
                              const PromptTemplates& templates) {
  SilverRecord rec;
  rec.id = example.id;
  rec.role = with_target ? RecordRole::kGenTrain : RecordRole::kGenInfer;
  rec.input = render_gen(example.task, context.text, example.query, templates);
  if (with_target) rec.target = example.outputs.front();
  rec.meta.measure = measure;
  rec.meta.mode = context.mode;
  rec.meta.input_tokens = text::token_count(rec.input);
  rec.meta.context_tokens = context.token_count;
  return rec;
}

}  // namespace filco
