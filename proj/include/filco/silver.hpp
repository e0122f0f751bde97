#pragma once

#include <optional>
#include <span>
#include <string>

#include "filco/prompt.hpp"
#include "filco/selection.hpp"
#include "filco/types.hpp"

namespace filco {

// Span texts joined by single spaces in document order ("" when empty).
std::string join_span_texts(const Selection& selection);

// Filter-model record: CTX prompt over the top-k passages, target the
// selected spans. meta.context_tokens counts the target.
SilverRecord build_ctx_record(const Example& example, std::span<const Passage> passages,
                              const Selection& selection, int k,
                              const PromptTemplates& templates = {});

// Generator record: GEN prompt with the assembled context. The target is
// the first annotated output (role gen_train) or empty (gen_infer).
SilverRecord build_gen_record(const Example& example, const ContextAssembly& context,
                              bool with_target, std::optional<Measure> measure = std::nullopt,
                              const PromptTemplates& templates = {});

}  // namespace filco
