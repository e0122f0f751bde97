#include "filco/pipeline.hpp"

namespace filco {

ProcessedExample process_instance(const Instance& instance, const PipelineOptions& options) {
  ProcessedExample out;
  const auto& cfg = options.config;
  if (options.mode == ContextMode::kFilco || options.want_selection)
    out.selection = select_silver(instance.example, instance.passages, cfg, options.scorer,
                                  options.templates);
  switch (options.mode) {
    case ContextMode::kFilco:
      out.context = assemble_context(ContextMode::kFilco, instance.passages, &out.selection,
                                     cfg.top_k);
      break;
    case ContextMode::kPsg: {
      const auto kept = select_passages_psg(instance.example, instance.passages, cfg,
                                            options.scorer, options.templates);
      out.context = assemble_context(ContextMode::kPsg, kept, nullptr, cfg.top_k);
      break;
    }
    case ContextMode::kFull:
      out.context = assemble_context(ContextMode::kFull, instance.passages, nullptr, cfg.top_k);
      break;
  }
  return out;
}

Json selection_record(const Instance& instance, const ProcessedExample& processed,
                      const PipelineOptions& options) {
  Json doc;
  doc["id"] = instance.example.id;
  doc["mode"] = to_string(options.mode);
  doc["measure"] =
      options.mode == ContextMode::kFull ? "none" : std::string(to_string(options.config.measure));
  doc["k"] = options.config.top_k;
  if (options.mode == ContextMode::kFilco) {
    Json spans = Json::array();
    const auto& sel = processed.selection;
    for (std::size_t i = 0; i < sel.spans.size(); ++i) {
      const auto& s = sel.spans[i];
      spans.push_back(Json{{"rank", s.passage_rank},
                           {"index", s.sentence_index},
                           {"char_start", s.char_start},
                           {"char_end", s.char_end},
                           {"text", s.text},
                           {"score", sel.scores[i]}});
    }
    doc["spans"] = std::move(spans);
    doc["fallback_applied"] = sel.fallback_applied;
  } else {
    Json ranks = Json::array();
    for (const auto& p : processed.context.passages) ranks.push_back(p.rank);
    doc["passages"] = std::move(ranks);
  }
  doc["context"] = processed.context.text;
  doc["context_tokens"] = processed.context.token_count;
  return doc;
}

}  // namespace filco
