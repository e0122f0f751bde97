#include "filco/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "filco/measures.hpp"
#include "filco/text.hpp"

namespace filco {

std::vector<Span> sentence_spans(const Passage& passage) {
  std::vector<Span> spans;
  for (const auto& f : text::split_sentences(passage.text))
    spans.push_back({passage.rank, f.index, passage.text.substr(f.start, f.end - f.start), f.start,
                     f.end});
  return spans;
}

Span passage_span(const Passage& passage) {
  return {passage.rank, 0, passage.text, 0, passage.text.size()};
}

std::vector<Span> enumerate_spans(std::span<const Passage> passages, int k) {
  std::vector<const Passage*> top;
  for (const auto& p : passages)
    if (p.rank <= k) top.push_back(&p);
  std::sort(top.begin(), top.end(), [](const Passage* a, const Passage* b) { return a->rank < b->rank; });
  std::vector<Span> out;
  for (const auto* p : top) {
    auto s = sentence_spans(*p);
    out.insert(out.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
  }
  return out;
}

std::vector<double> rank_scores(const Example& example, std::span<const Span> spans,
                                Measure measure, const SequenceScorer* scorer,
                                const PromptTemplates& templates) {
  std::vector<double> scores;
  scores.reserve(spans.size());
  switch (measure) {
    case Measure::kStrInc:
      for (const auto& s : spans) scores.push_back(str_inc(s, example.outputs).value);
      break;
    case Measure::kLexical: {
      std::vector<text::TokenList> targets;
      for (const auto& t : lexical_targets(example)) targets.push_back(text::tokenize(t));
      for (const auto& s : spans) {
        const auto tokens = text::tokenize(s.text);
        double best = 0.0;
        for (const auto& t : targets) best = std::max(best, unigram_f1(tokens, t));
        scores.push_back(best);
      }
      break;
    }
    case Measure::kCxmi:
      if (!scorer) throw ConfigError("measure cxmi requires a sequence scorer");
      if (!spans.empty()) scores = log_cxmi_batch(*scorer, spans, example, templates);
      break;
  }
  return scores;
}

bool passes(Measure measure, double rank_score, double threshold) {
  switch (measure) {
    case Measure::kStrInc: return rank_score == 1.0;
    case Measure::kLexical: return rank_score > threshold;
    case Measure::kCxmi: return rank_score > std::log(threshold);
  }
  return false;
}

double reported_score(Measure measure, double rank_score) {
  return measure == Measure::kCxmi ? std::exp(rank_score) : rank_score;
}

namespace {

// Indices sorted by descending score, earlier index first on ties.
std::vector<std::size_t> by_score(const std::vector<double>& scores, std::vector<std::size_t> idx) {
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return idx;
}

Selection make_selection(const std::vector<Span>& spans, const std::vector<double>& scores,
                         std::vector<std::size_t> chosen, Measure measure) {
  std::sort(chosen.begin(), chosen.end());
  Selection sel;
  sel.measure_used = measure;
  for (auto i : chosen) {
    sel.spans.push_back(spans[i]);
    sel.scores.push_back(reported_score(measure, scores[i]));
  }
  return sel;
}

}  // namespace

Selection select_silver(const Example& example, std::span<const Passage> passages,
                        const FilterConfig& config, const SequenceScorer* scorer,
                        const PromptTemplates& templates) {
  config.validate();
  if (config.measure == Measure::kCxmi && !scorer)
    throw ConfigError("measure cxmi requires a sequence scorer");
  const auto spans = enumerate_spans(passages, config.top_k);
  const auto scores = rank_scores(example, spans, config.measure, scorer, templates);

  std::vector<std::size_t> passing;
  for (std::size_t i = 0; i < spans.size(); ++i)
    if (passes(config.measure, scores[i], config.threshold)) passing.push_back(i);

  if (!passing.empty()) {
    auto ranked = by_score(scores, std::move(passing));
    ranked.resize(std::min(ranked.size(), static_cast<std::size_t>(config.max_spans)));
    return make_selection(spans, scores, std::move(ranked), config.measure);
  }

  std::vector<std::size_t> chosen;
  switch (config.fallback) {
    case Fallback::kEmpty: break;
    case Fallback::kTopSentence:
      if (!spans.empty()) {
        std::vector<std::size_t> all(spans.size());
        std::iota(all.begin(), all.end(), 0);
        chosen.push_back(by_score(scores, std::move(all)).front());
      }
      break;
    case Fallback::kFullPassage:
      for (std::size_t i = 0; i < spans.size(); ++i)
        if (spans[i].passage_rank == spans.front().passage_rank) chosen.push_back(i);
      break;
  }
  auto sel = make_selection(spans, scores, std::move(chosen), config.measure);
  sel.fallback_applied = true;
  return sel;
}

std::vector<Passage> select_passages_psg(const Example& example,
                                         std::span<const Passage> passages,
                                         const FilterConfig& config,
                                         const SequenceScorer* scorer,
                                         const PromptTemplates& templates) {
  config.validate();
  std::vector<const Passage*> top;
  std::vector<Span> spans;
  for (const auto& p : passages) {
    if (p.rank > config.top_k) continue;
    top.push_back(&p);
  }
  std::sort(top.begin(), top.end(), [](const Passage* a, const Passage* b) { return a->rank < b->rank; });
  for (const auto* p : top) spans.push_back(passage_span(*p));
  const auto scores = rank_scores(example, spans, config.measure, scorer, templates);
  std::vector<Passage> kept;
  for (std::size_t i = 0; i < top.size(); ++i)
    if (passes(config.measure, scores[i], config.threshold)) kept.push_back(*top[i]);
  return kept;
}

std::string passage_block(const Passage& passage) {
  return passage.title.empty() ? passage.text : passage.title + ": " + passage.text;
}

ContextAssembly assemble_context(ContextMode mode, std::span<const Passage> passages,
                                 const Selection* selection, int k) {
  ContextAssembly out;
  out.mode = mode;
  auto join_passages = [&](auto&& keep) {
    for (const auto& p : passages) {
      if (!keep(p)) continue;
      if (!out.text.empty()) out.text += '\n';
      out.text += passage_block(p);
      out.passages.push_back(p);
    }
  };
  switch (mode) {
    case ContextMode::kFull: join_passages([&](const Passage& p) { return p.rank <= k; }); break;
    case ContextMode::kPsg: join_passages([](const Passage&) { return true; }); break;
    case ContextMode::kFilco:
      if (!selection) throw ConfigError("filco context assembly requires a selection");
      out.selection = *selection;
      for (const auto& s : selection->spans) {
        if (!out.text.empty()) out.text += ' ';
        out.text += s.text;
      }
      break;
  }
  out.token_count = text::token_count(out.text);
  return out;
}

}  // namespace filco
