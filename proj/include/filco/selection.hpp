#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "filco/prompt.hpp"
#include "filco/scorer.hpp"
#include "filco/types.hpp"

namespace filco {

// Sentence spans of one passage, in order.
std::vector<Span> sentence_spans(const Passage& passage);

// The whole passage text as a single span (sentence_index 0).
Span passage_span(const Passage& passage);

// Sentence spans of passages with rank <= k, ordered by (rank, index).
std::vector<Span> enumerate_spans(std::span<const Passage> passages, int k);

// Scores used for ranking: 0/1 for str_inc, F1 for lexical (best over
// lexical_targets), log ratio for cxmi (best over outputs). Throws
// ConfigError when cxmi is requested without a scorer.
std::vector<double> rank_scores(const Example& example, std::span<const Span> spans,
                                Measure measure, const SequenceScorer* scorer,
                                const PromptTemplates& templates = {});

// Whether a ranking score passes the measure's inclusion rule.
bool passes(Measure measure, double rank_score, double threshold);

// Converts a ranking score to the measure's reporting scale (cxmi: ratio).
double reported_score(Measure measure, double rank_score);

/// Silver span selection over the top-k passages.
///
/// str_inc keeps the first hits in document order. lexical and cxmi keep
/// the highest scores strictly above the threshold, ties going to the
/// smaller (rank, index). At most max_spans spans are kept and returned
/// in document order. When nothing passes, config.fallback decides:
/// empty, the best-scoring span regardless of threshold (top_sentence),
/// or every sentence of the top-ranked passage (full_passage).
Selection select_silver(const Example& example, std::span<const Passage> passages,
                        const FilterConfig& config, const SequenceScorer* scorer = nullptr,
                        const PromptTemplates& templates = {});

// Passage-level baseline: each top-k passage is scored as one span and
// every passage passing the inclusion rule is kept, in rank order.
std::vector<Passage> select_passages_psg(const Example& example,
                                         std::span<const Passage> passages,
                                         const FilterConfig& config,
                                         const SequenceScorer* scorer = nullptr,
                                         const PromptTemplates& templates = {});

struct ContextAssembly {
  ContextMode mode = ContextMode::kFilco;
  std::string text;
  Selection selection;            // filco
  std::vector<Passage> passages;  // full / psg
  std::size_t token_count = 0;
};

// "title: text" (or just text when untitled).
std::string passage_block(const Passage& passage);

// full: top-k passages as blocks joined by newlines; psg: the given
// (already kept) passages likewise; filco: selected span texts joined by
// single spaces. selection is required for filco and ignored otherwise.
ContextAssembly assemble_context(ContextMode mode, std::span<const Passage> passages,
                                 const Selection* selection, int k);

}  // namespace filco
