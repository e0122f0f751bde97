#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "filco/prompt.hpp"
#include "filco/scorer.hpp"
#include "filco/text.hpp"
#include "filco/types.hpp"

namespace filco {

enum class Scale { kBinary, kUnitInterval, kRatio };

struct MeasureScore {
  double value = 0.0;
  Scale scale = Scale::kBinary;
};

/// String inclusion: 1 when the text contains any output as a contiguous,
/// ASCII case-insensitive substring. Matching ignores token boundaries,
/// so "cat" is found in "concatenate".
MeasureScore str_inc(std::string_view text, std::span<const std::string> outputs);
MeasureScore str_inc(const Span& span, std::span<const std::string> outputs);

/// Multiset unigram F1 over text::tokenize tokens; 0 when either side is
/// empty or nothing overlaps.
MeasureScore unigram_f1(std::string_view candidate, std::string_view reference);
double unigram_f1(const text::TokenList& candidate, const text::TokenList& reference);

// Size of the multiset intersection of two token lists.
std::size_t overlap_count(const text::TokenList& a, const text::TokenList& b);

/// What lexical overlap is measured against: the claim for fact
/// verification (its output is only a label), the outputs otherwise.
/// lexical_target joins multiple outputs with a space; selection scores
/// against each of lexical_targets and keeps the max.
std::string lexical_target(const Example& example);
std::vector<std::string> lexical_targets(const Example& example);

// Scorer failure while scoring a particular span.
class SpanScoringError : public ScorerError {
 public:
  SpanScoringError(const std::string& what, int passage_rank, int sentence_index)
      : ScorerError(what + " (span " + std::to_string(passage_rank) + ":" +
                    std::to_string(sentence_index) + ")"),
        passage_rank_(passage_rank),
        sentence_index_(sentence_index) {}
  int passage_rank() const { return passage_rank_; }
  int sentence_index() const { return sentence_index_; }

 private:
  int passage_rank_;
  int sentence_index_;
};

/// CXMI ratio P(output | span + query) / P(output | query), where both
/// prompts are rendered with the GEN template (the denominator with an
/// empty context). Returned on the ratio scale.
MeasureScore cxmi(const SequenceScorer& scorer, const Span& span, std::string_view query,
                  std::string_view output, TaskKind task = TaskKind::kExtractiveQa,
                  const PromptTemplates& templates = {});

// log of the cxmi ratio, computed without exponentiation.
double log_cxmi(const SequenceScorer& scorer, const Span& span, std::string_view query,
                std::string_view output, TaskKind task = TaskKind::kExtractiveQa,
                const PromptTemplates& templates = {});

// Batched log cxmi for many texts against one example, max over outputs.
// Issues exactly one score_batch call.
std::vector<double> log_cxmi_batch(const SequenceScorer& scorer, std::span<const Span> spans,
                                   const Example& example, const PromptTemplates& templates = {});

}  // namespace filco
