#include "filco/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace filco {

MeasureScore str_inc(std::string_view text, std::span<const std::string> outputs) {
  for (const auto& o : outputs)
    if (text::contains_ci(text, o)) return {1.0, Scale::kBinary};
  return {0.0, Scale::kBinary};
}

MeasureScore str_inc(const Span& span, std::span<const std::string> outputs) {
  return str_inc(span.text, outputs);
}

std::size_t overlap_count(const text::TokenList& a, const text::TokenList& b) {
  std::unordered_map<std::string_view, int> counts;
  for (const auto& t : b) ++counts[t];
  std::size_t common = 0;
  for (const auto& t : a) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  return common;
}

double unigram_f1(const text::TokenList& candidate, const text::TokenList& reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const auto common = overlap_count(candidate, reference);
  if (common == 0) return 0.0;
  const double p = static_cast<double>(common) / static_cast<double>(candidate.size());
  const double r = static_cast<double>(common) / static_cast<double>(reference.size());
  return 2.0 * p * r / (p + r);
}

MeasureScore unigram_f1(std::string_view candidate, std::string_view reference) {
  return {unigram_f1(text::tokenize(candidate), text::tokenize(reference)), Scale::kUnitInterval};
}

std::vector<std::string> lexical_targets(const Example& example) {
  if (example.task == TaskKind::kFactVerification) return {example.query};
  return example.outputs;
}

std::string lexical_target(const Example& example) {
  if (example.task == TaskKind::kFactVerification) return example.query;
  std::string joined;
  for (const auto& o : example.outputs) {
    if (!joined.empty()) joined += ' ';
    joined += o;
  }
  return joined;
}

double log_cxmi(const SequenceScorer& scorer, const Span& span, std::string_view query,
                std::string_view output, TaskKind task, const PromptTemplates& templates) {
  try {
    const double with = scorer.score(render_gen(task, span.text, query, templates), output);
    const double without = scorer.score(render_gen(task, "", query, templates), output);
    return with - without;
  } catch (const ScorerError& e) {
    throw SpanScoringError(e.what(), span.passage_rank, span.sentence_index);
  }
}

MeasureScore cxmi(const SequenceScorer& scorer, const Span& span, std::string_view query,
                  std::string_view output, TaskKind task, const PromptTemplates& templates) {
  return {std::exp(log_cxmi(scorer, span, query, output, task, templates)), Scale::kRatio};
}

std::vector<double> log_cxmi_batch(const SequenceScorer& scorer, std::span<const Span> spans,
                                   const Example& example, const PromptTemplates& templates) {
  const auto& outputs = example.outputs;
  // Layout: one denominator per output, then spans x outputs.
  std::vector<ScoreRequest> requests;
  requests.reserve(outputs.size() * (spans.size() + 1));
  const std::string bare = render_gen(example.task, "", example.query, templates);
  for (const auto& o : outputs) requests.push_back({bare, o});
  for (const auto& s : spans) {
    const std::string prompt = render_gen(example.task, s.text, example.query, templates);
    for (const auto& o : outputs) requests.push_back({prompt, o});
  }

  std::vector<double> logprobs;
  try {
    logprobs = scorer.score_batch(requests);
  } catch (const ScorerError& e) {
    if (e.index() && *e.index() >= outputs.size()) {
      const auto& s = spans[(*e.index() - outputs.size()) / outputs.size()];
      throw SpanScoringError(e.what(), s.passage_rank, s.sentence_index);
    }
    throw;
  }
  if (logprobs.size() != requests.size())
    throw ProtocolError("scorer returned " + std::to_string(logprobs.size()) + " results for " +
                        std::to_string(requests.size()) + " requests");

  std::vector<double> out;
  out.reserve(spans.size());
  for (std::size_t s = 0; s < spans.size(); ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t o = 0; o < outputs.size(); ++o) {
      const double diff = logprobs[outputs.size() * (s + 1) + o] - logprobs[o];
      best = std::max(best, diff);
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace filco
