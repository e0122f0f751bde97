#pragma once

// Exhaustive selection reference over SelectionCase instances whose
// sentences are known up front, so the splitter is not involved.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "filco/types.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

namespace oracle {

struct Expected {
  std::vector<std::pair<int, int>> spans;  // (rank, index), document order
  bool fallback = false;
};

// Same layout as the default-free GEN override used with the n-gram model.
inline std::string prompt(const std::string& pattern, const std::string& context,
                          const std::string& query) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size();) {
    if (pattern.compare(i, 9, "{context}") == 0) {
      out += context;
      i += 9;
    } else if (pattern.compare(i, 7, "{query}") == 0) {
      out += query;
      i += 7;
    } else {
      out += pattern[i++];
    }
  }
  return out;
}

inline double score(const filco::Example& ex, const std::string& text, filco::Measure m,
                    const NGram* lm, const std::string& gen_pattern) {
  switch (m) {
    case filco::Measure::kStrInc:
      for (const auto& o : ex.outputs)
        if (contains_ci(text, o)) return 1.0;
      return 0.0;
    case filco::Measure::kLexical: {
      const auto cand = ascii_tokens(text);
      double best = 0.0;
      if (ex.task == filco::TaskKind::kFactVerification) return f1(cand, ascii_tokens(ex.query));
      for (const auto& o : ex.outputs) best = std::max(best, f1(cand, ascii_tokens(o)));
      return best;
    }
    case filco::Measure::kCxmi: {
      double best = 0.0;
      for (const auto& o : ex.outputs) {
        const double ratio = std::exp(lm->logprob(prompt(gen_pattern, text, ex.query), o) -
                                      lm->logprob(prompt(gen_pattern, "", ex.query), o));
        best = std::max(best, ratio);
      }
      return best;
    }
  }
  return 0.0;
}

inline Expected expected_selection(const synth::SelectionCase& c, const filco::FilterConfig& cfg,
                                   const NGram* lm, const std::string& gen_pattern) {
  std::vector<Candidate> cands;
  for (std::size_t p = 0; p < c.sentences.size(); ++p) {
    const int rank = static_cast<int>(p) + 1;
    if (rank > cfg.top_k) continue;
    for (std::size_t j = 0; j < c.sentences[p].size(); ++j)
      cands.push_back({rank, static_cast<int>(j),
                       score(c.instance.example, c.sentences[p][j], cfg.measure, lm, gen_pattern)});
  }
  const Rule rule = cfg.measure == filco::Measure::kStrInc ? Rule::kFirstHit : Rule::kAboveThreshold;
  Expected e;
  bool passed = false;
  e.spans = select(cands, rule, cfg.threshold, cfg.max_spans, &passed);
  if (passed) return e;
  e.fallback = true;
  switch (cfg.fallback) {
    case filco::Fallback::kEmpty: break;
    case filco::Fallback::kTopSentence: {
      bool any = false;
      auto all = select(cands, Rule::kAboveThreshold, -INFINITY, 1, &any);
      e.spans = all;
      break;
    }
    case filco::Fallback::kFullPassage:
      for (const auto& cand : cands)
        if (cand.rank == 1) e.spans.emplace_back(cand.rank, cand.index);
      break;
  }
  return e;
}

}  // namespace oracle
