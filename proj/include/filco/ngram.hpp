#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "filco/scorer.hpp"

namespace filco {

// Additive-smoothed n-gram language model over text::tokenize tokens.
//
// Each corpus line is padded with n-1 begin sentinels and one end
// sentinel. The vocabulary V is every corpus token plus the end sentinel,
// and P(w | h) = (c(h, w) + alpha) / (c(h) + alpha * |V|), which sums to 1
// over V for every history h (unseen histories give the uniform 1/|V|).
// Tokens outside V receive alpha / (c(h) + alpha * |V|) as well.
//
// Immutable after training; safe to share across threads.
class NGramModel final : public SequenceScorer {
 public:
  static constexpr std::string_view kBegin = "<s>";
  static constexpr std::string_view kEnd = "</s>";

  // Throws ConfigError for n < 1, alpha <= 0 or an empty corpus.
  static NGramModel train(std::span<const std::string> corpus, int n, double alpha);

  int order() const { return order_; }
  double alpha() const { return alpha_; }
  const std::unordered_set<std::string>& vocabulary() const { return vocab_; }

  // history holds the n-1 preceding tokens (shorter histories are padded
  // with begin sentinels, longer ones truncated to the last n-1).
  double probability(std::span<const std::string> history, std::string_view token) const;

  // Histories that occurred in training, each of length n-1.
  std::vector<std::vector<std::string>> observed_histories() const;

  double score(std::string_view prefix, std::string_view target) const override;

 private:
  struct HistoryCounts {
    std::uint64_t total = 0;
    std::unordered_map<std::string, std::uint64_t> next;
  };

  NGramModel(int order, double alpha) : order_(order), alpha_(alpha) {}
  std::string history_key(std::span<const std::string> history) const;

  int order_;
  double alpha_;
  std::unordered_set<std::string> vocab_;
  std::unordered_map<std::string, HistoryCounts> counts_;
};

}  // namespace filco
