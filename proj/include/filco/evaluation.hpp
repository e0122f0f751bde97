#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "filco/types.hpp"

namespace filco {

enum class Metric { kExactMatch, kF1, kAccuracy };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view s);  // "em", "f1", "accuracy"

// EM for open-domain QA, F1 for multi-hop, long-form and dialog,
// accuracy for fact verification.
Metric default_metric(TaskKind task);

// 1 when the normalized prediction equals any normalized answer.
double exact_match(std::string_view prediction, std::span<const std::string> answers);

// Max over answers of unigram F1 between normalized strings.
double f1_metric(std::string_view prediction, std::span<const std::string> answers);

// Fraction of output tokens (multiset) present in the context, max over
// outputs. 0 for an empty context.
double context_precision(std::span<const std::string> outputs, std::string_view context);

// Fraction of context tokens (multiset) accounted for by the output, max
// over outputs: how much of the context is output-bearing.
double support_density(std::span<const std::string> outputs, std::string_view context);

enum class RecallMode { kAnswerString, kProvenance };

std::string_view to_string(RecallMode m);
RecallMode parse_recall_mode(std::string_view s);

// Answer-string mode: the passage text contains an output (case-insensitive).
// Provenance mode: the passage provenance is one of the example's
// provenance ids; throws DataError when either side lacks provenance.
bool passage_hit(const Example& example, const Passage& passage, RecallMode mode);

// Positive top-1 passage: answer-string hit for extractive QA, provenance
// hit for other tasks (answer-string when the data carries no provenance).
bool has_positive_top1(const Instance& instance);

// Percentage of examples with a hit among the top-k passages. Throws
// DataError on an empty dataset.
double retrieval_recall(std::span<const Instance> dataset, int k, RecallMode mode);

struct RetrievalPrecision {
  double precision = 0.0;  // mean context_precision x100 over positives
  double density = 0.0;    // mean support_density x100 over positives
  std::size_t support = 0;
};

// Over examples with a top-k hit, measured against the joined top-k texts.
RetrievalPrecision retrieval_precision(std::span<const Instance> dataset, int k, RecallMode mode);

struct LengthRow {
  ContextMode mode = ContextMode::kFull;
  std::size_t count = 0;
  double mean_input_tokens = 0.0;
  double mean_context_tokens = 0.0;
  // 100 * (1 - mode / full); absent without full-mode records.
  std::optional<double> input_reduction;
  std::optional<double> context_reduction;
};

struct LengthReport {
  std::vector<LengthRow> rows;  // ordered full, psg, filco; only modes present
  const LengthRow* find(ContextMode mode) const;
};

// Generator records only; ctx_train records are skipped.
LengthReport length_report(std::span<const SilverRecord> records);

struct SplitMean {
  double mean = 0.0;  // x100
  std::size_t support = 0;
};

struct EvalSummary {
  Metric metric = Metric::kExactMatch;
  std::vector<std::pair<std::string, double>> per_example;  // dataset order
  double mean = 0.0;  // x100
  std::size_t support = 0;
  std::optional<SplitMean> positive;
  std::optional<SplitMean> negative;
};

using Predictions = std::unordered_map<std::string, std::string>;

// {"id": str, "prediction": str} per line; duplicate ids are a DataError.
Predictions read_predictions(std::istream& in);

// Incremental form of evaluate for streamed datasets.
class EvalAccumulator {
 public:
  EvalAccumulator(Metric metric, bool split_by_positive)
      : metric_(metric), split_(split_by_positive) {}

  void add(const Instance& instance, std::string_view prediction);
  // Throws DataError when nothing was added.
  EvalSummary finish() const;

 private:
  Metric metric_;
  bool split_;
  std::vector<std::pair<std::string, double>> scores_;
  double total_ = 0.0;
  SplitMean pos_, neg_;  // sums until finish()
};

// Incremental recall/precision for k = 1..max_k.
class RetrievalStats {
 public:
  RetrievalStats(int max_k, RecallMode mode);

  void add(const Instance& instance);
  std::size_t count() const { return count_; }
  // Throw DataError when nothing was added.
  double recall(int k) const;
  RetrievalPrecision precision(int k) const;

 private:
  int max_k_;
  RecallMode mode_;
  std::size_t count_ = 0;
  std::vector<std::size_t> hits_;
  std::vector<RetrievalPrecision> precision_;  // sums until read
};

// Throws DataError listing ids without a prediction, or on an empty dataset.
EvalSummary evaluate(const Predictions& predictions, std::span<const Instance> dataset,
                     Metric metric, bool split_by_positive);

Json to_json(const EvalSummary& summary);
Json to_json(const LengthReport& report);

}  // namespace filco
