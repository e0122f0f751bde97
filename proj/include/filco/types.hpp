#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace filco {

using Json = nlohmann::ordered_json;

// Raised for malformed or invariant-violating input data. Carries the
// 1-based line number of the offending record when known (0 otherwise).
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Invalid combination of options (e.g. cxmi without a scorer).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TaskKind { kExtractiveQa, kMultihopQa, kLongformQa, kFactVerification, kDialog };
enum class Measure { kStrInc, kLexical, kCxmi };
enum class Granularity { kSentence, kPassage, kFull };
enum class Fallback { kEmpty, kTopSentence, kFullPassage };
enum class ContextMode { kFull, kPsg, kFilco };
enum class RecordRole { kCtxTrain, kGenTrain, kGenInfer };

std::string_view to_string(TaskKind v);
std::string_view to_string(Measure v);
std::string_view to_string(Granularity v);
std::string_view to_string(Fallback v);
std::string_view to_string(ContextMode v);
std::string_view to_string(RecordRole v);

// Parsers throw ConfigError on unknown names.
TaskKind parse_task_kind(std::string_view s);
Measure parse_measure(std::string_view s);
Granularity parse_granularity(std::string_view s);
Fallback parse_fallback(std::string_view s);
ContextMode parse_context_mode(std::string_view s);
RecordRole parse_record_role(std::string_view s);

Granularity granularity_for(ContextMode mode);

inline constexpr std::string_view kSupports = "SUPPORTS";
inline constexpr std::string_view kRefutes = "REFUTES";

// One task instance: query plus one or more annotated outputs.
struct Example {
  std::string id;
  std::string query;
  std::vector<std::string> outputs;
  TaskKind task = TaskKind::kExtractiveQa;
  // Provenance article ids (KILT-style); absent when the dataset has none.
  std::optional<std::vector<std::string>> provenance;
  // Fields not in the schema, re-emitted verbatim on write.
  Json extra = Json::object();

  bool operator==(const Example&) const = default;
};

struct Passage {
  int rank = 1;
  std::string title;
  std::string text;
  std::optional<double> score;
  std::optional<std::string> provenance;
  Json extra = Json::object();

  bool operator==(const Passage&) const = default;
};

// An example together with its ranked passages (sorted by rank).
struct Instance {
  Example example;
  std::vector<Passage> passages;

  bool operator==(const Instance&) const = default;
};

// A sentence-level fragment of a passage. text is a copy of
// passage.text[char_start, char_end).
struct Span {
  int passage_rank = 1;
  int sentence_index = 0;
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  bool operator==(const Span&) const = default;
};

struct FilterConfig {
  Measure measure = Measure::kStrInc;
  double threshold = 0.5;
  Granularity granularity = Granularity::kSentence;
  int top_k = 1;
  Fallback fallback = Fallback::kEmpty;
  int max_spans = 1;

  // Throws ConfigError when the invariants on k, max_spans or the
  // measure-specific threshold range are violated.
  void validate() const;
};

// Default inclusion threshold per measure: lexical F1 0.5, cxmi ratio 1.0.
double default_threshold(Measure m);

struct Selection {
  std::vector<Span> spans;    // ordered by (passage_rank, sentence_index)
  std::vector<double> scores; // aligned with spans
  Measure measure_used = Measure::kStrInc;
  // True when no span passed the measure's inclusion rule.
  bool fallback_applied = false;

  bool empty() const { return spans.empty(); }
};

struct RecordMeta {
  std::optional<Measure> measure;  // "none" on the wire when absent
  ContextMode mode = ContextMode::kFilco;
  std::size_t input_tokens = 0;
  std::size_t context_tokens = 0;
  Json extra = Json::object();

  bool operator==(const RecordMeta&) const = default;
};

// Training or inference record for the filter model (ctx_train) or the
// generator (gen_train / gen_infer).
struct SilverRecord {
  std::string id;
  RecordRole role = RecordRole::kCtxTrain;
  std::string input;
  std::string target;  // empty for gen_infer
  RecordMeta meta;
  Json extra = Json::object();

  bool operator==(const SilverRecord&) const = default;
};

}  // namespace filco
