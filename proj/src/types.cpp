#include "filco/types.hpp"

#include <array>
#include <utility>

namespace filco {
namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<std::pair<std::string_view, E>, N>& table,
             std::string_view what) {
  for (const auto& [name, value] : table)
    if (name == s) return value;
  std::string msg = "unknown " + std::string(what) + " '" + std::string(s) + "' (expected one of:";
  for (const auto& entry : table) msg += " " + std::string(entry.first);
  throw ConfigError(msg + ")");
}

template <typename E, std::size_t N>
std::string_view enum_name(E v, const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [name, value] : table)
    if (value == v) return name;
  return "?";
}

constexpr std::array<std::pair<std::string_view, TaskKind>, 5> kTasks{{
    {"extractive_qa", TaskKind::kExtractiveQa},
    {"multihop_qa", TaskKind::kMultihopQa},
    {"longform_qa", TaskKind::kLongformQa},
    {"fact_verification", TaskKind::kFactVerification},
    {"dialog", TaskKind::kDialog},
}};
constexpr std::array<std::pair<std::string_view, Measure>, 3> kMeasures{{
    {"str_inc", Measure::kStrInc},
    {"lexical", Measure::kLexical},
    {"cxmi", Measure::kCxmi},
}};
constexpr std::array<std::pair<std::string_view, Granularity>, 3> kGranularities{{
    {"sentence", Granularity::kSentence},
    {"passage", Granularity::kPassage},
    {"full", Granularity::kFull},
}};
constexpr std::array<std::pair<std::string_view, Fallback>, 3> kFallbacks{{
    {"empty", Fallback::kEmpty},
    {"top_sentence", Fallback::kTopSentence},
    {"full_passage", Fallback::kFullPassage},
}};
constexpr std::array<std::pair<std::string_view, ContextMode>, 3> kModes{{
    {"full", ContextMode::kFull},
    {"psg", ContextMode::kPsg},
    {"filco", ContextMode::kFilco},
}};
constexpr std::array<std::pair<std::string_view, RecordRole>, 3> kRoles{{
    {"ctx_train", RecordRole::kCtxTrain},
    {"gen_train", RecordRole::kGenTrain},
    {"gen_infer", RecordRole::kGenInfer},
}};

}  // namespace

std::string_view to_string(TaskKind v) { return enum_name(v, kTasks); }
std::string_view to_string(Measure v) { return enum_name(v, kMeasures); }
std::string_view to_string(Granularity v) { return enum_name(v, kGranularities); }
std::string_view to_string(Fallback v) { return enum_name(v, kFallbacks); }
std::string_view to_string(ContextMode v) { return enum_name(v, kModes); }
std::string_view to_string(RecordRole v) { return enum_name(v, kRoles); }

TaskKind parse_task_kind(std::string_view s) { return parse_enum(s, kTasks, "task"); }
Measure parse_measure(std::string_view s) { return parse_enum(s, kMeasures, "measure"); }
Granularity parse_granularity(std::string_view s) {
  return parse_enum(s, kGranularities, "granularity");
}
Fallback parse_fallback(std::string_view s) { return parse_enum(s, kFallbacks, "fallback"); }
ContextMode parse_context_mode(std::string_view s) { return parse_enum(s, kModes, "mode"); }
RecordRole parse_record_role(std::string_view s) { return parse_enum(s, kRoles, "role"); }

Granularity granularity_for(ContextMode mode) {
  switch (mode) {
    case ContextMode::kFull: return Granularity::kFull;
    case ContextMode::kPsg: return Granularity::kPassage;
    case ContextMode::kFilco: return Granularity::kSentence;
  }
  return Granularity::kSentence;
}

double default_threshold(Measure m) {
  switch (m) {
    case Measure::kLexical: return 0.5;
    case Measure::kCxmi: return 1.0;
    case Measure::kStrInc: return 0.5;
  }
  return 0.5;
}

void FilterConfig::validate() const {
  if (top_k < 1) throw ConfigError("top_k must be >= 1");
  if (max_spans < 1) throw ConfigError("max_spans must be >= 1");
  if (measure == Measure::kLexical && !(threshold >= 0.0 && threshold <= 1.0))
    throw ConfigError("lexical threshold must lie in [0, 1]");
  if (measure == Measure::kCxmi && !(threshold > 0.0))
    throw ConfigError("cxmi threshold must be > 0 (ratio scale)");
}

}  // namespace filco
