#include "filco/evaluation.hpp"

#include <algorithm>
#include <istream>
#include <map>

#include "filco/measures.hpp"
#include "filco/text.hpp"

namespace filco {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::kExactMatch: return "em";
    case Metric::kF1: return "f1";
    case Metric::kAccuracy: return "accuracy";
  }
  return "?";
}

Metric parse_metric(std::string_view s) {
  if (s == "em") return Metric::kExactMatch;
  if (s == "f1") return Metric::kF1;
  if (s == "accuracy") return Metric::kAccuracy;
  throw ConfigError("unknown metric '" + std::string(s) + "' (expected one of: em f1 accuracy)");
}

Metric default_metric(TaskKind task) {
  switch (task) {
    case TaskKind::kExtractiveQa: return Metric::kExactMatch;
    case TaskKind::kFactVerification: return Metric::kAccuracy;
    default: return Metric::kF1;
  }
}

double exact_match(std::string_view prediction, std::span<const std::string> answers) {
  const auto p = text::normalize_answer(prediction);
  for (const auto& a : answers)
    if (text::normalize_answer(a) == p) return 1.0;
  return 0.0;
}

double f1_metric(std::string_view prediction, std::span<const std::string> answers) {
  const auto p = text::tokenize(text::normalize_answer(prediction));
  double best = 0.0;
  for (const auto& a : answers)
    best = std::max(best, unigram_f1(p, text::tokenize(text::normalize_answer(a))));
  return best;
}

double context_precision(std::span<const std::string> outputs, std::string_view context) {
  const auto ctx = text::tokenize(context);
  if (ctx.empty()) return 0.0;
  double best = 0.0;
  for (const auto& o : outputs) {
    const auto out = text::tokenize(o);
    if (out.empty()) continue;
    best = std::max(best, static_cast<double>(overlap_count(out, ctx)) / static_cast<double>(out.size()));
  }
  return best;
}

double support_density(std::span<const std::string> outputs, std::string_view context) {
  const auto ctx = text::tokenize(context);
  if (ctx.empty()) return 0.0;
  double best = 0.0;
  for (const auto& o : outputs)
    best = std::max(best, static_cast<double>(overlap_count(text::tokenize(o), ctx)) /
                              static_cast<double>(ctx.size()));
  return best;
}

std::string_view to_string(RecallMode m) {
  return m == RecallMode::kAnswerString ? "answer_string" : "provenance";
}

RecallMode parse_recall_mode(std::string_view s) {
  if (s == "answer_string") return RecallMode::kAnswerString;
  if (s == "provenance") return RecallMode::kProvenance;
  throw ConfigError("unknown recall mode '" + std::string(s) +
                    "' (expected one of: answer_string provenance)");
}

bool passage_hit(const Example& example, const Passage& passage, RecallMode mode) {
  if (mode == RecallMode::kAnswerString) return str_inc(passage.text, example.outputs).value == 1.0;
  if (!example.provenance)
    throw DataError("example '" + example.id + "' has no provenance for provenance recall");
  if (!passage.provenance)
    throw DataError("example '" + example.id + "' passage " + std::to_string(passage.rank) +
                    " has no provenance for provenance recall");
  const auto& ids = *example.provenance;
  return std::find(ids.begin(), ids.end(), *passage.provenance) != ids.end();
}

bool has_positive_top1(const Instance& instance) {
  if (instance.passages.empty()) return false;
  const auto& ex = instance.example;
  const auto& top = instance.passages.front();
  const bool provenance_known = ex.provenance && top.provenance;
  if (ex.task == TaskKind::kExtractiveQa || !provenance_known)
    return passage_hit(ex, top, RecallMode::kAnswerString);
  return passage_hit(ex, top, RecallMode::kProvenance);
}

namespace {
std::string joined_top_k(const Instance& inst, int k) {
  std::string joined;
  for (const auto& p : inst.passages) {
    if (p.rank > k) continue;
    if (!joined.empty()) joined += '\n';
    joined += p.text;
  }
  return joined;
}
}  // namespace

RetrievalStats::RetrievalStats(int max_k, RecallMode mode)
    : max_k_(max_k), mode_(mode), hits_(static_cast<std::size_t>(std::max(max_k, 0)), 0),
      precision_(hits_.size()) {
  if (max_k < 1) throw ConfigError("k must be >= 1");
}

void RetrievalStats::add(const Instance& inst) {
  ++count_;
  // first rank (1-based) at which a passage hits
  int first_hit = 0;
  for (const auto& p : inst.passages) {
    if (p.rank > max_k_) continue;
    if (passage_hit(inst.example, p, mode_) && (first_hit == 0 || p.rank < first_hit))
      first_hit = p.rank;
  }
  if (first_hit == 0) return;
  for (int k = first_hit; k <= max_k_; ++k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    ++hits_[idx];
    const auto joined = joined_top_k(inst, k);
    precision_[idx].precision += context_precision(inst.example.outputs, joined);
    precision_[idx].density += support_density(inst.example.outputs, joined);
    ++precision_[idx].support;
  }
}

double RetrievalStats::recall(int k) const {
  if (count_ == 0) throw DataError("retrieval recall is undefined on an empty dataset");
  if (k < 1 || k > max_k_) throw ConfigError("k out of range for these retrieval stats");
  return 100.0 * static_cast<double>(hits_[static_cast<std::size_t>(k - 1)]) /
         static_cast<double>(count_);
}

RetrievalPrecision RetrievalStats::precision(int k) const {
  if (count_ == 0) throw DataError("retrieval precision is undefined on an empty dataset");
  if (k < 1 || k > max_k_) throw ConfigError("k out of range for these retrieval stats");
  auto p = precision_[static_cast<std::size_t>(k - 1)];
  if (p.support) {
    p.precision = 100.0 * p.precision / static_cast<double>(p.support);
    p.density = 100.0 * p.density / static_cast<double>(p.support);
  }
  return p;
}

double retrieval_recall(std::span<const Instance> dataset, int k, RecallMode mode) {
  if (dataset.empty()) throw DataError("retrieval recall is undefined on an empty dataset");
  RetrievalStats stats(k, mode);
  for (const auto& inst : dataset) stats.add(inst);
  return stats.recall(k);
}

RetrievalPrecision retrieval_precision(std::span<const Instance> dataset, int k, RecallMode mode) {
  RetrievalStats stats(k, mode);
  for (const auto& inst : dataset) stats.add(inst);
  if (dataset.empty()) return {};
  return stats.precision(k);
}

const LengthRow* LengthReport::find(ContextMode mode) const {
  for (const auto& r : rows)
    if (r.mode == mode) return &r;
  return nullptr;
}

LengthReport length_report(std::span<const SilverRecord> records) {
  struct Acc {
    std::size_t n = 0;
    double input = 0.0, context = 0.0;
  };
  std::map<ContextMode, Acc> acc;
  for (const auto& r : records) {
    if (r.role == RecordRole::kCtxTrain) continue;
    auto& a = acc[r.meta.mode];
    ++a.n;
    a.input += static_cast<double>(r.meta.input_tokens);
    a.context += static_cast<double>(r.meta.context_tokens);
  }
  LengthReport report;
  for (const auto mode : {ContextMode::kFull, ContextMode::kPsg, ContextMode::kFilco}) {
    auto it = acc.find(mode);
    if (it == acc.end()) continue;
    LengthRow row;
    row.mode = mode;
    row.count = it->second.n;
    row.mean_input_tokens = it->second.input / static_cast<double>(row.count);
    row.mean_context_tokens = it->second.context / static_cast<double>(row.count);
    report.rows.push_back(row);
  }
  if (const auto* full = report.find(ContextMode::kFull)) {
    const double fi = full->mean_input_tokens, fc = full->mean_context_tokens;
    for (auto& row : report.rows) {
      if (fi > 0) row.input_reduction = 100.0 * (1.0 - row.mean_input_tokens / fi);
      if (fc > 0) row.context_reduction = 100.0 * (1.0 - row.mean_context_tokens / fc);
    }
  }
  return report;
}

Predictions read_predictions(std::istream& in) {
  Predictions out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    const Json doc = Json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw DataError("malformed JSON", line_no);
    if (!doc.contains("id") || !doc["id"].is_string())
      throw DataError("missing string field \"id\"", line_no);
    if (!doc.contains("prediction") || !doc["prediction"].is_string())
      throw DataError("missing string field \"prediction\"", line_no);
    const auto id = doc["id"].get<std::string>();
    if (!out.emplace(id, doc["prediction"].get<std::string>()).second)
      throw DataError("duplicate prediction id '" + id + "'", line_no);
  }
  return out;
}

void EvalAccumulator::add(const Instance& inst, std::string_view prediction) {
  const double v = metric_ == Metric::kF1 ? f1_metric(prediction, inst.example.outputs)
                                          : exact_match(prediction, inst.example.outputs);
  scores_.emplace_back(inst.example.id, v);
  total_ += v;
  if (split_) {
    auto& side = has_positive_top1(inst) ? pos_ : neg_;
    side.mean += v;
    ++side.support;
  }
}

EvalSummary EvalAccumulator::finish() const {
  if (scores_.empty()) throw DataError("cannot evaluate an empty dataset");
  EvalSummary s;
  s.metric = metric_;
  s.per_example = scores_;
  s.support = scores_.size();
  s.mean = 100.0 * total_ / static_cast<double>(s.support);
  if (split_) {
    auto finish_side = [](SplitMean side) {
      if (side.support) side.mean = 100.0 * side.mean / static_cast<double>(side.support);
      return side;
    };
    s.positive = finish_side(pos_);
    s.negative = finish_side(neg_);
  }
  return s;
}

EvalSummary evaluate(const Predictions& predictions, std::span<const Instance> dataset,
                     Metric metric, bool split_by_positive) {
  if (dataset.empty()) throw DataError("cannot evaluate an empty dataset");
  std::vector<std::string> missing;
  for (const auto& inst : dataset)
    if (!predictions.count(inst.example.id)) missing.push_back(inst.example.id);
  if (!missing.empty()) {
    std::string msg = std::to_string(missing.size()) + " example(s) have no prediction:";
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) msg += " " + missing[i];
    if (missing.size() > 20) msg += " ...";
    throw DataError(msg);
  }
  EvalAccumulator acc(metric, split_by_positive);
  for (const auto& inst : dataset) acc.add(inst, predictions.at(inst.example.id));
  return acc.finish();
}

Json to_json(const EvalSummary& s) {
  Json doc;
  doc["metric"] = to_string(s.metric);
  doc["mean"] = s.mean;
  doc["support"] = s.support;
  if (s.positive) doc["positive"] = Json{{"mean", s.positive->mean}, {"support", s.positive->support}};
  if (s.negative) doc["negative"] = Json{{"mean", s.negative->mean}, {"support", s.negative->support}};
  Json per = Json::array();
  for (const auto& [id, v] : s.per_example) per.push_back(Json{{"id", id}, {"score", v}});
  doc["per_example"] = std::move(per);
  return doc;
}

Json to_json(const LengthReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row;
    row["mode"] = to_string(r.mode);
    row["count"] = r.count;
    row["mean_input_tokens"] = r.mean_input_tokens;
    row["mean_context_tokens"] = r.mean_context_tokens;
    row["input_reduction_pct"] = r.input_reduction ? Json(*r.input_reduction) : Json(nullptr);
    row["context_reduction_pct"] = r.context_reduction ? Json(*r.context_reduction) : Json(nullptr);
    rows.push_back(std::move(row));
  }
  return Json{{"token_unit", "whitespace/punctuation tokens"}, {"rows", std::move(rows)}};
}

}  // namespace filco
