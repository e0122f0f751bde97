#include "filco/dataset_io.hpp"

#include <algorithm>
#include <initializer_list>
#include <istream>
#include <ostream>

namespace filco {
namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  });
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

Json parse_object(std::string_view line, std::size_t line_no) {
  Json doc = Json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw DataError("malformed JSON", line_no);
  if (!doc.is_object()) throw DataError("record is not a JSON object", line_no);
  return doc;
}

const Json& require(const Json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing field \"") + key + "\"", line_no);
  return *it;
}

std::string require_string(const Json& obj, const char* key, std::size_t line_no) {
  const auto& v = require(obj, key, line_no);
  if (!v.is_string()) throw DataError(std::string("field \"") + key + "\" must be a string", line_no);
  return v.get<std::string>();
}

Json collect_extra(const Json& obj, std::initializer_list<std::string_view> known) {
  Json extra = Json::object();
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) extra[it.key()] = it.value();
  return extra;
}

void append_extra(Json& obj, const Json& extra) {
  for (auto it = extra.begin(); it != extra.end(); ++it)
    if (!obj.contains(it.key())) obj[it.key()] = it.value();
}

std::vector<std::string> string_list(const Json& v, const char* key, std::size_t line_no) {
  if (!v.is_array())
    throw DataError(std::string("field \"") + key + "\" must be a list of strings", line_no);
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string())
      throw DataError(std::string("field \"") + key + "\" must be a list of strings", line_no);
    out.push_back(item.get<std::string>());
  }
  return out;
}

Passage parse_passage(const Json& obj, std::size_t index, std::size_t line_no) {
  const std::string where = "passage " + std::to_string(index) + ": ";
  if (!obj.is_object()) throw DataError(where + "not an object", line_no);
  Passage p;
  const auto& rank = require(obj, "rank", line_no);
  if (!rank.is_number_integer()) throw DataError(where + "\"rank\" must be an integer", line_no);
  const auto r = rank.get<long long>();
  if (r < 1) throw DataError(where + "\"rank\" must be >= 1", line_no);
  p.rank = static_cast<int>(r);
  if (auto it = obj.find("title"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) throw DataError(where + "\"title\" must be a string", line_no);
    p.title = it->get<std::string>();
  }
  p.text = require_string(obj, "text", line_no);
  if (trim(p.text).empty()) throw DataError(where + "\"text\" is empty", line_no);
  if (auto it = obj.find("score"); it != obj.end() && !it->is_null()) {
    if (!it->is_number()) throw DataError(where + "\"score\" must be a number", line_no);
    p.score = it->get<double>();
  }
  if (auto it = obj.find("provenance"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) throw DataError(where + "\"provenance\" must be a string", line_no);
    p.provenance = it->get<std::string>();
  }
  p.extra = collect_extra(obj, {"rank", "title", "text", "score", "provenance"});
  return p;
}

}  // namespace

Instance parse_instance(std::string_view line, std::size_t line_no) {
  const Json doc = parse_object(line, line_no);
  Instance inst;
  auto& ex = inst.example;
  ex.id = require_string(doc, "id", line_no);
  ex.query = require_string(doc, "query", line_no);
  ex.outputs = string_list(require(doc, "outputs", line_no), "outputs", line_no);
  if (ex.outputs.empty()) throw DataError("\"outputs\" is empty", line_no);
  for (const auto& o : ex.outputs)
    if (trim(o).empty()) throw DataError("\"outputs\" contains an empty answer", line_no);
  try {
    ex.task = parse_task_kind(require_string(doc, "task", line_no));
  } catch (const ConfigError& e) {
    throw DataError(e.what(), line_no);
  }
  if (ex.task == TaskKind::kFactVerification) {
    for (const auto& o : ex.outputs)
      if (o != kSupports && o != kRefutes)
        throw DataError("fact_verification output must be SUPPORTS or REFUTES, got '" + o + "'",
                        line_no);
  }
  if (auto it = doc.find("provenance"); it != doc.end() && !it->is_null())
    ex.provenance = string_list(*it, "provenance", line_no);

  const auto& passages = require(doc, "passages", line_no);
  if (!passages.is_array()) throw DataError("\"passages\" must be a list", line_no);
  for (std::size_t i = 0; i < passages.size(); ++i)
    inst.passages.push_back(parse_passage(passages[i], i, line_no));
  std::stable_sort(inst.passages.begin(), inst.passages.end(),
                   [](const Passage& a, const Passage& b) { return a.rank < b.rank; });
  for (std::size_t i = 0; i < inst.passages.size(); ++i) {
    const int rank = inst.passages[i].rank;
    if (i > 0 && inst.passages[i - 1].rank == rank)
      throw DataError("duplicate passage rank " + std::to_string(rank), line_no);
    if (rank != static_cast<int>(i) + 1)
      throw DataError("passage ranks must be contiguous from 1 (missing rank " +
                          std::to_string(i + 1) + ")",
                      line_no);
  }
  ex.extra = collect_extra(doc, {"id", "query", "outputs", "task", "provenance", "passages"});
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  const auto& ex = inst.example;
  Json doc;
  doc["id"] = ex.id;
  doc["query"] = ex.query;
  doc["outputs"] = ex.outputs;
  doc["task"] = to_string(ex.task);
  if (ex.provenance) doc["provenance"] = *ex.provenance;
  Json passages = Json::array();
  for (const auto& p : inst.passages) {
    Json obj;
    obj["rank"] = p.rank;
    obj["title"] = p.title;
    obj["text"] = p.text;
    if (p.score) obj["score"] = *p.score;
    if (p.provenance) obj["provenance"] = *p.provenance;
    append_extra(obj, p.extra);
    passages.push_back(std::move(obj));
  }
  doc["passages"] = std::move(passages);
  append_extra(doc, ex.extra);
  return doc.dump();
}

SilverRecord parse_record(std::string_view line, std::size_t line_no) {
  const Json doc = parse_object(line, line_no);
  SilverRecord rec;
  rec.id = require_string(doc, "id", line_no);
  try {
    rec.role = parse_record_role(require_string(doc, "role", line_no));
  } catch (const ConfigError& e) {
    throw DataError(e.what(), line_no);
  }
  rec.input = require_string(doc, "input", line_no);
  rec.target = require_string(doc, "target", line_no);
  const auto& meta = require(doc, "meta", line_no);
  if (!meta.is_object()) throw DataError("\"meta\" must be an object", line_no);
  try {
    const auto measure = require_string(meta, "measure", line_no);
    if (measure != "none") rec.meta.measure = parse_measure(measure);
    rec.meta.mode = parse_context_mode(require_string(meta, "mode", line_no));
  } catch (const ConfigError& e) {
    throw DataError(e.what(), line_no);
  }
  for (const char* key : {"input_tokens", "context_tokens"}) {
    const auto& v = require(meta, key, line_no);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      throw DataError(std::string("meta \"") + key + "\" must be a non-negative integer", line_no);
    (std::string_view(key) == "input_tokens" ? rec.meta.input_tokens : rec.meta.context_tokens) =
        v.get<std::size_t>();
  }
  rec.meta.extra = collect_extra(meta, {"measure", "mode", "input_tokens", "context_tokens"});
  rec.extra = collect_extra(doc, {"id", "role", "input", "target", "meta"});
  return rec;
}

std::string serialize_record(const SilverRecord& rec) {
  Json meta;
  meta["measure"] = rec.meta.measure ? std::string(to_string(*rec.meta.measure)) : "none";
  meta["mode"] = to_string(rec.meta.mode);
  meta["input_tokens"] = rec.meta.input_tokens;
  meta["context_tokens"] = rec.meta.context_tokens;
  append_extra(meta, rec.meta.extra);
  Json doc;
  doc["id"] = rec.id;
  doc["role"] = to_string(rec.role);
  doc["input"] = rec.input;
  doc["target"] = rec.target;
  doc["meta"] = std::move(meta);
  append_extra(doc, rec.extra);
  return doc.dump();
}

std::optional<Instance> InstanceReader::next() {
  while (std::getline(in_, buffer_)) {
    ++line_;
    if (is_blank(buffer_)) continue;
    return parse_instance(buffer_, line_);
  }
  return std::nullopt;
}

std::vector<Instance> read_examples(std::istream& in) {
  InstanceReader reader(in);
  std::vector<Instance> out;
  while (auto inst = reader.next()) out.push_back(std::move(*inst));
  return out;
}

std::vector<SilverRecord> read_records(std::istream& in) {
  std::vector<SilverRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    out.push_back(parse_record(line, line_no));
  }
  return out;
}

namespace {
template <typename T, typename F>
void write_lines(std::span<const T> items, std::ostream& out, F serialize) {
  for (const auto& item : items) {
    out << serialize(item) << '\n';
    if (!out) throw std::ios_base::failure("write to output sink failed");
  }
  out.flush();
  if (!out) throw std::ios_base::failure("flush of output sink failed");
}
}  // namespace

void write_records(std::span<const SilverRecord> records, std::ostream& out) {
  write_lines(records, out, serialize_record);
}

void write_instances(std::span<const Instance> instances, std::ostream& out) {
  write_lines(instances, out, serialize_instance);
}

}  // namespace filco
