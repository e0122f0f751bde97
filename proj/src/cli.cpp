#include "filco/cli.hpp"

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "filco/dataset_io.hpp"
#include "filco/evaluation.hpp"
#include "filco/manifest.hpp"
#include "filco/ngram.hpp"
#include "filco/pipeline.hpp"
#include "filco/remote_scorer.hpp"
#include "filco/silver.hpp"
#include "filco/text.hpp"

namespace filco::cli {
namespace fs = std::filesystem;

namespace {

// Usage-level problem detected after flag parsing (exit 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string output;
  int k = 1;
  std::string measure = "str_inc";
  double threshold = 0.0;
  bool threshold_set = false;
  std::string fallback = "empty";
  std::string mode = "filco";
  int max_spans = 1;
  std::string scorer;
  std::string scorer_url;
  int ngram_order = 3;
  double ngram_alpha = 0.1;
  std::string ngram_corpus;
  std::size_t scorer_batch = 16;
  int scorer_in_flight = 8;
  std::string gen_template;
  std::string format = "table";
  int jobs = 1;

  // eval / stats / silver / compare
  std::string predictions;
  std::string metric;
  bool split = false;
  std::string recall_mode = "answer_string";
  std::vector<std::string> records;
  bool infer = false;
  std::string filtered;
  double lexical_threshold = 0.5;
  double cxmi_threshold = 1.0;
};

std::string unescape(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      const char c = s[i + 1];
      if (c == 'n') { out += '\n'; ++i; continue; }
      if (c == 't') { out += '\t'; ++i; continue; }
      if (c == '\\') { out += '\\'; ++i; continue; }
    }
    out += s[i];
  }
  return out;
}

PromptTemplates templates_from(const Options& o) {
  PromptTemplates t;
  if (!o.gen_template.empty()) t.gen = unescape(o.gen_template);
  return t;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input '" + path + "'");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot create output '" + path.string() + "'");
  return out;
}

void prepare_output_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw DataError("cannot create output directory '" + dir + "'");
}

void finish_output(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

// Texts used to train the n-gram stand-in scorer when no corpus file is
// given: every query, output and passage sentence of the input.
std::vector<std::string> corpus_from_dataset(const std::string& path) {
  auto in = open_input(path);
  InstanceReader reader(in);
  std::vector<std::string> corpus;
  while (auto inst = reader.next()) {
    corpus.push_back(inst->example.query);
    for (const auto& o : inst->example.outputs) corpus.push_back(o);
    for (const auto& p : inst->passages)
      for (const auto& s : sentence_spans(p)) corpus.push_back(s.text);
  }
  return corpus;
}

std::unique_ptr<SequenceScorer> make_scorer(const Options& o) {
  if (o.scorer.empty()) return nullptr;
  if (o.scorer == "ngram") {
    std::vector<std::string> corpus;
    if (!o.ngram_corpus.empty()) {
      auto in = open_input(o.ngram_corpus);
      for (std::string line; std::getline(in, line);)
        if (!text::tokenize(line).empty()) corpus.push_back(line);
    } else {
      corpus = corpus_from_dataset(o.input);
    }
    if (corpus.empty()) throw DataError("n-gram scorer corpus is empty");
    return std::make_unique<NGramModel>(NGramModel::train(corpus, o.ngram_order, o.ngram_alpha));
  }
  RemoteScorerOptions ro;
  ro.url = o.scorer_url;
  if (ro.url.empty()) {
    if (const char* env = std::getenv(std::string(kScorerUrlEnv).c_str())) ro.url = env;
  }
  if (ro.url.empty())
    throw UsageError("--scorer remote requires --scorer-url or " + std::string(kScorerUrlEnv));
  ro.batch_size = o.scorer_batch;
  ro.max_in_flight = o.scorer_in_flight;
  try {
    return std::make_unique<RemoteScorer>(ro);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

FilterConfig filter_config(const Options& o, Measure measure, double threshold) {
  FilterConfig cfg;
  cfg.measure = measure;
  cfg.threshold = threshold;
  cfg.granularity = granularity_for(parse_context_mode(o.mode));
  cfg.top_k = o.k;
  cfg.fallback = parse_fallback(o.fallback);
  cfg.max_spans = o.max_spans;
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

PipelineOptions pipeline_options(const Options& o, const SequenceScorer* scorer) {
  const auto measure = parse_measure(o.measure);
  const auto mode = parse_context_mode(o.mode);
  if (measure == Measure::kCxmi && mode != ContextMode::kFull && o.scorer.empty())
    throw UsageError("--measure cxmi requires --scorer {ngram,remote}");
  PipelineOptions p;
  p.config = filter_config(o, measure, o.threshold_set ? o.threshold : default_threshold(measure));
  p.mode = mode;
  p.scorer = scorer;
  p.templates = templates_from(o);
  return p;
}

Json config_snapshot(const Options& o) {
  Json c;
  c["k"] = o.k;
  c["measure"] = o.measure;
  c["threshold"] = o.threshold_set ? Json(o.threshold) : Json(default_threshold(parse_measure(o.measure)));
  c["fallback"] = o.fallback;
  c["mode"] = o.mode;
  c["max_spans"] = o.max_spans;
  c["scorer"] = o.scorer.empty() ? Json(nullptr) : Json(o.scorer);
  if (o.scorer == "ngram") {
    c["ngram_order"] = o.ngram_order;
    c["ngram_alpha"] = o.ngram_alpha;
    c["ngram_corpus"] = o.ngram_corpus.empty() ? Json(nullptr) : Json(o.ngram_corpus);
  }
  if (o.scorer == "remote") c["scorer_url"] = o.scorer_url;
  c["gen_template"] = o.gen_template.empty() ? Json(nullptr) : Json(o.gen_template);
  return c;
}

RunManifest start_manifest(const std::string& command, const Options& o, Json config) {
  RunManifest m;
  m.command = command;
  m.config = std::move(config);
  m.input_path = o.input;
  m.input_fingerprint = "sha256:" + sha256_file(o.input);
  m.started_at = utc_timestamp();
  return m;
}

// Streams instances from o.input through `work`, in order, on o.jobs threads.
template <typename Out>
void stream_instances(const Options& o, const std::function<Out(const Instance&)>& work,
                      const std::function<void(Out&&)>& emit) {
  auto in = open_input(o.input);
  InstanceReader reader(in);
  using Item = std::pair<std::size_t, Instance>;
  std::function<std::optional<Item>()> next = [&]() -> std::optional<Item> {
    auto inst = reader.next();
    if (!inst) return std::nullopt;
    return Item{reader.line(), std::move(*inst)};
  };
  std::function<Out(const Item&)> run = [&](const Item& item) -> Out {
    try {
      return work(item.second);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw DataError("example '" + item.second.example.id + "': " + e.what(), item.first);
    }
  };
  ordered_parallel_map<Item, Out>(next, run, emit, o.jobs);
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], r[c].size());
    }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) line += "  ";
      line += r[c];
      if (c + 1 < r.size()) line += std::string(width[c] - r[c].size(), ' ');
    }
    out << line << '\n';
  }
}

// ---------------------------------------------------------------- filter

int cmd_filter(const Options& o, std::ostream& out) {
  const auto scorer = make_scorer(o);
  const auto opts = pipeline_options(o, scorer.get());
  prepare_output_dir(o.output);
  auto manifest = start_manifest("filter", o, config_snapshot(o));

  const std::string name = "selections.jsonl";
  const fs::path path = fs::path(o.output) / name;
  auto sink = open_output(path);
  std::size_t count = 0, fallbacks = 0;
  stream_instances<std::pair<std::string, bool>>(
      o,
      [&](const Instance& inst) {
        const auto processed = process_instance(inst, opts);
        return std::pair{selection_record(inst, processed, opts).dump(),
                         processed.selection.fallback_applied};
      },
      [&](std::pair<std::string, bool>&& line) {
        sink << line.first << '\n';
        ++count;
        fallbacks += line.second ? 1 : 0;
      });
  finish_output(sink, path);
  write_manifest(o.output, manifest, {name});
  out << "filtered " << count << " examples";
  if (opts.mode == ContextMode::kFilco) out << " (" << fallbacks << " without a passing span)";
  out << " -> " << path.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- silver

int cmd_silver(const Options& o, std::ostream& out) {
  const auto scorer = make_scorer(o);
  auto opts = pipeline_options(o, scorer.get());
  opts.want_selection = true;
  Predictions filtered;
  if (!o.filtered.empty()) {
    auto in = open_input(o.filtered);
    filtered = read_predictions(in);
  }
  prepare_output_dir(o.output);
  auto config = config_snapshot(o);
  config["infer"] = o.infer;
  config["filtered"] = o.filtered.empty() ? Json(nullptr) : Json(o.filtered);
  auto manifest = start_manifest("silver", o, config);

  const std::string ctx_name = "ctx_train.jsonl";
  const std::string gen_name = o.infer ? "gen_infer.jsonl" : "gen_train.jsonl";
  const fs::path ctx_path = fs::path(o.output) / ctx_name;
  const fs::path gen_path = fs::path(o.output) / gen_name;
  auto ctx_sink = open_output(ctx_path);
  auto gen_sink = open_output(gen_path);
  std::size_t count = 0;
  using Lines = std::pair<std::string, std::string>;
  stream_instances<Lines>(
      o,
      [&](const Instance& inst) {
        const auto processed = process_instance(inst, opts);
        const auto ctx = build_ctx_record(inst.example, inst.passages, processed.selection,
                                          opts.config.top_k, opts.templates);
        SilverRecord gen;
        if (!o.filtered.empty()) {
          auto it = filtered.find(inst.example.id);
          if (it == filtered.end())
            throw DataError("no filtered context for example '" + inst.example.id + "'");
          ContextAssembly predicted;
          predicted.mode = ContextMode::kFilco;
          predicted.text = it->second;
          predicted.token_count = text::token_count(predicted.text);
          gen = build_gen_record(inst.example, predicted, !o.infer, std::nullopt, opts.templates);
        } else {
          std::optional<Measure> measure;
          if (opts.mode != ContextMode::kFull) measure = opts.config.measure;
          gen = build_gen_record(inst.example, processed.context, !o.infer, measure,
                                 opts.templates);
        }
        return Lines{serialize_record(ctx), serialize_record(gen)};
      },
      [&](Lines&& lines) {
        ctx_sink << lines.first << '\n';
        gen_sink << lines.second << '\n';
        ++count;
      });
  finish_output(ctx_sink, ctx_path);
  finish_output(gen_sink, gen_path);
  write_manifest(o.output, manifest, {ctx_name, gen_name});
  out << "wrote " << count << " records each to " << ctx_path.string() << " and "
      << gen_path.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- eval

int cmd_eval(const Options& o, std::ostream& out) {
  Predictions preds;
  {
    auto in = open_input(o.predictions);
    preds = read_predictions(in);
  }
  auto in = open_input(o.input);
  InstanceReader reader(in);
  std::optional<EvalAccumulator> acc;
  std::vector<std::string> missing;
  while (auto inst = reader.next()) {
    if (!acc) {
      const auto metric = o.metric.empty() ? default_metric(inst->example.task) : parse_metric(o.metric);
      acc.emplace(metric, o.split);
    }
    auto it = preds.find(inst->example.id);
    if (it == preds.end()) {
      missing.push_back(inst->example.id);
      continue;
    }
    acc->add(*inst, it->second);
  }
  if (!acc) throw DataError("cannot evaluate an empty dataset");
  if (!missing.empty()) {
    std::string msg = std::to_string(missing.size()) + " example(s) have no prediction:";
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) msg += " " + missing[i];
    if (missing.size() > 20) msg += " ...";
    throw DataError(msg);
  }
  const auto summary = acc->finish();
  if (o.format == "json") {
    out << to_json(summary).dump(2) << '\n';
    return kExitOk;
  }
  std::vector<std::vector<std::string>> rows{{"subset", "metric", "support", "score"}};
  const std::string metric(to_string(summary.metric));
  rows.push_back({"all", metric, std::to_string(summary.support), fixed(summary.mean)});
  if (summary.positive)
    rows.push_back({"positive", metric, std::to_string(summary.positive->support),
                    fixed(summary.positive->mean)});
  if (summary.negative)
    rows.push_back({"negative", metric, std::to_string(summary.negative->support),
                    fixed(summary.negative->mean)});
  print_table(out, rows);
  return kExitOk;
}

// ---------------------------------------------------------------- stats

int cmd_stats(const Options& o, std::ostream& out) {
  if (o.input.empty() && o.records.empty())
    throw UsageError("stats needs --input and/or --records");
  Json doc = Json::object();
  std::vector<std::vector<std::string>> retrieval_rows;
  std::vector<std::vector<std::string>> length_rows;

  if (!o.input.empty()) {
    const auto mode = parse_recall_mode(o.recall_mode);
    RetrievalStats stats(o.k, mode);
    auto in = open_input(o.input);
    InstanceReader reader(in);
    while (auto inst = reader.next()) {
      try {
        stats.add(*inst);
      } catch (const DataError& e) {
        throw DataError(e.what(), reader.line());
      }
    }
    Json rows = Json::array();
    retrieval_rows.push_back({"k", "recall", "precision", "density", "positives"});
    std::vector<int> ks{1};
    if (o.k > 1) ks.push_back(o.k);
    for (int k : ks) {
      const auto p = stats.precision(k);
      const double r = stats.recall(k);
      rows.push_back(Json{{"k", k},
                          {"recall", r},
                          {"precision", p.precision},
                          {"density", p.density},
                          {"positives", p.support}});
      retrieval_rows.push_back({std::to_string(k), fixed(r), fixed(p.precision), fixed(p.density),
                                std::to_string(p.support)});
    }
    doc["retrieval"] = Json{{"mode", to_string(mode)}, {"examples", stats.count()}, {"rows", rows}};
  }

  if (!o.records.empty()) {
    std::vector<SilverRecord> all;
    for (const auto& path : o.records) {
      auto in = open_input(path);
      auto recs = read_records(in);
      all.insert(all.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    }
    const auto report = length_report(all);
    doc["length"] = to_json(report);
    length_rows.push_back(
        {"mode", "records", "input_tokens", "context_tokens", "input_red%", "context_red%"});
    for (const auto& r : report.rows)
      length_rows.push_back({std::string(to_string(r.mode)), std::to_string(r.count),
                             fixed(r.mean_input_tokens), fixed(r.mean_context_tokens),
                             r.input_reduction ? fixed(*r.input_reduction) : "-",
                             r.context_reduction ? fixed(*r.context_reduction) : "-"});
  }

  if (o.format == "json") {
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  if (!retrieval_rows.empty()) {
    out << "retrieval (" << o.recall_mode << ")\n";
    print_table(out, retrieval_rows);
  }
  if (!length_rows.empty()) {
    if (!retrieval_rows.empty()) out << '\n';
    out << "input length (tokens)\n";
    print_table(out, length_rows);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- compare

int cmd_compare(const Options& o, std::ostream& out) {
  if (o.scorer.empty()) throw UsageError("compare runs cxmi and requires --scorer {ngram,remote}");
  const auto scorer = make_scorer(o);
  constexpr std::array<Measure, 3> kAll{Measure::kStrInc, Measure::kLexical, Measure::kCxmi};
  std::array<PipelineOptions, 3> opts;
  for (std::size_t m = 0; m < kAll.size(); ++m) {
    opts[m].mode = ContextMode::kFilco;
    opts[m].scorer = scorer.get();
    opts[m].templates = templates_from(o);
    double thr = default_threshold(kAll[m]);
    if (kAll[m] == Measure::kLexical) thr = o.lexical_threshold;
    if (kAll[m] == Measure::kCxmi) thr = o.cxmi_threshold;
    Options filco_opts = o;
    filco_opts.mode = "filco";
    opts[m].config = filter_config(filco_opts, kAll[m], thr);
  }

  prepare_output_dir(o.output);
  Json config = config_snapshot(o);
  config.erase("measure");
  config.erase("threshold");
  config.erase("mode");
  config["lexical_threshold"] = o.lexical_threshold;
  config["cxmi_threshold"] = o.cxmi_threshold;
  auto manifest = start_manifest("compare", o, config);

  struct Sinks {
    std::string ctx_name, gen_name;
    std::ofstream ctx, gen;
  };
  std::array<Sinks, 3> sinks;
  std::vector<std::string> files;
  for (std::size_t m = 0; m < kAll.size(); ++m) {
    const std::string base(to_string(kAll[m]));
    sinks[m].ctx_name = base + ".ctx_train.jsonl";
    sinks[m].gen_name = base + ".gen_train.jsonl";
    sinks[m].ctx = open_output(fs::path(o.output) / sinks[m].ctx_name);
    sinks[m].gen = open_output(fs::path(o.output) / sinks[m].gen_name);
    files.push_back(sinks[m].ctx_name);
    files.push_back(sinks[m].gen_name);
  }

  struct Row {
    std::size_t selected = 0;
    double context_tokens = 0, precision = 0, density = 0;
  };
  std::array<Row, 4> rows{};  // three measures, then the full baseline
  std::size_t count = 0;

  struct PerExample {
    std::array<std::string, 3> ctx, gen;
    std::array<bool, 3> selected{};
    std::array<std::size_t, 4> tokens{};
    std::array<double, 4> precision{}, density{};
  };
  stream_instances<PerExample>(
      o,
      [&](const Instance& inst) {
        PerExample r;
        const auto& ex = inst.example;
        for (std::size_t m = 0; m < kAll.size(); ++m) {
          const auto p = process_instance(inst, opts[m]);
          r.ctx[m] = serialize_record(
              build_ctx_record(ex, inst.passages, p.selection, o.k, opts[m].templates));
          r.gen[m] = serialize_record(
              build_gen_record(ex, p.context, true, kAll[m], opts[m].templates));
          r.selected[m] = !p.selection.fallback_applied;
          r.tokens[m] = p.context.token_count;
          r.precision[m] = context_precision(ex.outputs, p.context.text);
          r.density[m] = support_density(ex.outputs, p.context.text);
        }
        const auto full = assemble_context(ContextMode::kFull, inst.passages, nullptr, o.k);
        r.tokens[3] = full.token_count;
        r.precision[3] = context_precision(ex.outputs, full.text);
        r.density[3] = support_density(ex.outputs, full.text);
        r.selected[0] = r.selected[0];
        return r;
      },
      [&](PerExample&& r) {
        ++count;
        for (std::size_t m = 0; m < 4; ++m) {
          if (m < 3) {
            sinks[m].ctx << r.ctx[m] << '\n';
            sinks[m].gen << r.gen[m] << '\n';
            rows[m].selected += r.selected[m] ? 1 : 0;
          } else {
            ++rows[m].selected;
          }
          rows[m].context_tokens += static_cast<double>(r.tokens[m]);
          rows[m].precision += r.precision[m];
          rows[m].density += r.density[m];
        }
      });
  if (count == 0) throw DataError("nothing to compare: the input dataset is empty");
  for (std::size_t m = 0; m < kAll.size(); ++m) {
    finish_output(sinks[m].ctx, fs::path(o.output) / sinks[m].ctx_name);
    finish_output(sinks[m].gen, fs::path(o.output) / sinks[m].gen_name);
  }

  const double n = static_cast<double>(count);
  Json table = Json::array();
  std::vector<std::vector<std::string>> text_rows{
      {"context", "selection_rate", "context_tokens", "context_precision", "support_density"}};
  for (std::size_t m = 0; m < 4; ++m) {
    const std::string name = m < 3 ? std::string(to_string(kAll[m])) : "full";
    const double rate = 100.0 * static_cast<double>(rows[m].selected) / n;
    const double tokens = rows[m].context_tokens / n;
    const double precision = 100.0 * rows[m].precision / n;
    const double density = 100.0 * rows[m].density / n;
    table.push_back(Json{{"context", name},
                         {"selection_rate", rate},
                         {"mean_context_tokens", tokens},
                         {"context_precision", precision},
                         {"support_density", density}});
    text_rows.push_back({name, fixed(rate), fixed(tokens), fixed(precision), fixed(density)});
  }
  const Json report{{"examples", count}, {"k", o.k}, {"rows", table}};
  {
    const fs::path path = fs::path(o.output) / "compare.json";
    auto sink = open_output(path);
    sink << report.dump(2) << '\n';
    finish_output(sink, path);
    files.push_back("compare.json");
  }
  write_manifest(o.output, manifest, files);

  if (o.format == "json") {
    out << report.dump(2) << '\n';
  } else {
    out << count << " examples, top-" << o.k << " passages\n";
    print_table(out, text_rows);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- flags

const std::vector<std::string> kMeasureNames{"str_inc", "lexical", "cxmi"};
const std::vector<std::string> kFallbackNames{"empty", "top_sentence", "full_passage"};
const std::vector<std::string> kModeNames{"full", "psg", "filco"};
const std::vector<std::string> kScorerNames{"ngram", "remote"};
const std::vector<std::string> kFormatNames{"table", "json"};

void add_io(CLI::App* cmd, Options& o, bool need_output) {
  cmd->add_option("--input,-i", o.input, "Input dataset (JSONL)")->required();
  auto* out = cmd->add_option("--output,-o", o.output, "Output directory");
  if (need_output) out->required();
}

void add_scorer_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--scorer", o.scorer, "Sequence scorer backend for cxmi")
      ->check(CLI::IsMember(kScorerNames));
  cmd->add_option("--scorer-url", o.scorer_url,
                  "Remote scorer endpoint (default: $" + std::string(kScorerUrlEnv) + ")");
  cmd->add_option("--scorer-batch", o.scorer_batch, "Requests per HTTP call")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--scorer-in-flight", o.scorer_in_flight, "Concurrent HTTP calls")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--ngram-order", o.ngram_order, "n for the n-gram scorer")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--ngram-alpha", o.ngram_alpha, "Additive smoothing constant")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--ngram-corpus", o.ngram_corpus,
                  "Training text for the n-gram scorer, one sentence per line "
                  "(default: the input dataset)");
  cmd->add_option("--gen-template", o.gen_template,
                  "Generator prompt with {context} and {query} placeholders (\\n allowed)");
}

void add_selection_flags(CLI::App* cmd, Options& o, bool with_measure) {
  cmd->add_option("--k", o.k, "Number of top passages")->check(CLI::PositiveNumber);
  if (with_measure) {
    cmd->add_option("--measure", o.measure, "Span measure")->check(CLI::IsMember(kMeasureNames));
    cmd->add_option("--threshold", o.threshold, "Inclusion threshold (default 0.5 lexical, 1.0 cxmi)")
        ->each([&o](const std::string&) { o.threshold_set = true; });
    cmd->add_option("--mode", o.mode, "Context mode")->check(CLI::IsMember(kModeNames));
  }
  cmd->add_option("--fallback", o.fallback, "Policy when no span passes")
      ->check(CLI::IsMember(kFallbackNames));
  cmd->add_option("--max-spans", o.max_spans, "Spans kept per example")->check(CLI::PositiveNumber);
  cmd->add_option("--jobs,-j", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  add_scorer_flags(cmd, o);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"filco: sentence-level context filtering for retrieval-augmented generation"};
  app.name("filco");
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  auto* filter = app.add_subcommand("filter", "Select spans and assemble contexts");
  add_io(filter, o, true);
  add_selection_flags(filter, o, true);

  auto* silver = app.add_subcommand("silver", "Write filter and generator training records");
  add_io(silver, o, true);
  add_selection_flags(silver, o, true);
  silver->add_flag("--infer", o.infer, "Write gen_infer records (no target)");
  silver->add_option("--filtered", o.filtered,
                     "Predicted contexts ({\"id\",\"prediction\"} JSONL) for generator records");

  auto* eval = app.add_subcommand("eval", "Score predictions against a dataset");
  eval->add_option("--input,-i", o.input, "Dataset (JSONL)")->required();
  eval->add_option("--predictions,-p", o.predictions, "Predictions (JSONL)")->required();
  eval->add_option("--metric", o.metric, "em, f1 or accuracy (default: by task)")
      ->check(CLI::IsMember({"em", "f1", "accuracy"}));
  eval->add_flag("--split", o.split, "Report positive/negative top-1 subsets");
  eval->add_option("--format", o.format)->check(CLI::IsMember(kFormatNames));

  auto* stats = app.add_subcommand("stats", "Retrieval recall/precision and input-length report");
  stats->add_option("--input,-i", o.input, "Dataset (JSONL)");
  stats->add_option("--k", o.k, "Largest k for recall")->check(CLI::PositiveNumber);
  stats->add_option("--recall-mode", o.recall_mode)
      ->check(CLI::IsMember({"answer_string", "provenance"}));
  stats->add_option("--records", o.records, "Record files for the length report");
  stats->add_option("--format", o.format)->check(CLI::IsMember(kFormatNames));

  auto* compare = app.add_subcommand("compare", "Run all three measures side by side");
  add_io(compare, o, true);
  add_selection_flags(compare, o, false);
  compare->add_option("--lexical-threshold", o.lexical_threshold)->check(CLI::Range(0.0, 1.0));
  compare->add_option("--cxmi-threshold", o.cxmi_threshold)->check(CLI::PositiveNumber);
  compare->add_option("--format", o.format)->check(CLI::IsMember(kFormatNames));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(filter)) return cmd_filter(o, out);
    if (app.got_subcommand(silver)) return cmd_silver(o, out);
    if (app.got_subcommand(eval)) return cmd_eval(o, out);
    if (app.got_subcommand(stats)) return cmd_stats(o, out);
    if (app.got_subcommand(compare)) return cmd_compare(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace filco::cli
