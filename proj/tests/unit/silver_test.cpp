#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "filco/dataset_io.hpp"
#include "filco/measures.hpp"
#include "filco/selection.hpp"
#include "filco/silver.hpp"
#include "filco/text.hpp"

using namespace filco;

namespace {

const std::string kDir = FILCO_TEST_DATA;

std::vector<Instance> fixture() {
  std::ifstream in(kDir + "/data/golden_fixture.jsonl");
  return read_examples(in);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

FilterConfig golden_config() {
  FilterConfig cfg;
  cfg.measure = Measure::kLexical;
  cfg.threshold = 0.3;
  cfg.top_k = 2;
  cfg.fallback = Fallback::kTopSentence;
  return cfg;
}

// Records for the golden fixture: ctx_train, gen_train and gen_infer
// lines, one block per role.
std::vector<std::string> golden_lines(const std::string& role) {
  std::vector<std::string> lines;
  for (const auto& inst : fixture()) {
    const auto cfg = golden_config();
    const auto sel = select_silver(inst.example, inst.passages, cfg);
    const auto ctx = assemble_context(ContextMode::kFilco, inst.passages, &sel, cfg.top_k);
    if (role == "ctx_train")
      lines.push_back(serialize_record(build_ctx_record(inst.example, inst.passages, sel, cfg.top_k)));
    else
      lines.push_back(serialize_record(
          build_gen_record(inst.example, ctx, role == "gen_train", cfg.measure)));
  }
  return lines;
}

void check_golden(const std::string& role) {
  std::string produced;
  for (const auto& l : golden_lines(role)) produced += l + "\n";
  const std::string path = kDir + "/golden/" + role + ".jsonl";
  if (std::getenv("FILCO_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << produced;
  }
  EXPECT_EQ(produced, slurp(path)) << path;
}

}  // namespace

TEST(Golden, CtxTrainRecords) { check_golden("ctx_train"); }
TEST(Golden, GenTrainRecords) { check_golden("gen_train"); }
TEST(Golden, GenInferRecords) { check_golden("gen_infer"); }

TEST(BuildCtxRecord, TargetIsSelectedSentence) {
  Example ex{"e", "When?", {"1997"}, TaskKind::kExtractiveQa};
  Passage p;
  p.title = "Museum";
  p.text = "It is big. It opened in 1997.";
  const std::vector<Passage> ps{p};
  FilterConfig cfg;
  const auto sel = select_silver(ex, ps, cfg);
  const auto rec = build_ctx_record(ex, ps, sel, 1);
  EXPECT_EQ(rec.target, "It opened in 1997.");
  EXPECT_EQ(rec.input, "question: When?\ncontext: Museum: It is big. It opened in 1997.\nfiltered:");
  EXPECT_EQ(rec.role, RecordRole::kCtxTrain);
  EXPECT_EQ(rec.meta.input_tokens, text::token_count(rec.input));

  const auto none = build_ctx_record(ex, ps, Selection{}, 1);
  EXPECT_EQ(none.target, "");
  EXPECT_EQ(none.meta.context_tokens, 0u);
}

TEST(BuildCtxRecord, OnlyTopKPassagesInPrompt) {
  Example ex{"e", "q", {"x"}, TaskKind::kExtractiveQa};
  Passage a, b;
  a.text = "First.";
  b.rank = 2;
  b.text = "Second.";
  const std::vector<Passage> ps{a, b};
  EXPECT_EQ(build_ctx_record(ex, ps, Selection{}, 1).input, "question: q\ncontext: First.\nfiltered:");
  EXPECT_EQ(build_ctx_record(ex, ps, Selection{}, 2).input,
            "question: q\ncontext: First.\ncontext: Second.\nfiltered:");
}

TEST(BuildGenRecord, EmptyContextAndRoles) {
  Example ex{"e", "Is it?", {"SUPPORTS"}, TaskKind::kFactVerification};
  ContextAssembly ctx;
  const auto rec = build_gen_record(ex, ctx, true);
  EXPECT_EQ(rec.input, "context: \nclaim: Is it?\njudgment:");
  EXPECT_EQ(rec.target, "SUPPORTS");
  EXPECT_EQ(rec.role, RecordRole::kGenTrain);
  EXPECT_FALSE(rec.meta.measure.has_value());
  const auto infer = build_gen_record(ex, ctx, false);
  EXPECT_EQ(infer.target, "");
  EXPECT_EQ(infer.role, RecordRole::kGenInfer);

  Example qa{"q", "Who?", {"Ann", "Anne"}, TaskKind::kExtractiveQa};
  EXPECT_EQ(build_gen_record(qa, ctx, true).input, "context: \nquestion: Who?\nanswer:");
  EXPECT_EQ(build_gen_record(qa, ctx, true).target, "Ann");
  Example dialog{"d", "Hi!", {"Hello."}, TaskKind::kDialog};
  EXPECT_EQ(build_gen_record(dialog, ctx, true).input, "context: \ndialog history: Hi!\nanswer:");
}

// CXMI scores exactly the prompts that generator records use.
TEST(BuildGenRecord, CxmiPromptsMatchGeneratorInput) {
  struct Recorder : SequenceScorer {
    mutable std::vector<std::string> prefixes;
    double score(std::string_view prefix, std::string_view) const override {
      prefixes.emplace_back(prefix);
      return 0.0;
    }
  } rec;
  for (auto task : {TaskKind::kExtractiveQa, TaskKind::kDialog, TaskKind::kFactVerification}) {
    rec.prefixes.clear();
    Example ex{"e", "the {context} query", {"o"}, task};
    const Span span{1, 0, "span {query} text", 0, 17};
    (void)log_cxmi(rec, span, ex.query, "o", task);
    ContextAssembly with;
    with.text = span.text;
    ASSERT_EQ(rec.prefixes.size(), 2u);
    EXPECT_EQ(rec.prefixes[0], build_gen_record(ex, with, true).input);
    EXPECT_EQ(rec.prefixes[1], build_gen_record(ex, ContextAssembly{}, true).input);
  }
}

TEST(Prompt, SinglePassSubstitution) {
  EXPECT_EQ(substitute("{a}-{b}-{c}", {{"a", "{b}"}, {"b", "2"}}), "{b}-2-{c}");
  EXPECT_EQ(substitute("{", {{"a", "1"}}), "{");
  PromptTemplates t;
  t.gen = "Q={query} C={context}";
  EXPECT_EQ(render_gen(TaskKind::kDialog, "x", "y", t), "Q=y C=x");
}
