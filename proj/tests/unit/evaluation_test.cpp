#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "filco/dataset_io.hpp"
#include "filco/evaluation.hpp"
#include "support/synthetic.hpp"

using namespace filco;

namespace {

const std::string kDir = FILCO_TEST_DATA;

std::vector<Instance> load(const std::string& name) {
  std::ifstream in(kDir + "/data/" + name);
  return read_examples(in);
}

Instance tiny(const std::string& id, std::vector<std::string> outputs, std::string top_text,
              TaskKind task = TaskKind::kExtractiveQa) {
  Instance inst;
  inst.example = {id, "q", std::move(outputs), task};
  Passage p;
  p.text = std::move(top_text);
  inst.passages.push_back(p);
  return inst;
}

SilverRecord rec(ContextMode mode, std::size_t input, std::size_t context) {
  SilverRecord r;
  r.role = RecordRole::kGenTrain;
  r.meta.mode = mode;
  r.meta.input_tokens = input;
  r.meta.context_tokens = context;
  return r;
}

}  // namespace

TEST(ExactMatch, Normalized) {
  EXPECT_EQ(exact_match("The Beatles", std::vector<std::string>{"beatles"}), 1.0);
  EXPECT_EQ(exact_match("beetles", std::vector<std::string>{"beatles"}), 0.0);
  EXPECT_EQ(exact_match("b", std::vector<std::string>{"a", "b"}), 1.0);
  EXPECT_EQ(exact_match("refutes", std::vector<std::string>{"REFUTES"}), 1.0);
}

TEST(F1Metric, MaxOverAnswers) {
  EXPECT_EQ(f1_metric("Paris", std::vector<std::string>{"paris"}), 1.0);
  EXPECT_EQ(f1_metric("x", std::vector<std::string>{"y"}), 0.0);
  EXPECT_DOUBLE_EQ(f1_metric("x b c", std::vector<std::string>{"b c d"}), 2.0 / 3.0);
  // articles are stripped before counting
  EXPECT_EQ(f1_metric("the cat", std::vector<std::string>{"a cat", "dog"}), 1.0);
}

TEST(F1Metric, ExactMatchImpliesFullF1) {
  synth::Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    const std::vector<std::string> answers{synth::random_phrase(rng, 1, 3),
                                           synth::random_phrase(rng, 1, 3)};
    const auto pred = synth::uniform(rng, 0, 1) ? answers[1] : synth::random_phrase(rng, 1, 3);
    if (exact_match(pred, answers) == 1.0) EXPECT_EQ(f1_metric(pred, answers), 1.0);
  }
}

TEST(ContextPrecision, Examples) {
  EXPECT_EQ(context_precision(std::vector<std::string>{"x y"}, "x y z"), 1.0);
  EXPECT_EQ(context_precision(std::vector<std::string>{"x y"}, "x a"), 0.5);
  EXPECT_EQ(context_precision(std::vector<std::string>{"x y"}, ""), 0.0);
  EXPECT_EQ(context_precision(std::vector<std::string>{"q", "x y"}, "x a"), 0.5);
  EXPECT_DOUBLE_EQ(support_density(std::vector<std::string>{"x y"}, "x y z w"), 0.5);
  EXPECT_EQ(support_density(std::vector<std::string>{"x"}, ""), 0.0);
}

TEST(ContextPrecision, FullWhenContextContainsOutput) {
  synth::Rng rng(2);
  for (int i = 0; i < 300; ++i) {
    const auto out = synth::random_phrase(rng, 1, 4);
    const auto ctx = synth::random_phrase(rng, 0, 3) + " " + out + " " + synth::random_phrase(rng, 0, 3);
    EXPECT_EQ(context_precision(std::vector<std::string>{out}, ctx), 1.0);
  }
}

TEST(RetrievalRecall, HandBuiltFixture) {
  const auto data = load("recall_fixture.jsonl");
  ASSERT_EQ(data.size(), 10u);
  EXPECT_DOUBLE_EQ(retrieval_recall(data, 1, RecallMode::kAnswerString), 60.0);
  EXPECT_DOUBLE_EQ(retrieval_recall(data, 3, RecallMode::kAnswerString), 70.0);
  EXPECT_DOUBLE_EQ(retrieval_recall(data, 5, RecallMode::kAnswerString), 80.0);
  EXPECT_DOUBLE_EQ(retrieval_recall(data, 1, RecallMode::kProvenance), 60.0);
  EXPECT_DOUBLE_EQ(retrieval_recall(data, 5, RecallMode::kProvenance), 80.0);

  RetrievalStats stats(5, RecallMode::kAnswerString);
  for (const auto& inst : data) stats.add(inst);
  EXPECT_EQ(stats.count(), 10u);
  EXPECT_DOUBLE_EQ(stats.recall(1), 60.0);
  EXPECT_DOUBLE_EQ(stats.recall(5), 80.0);
  const auto p1 = stats.precision(1);
  EXPECT_EQ(p1.support, 6u);
  EXPECT_DOUBLE_EQ(p1.precision, 100.0);
  const auto direct = retrieval_precision(data, 1, RecallMode::kAnswerString);
  EXPECT_DOUBLE_EQ(direct.precision, p1.precision);
  EXPECT_DOUBLE_EQ(direct.density, p1.density);
}

TEST(RetrievalRecall, ErrorsAndMonotonicity) {
  EXPECT_THROW(retrieval_recall({}, 1, RecallMode::kAnswerString), DataError);
  const std::vector<Instance> bare{tiny("t", {"x"}, "x")};
  EXPECT_THROW(retrieval_recall(bare, 1, RecallMode::kProvenance), DataError);

  synth::Rng rng(41);
  for (int d = 0; d < 100; ++d) {
    std::vector<Instance> data;
    for (int i = 0, n = synth::uniform(rng, 1, 20); i < n; ++i)
      data.push_back(synth::random_selection_case(rng, i).instance);
    double prev = 0.0;
    for (int k = 1; k <= 5; ++k) {
      const double r = retrieval_recall(data, k, RecallMode::kAnswerString);
      EXPECT_GE(r, prev);
      prev = r;
    }
  }
}

TEST(LengthReport, Reductions) {
  const std::vector<SilverRecord> records{rec(ContextMode::kFull, 120, 100), rec(ContextMode::kFull, 80, 100),
                                          rec(ContextMode::kFilco, 60, 40), rec(ContextMode::kFilco, 40, 40)};
  const auto report = length_report(records);
  const auto* full = report.find(ContextMode::kFull);
  const auto* filco = report.find(ContextMode::kFilco);
  ASSERT_TRUE(full && filco);
  EXPECT_EQ(report.find(ContextMode::kPsg), nullptr);
  EXPECT_DOUBLE_EQ(full->mean_context_tokens, 100.0);
  EXPECT_DOUBLE_EQ(filco->mean_context_tokens, 40.0);
  EXPECT_DOUBLE_EQ(*filco->context_reduction, 60.0);
  EXPECT_DOUBLE_EQ(*filco->input_reduction, 50.0);
  EXPECT_DOUBLE_EQ(*full->context_reduction, 0.0);

  const auto only_filco = length_report(std::vector<SilverRecord>{rec(ContextMode::kFilco, 5, 2)});
  EXPECT_FALSE(only_filco.rows[0].context_reduction.has_value());
  // ctx_train records are filter inputs, not generator inputs
  SilverRecord ctx = rec(ContextMode::kFilco, 999, 999);
  ctx.role = RecordRole::kCtxTrain;
  EXPECT_TRUE(length_report(std::vector<SilverRecord>{ctx}).rows.empty());
}

TEST(Evaluate, MeansAndMissingIds) {
  std::vector<Instance> data{tiny("a", {"x"}, "x"), tiny("b", {"y"}, "-"), tiny("c", {"z"}, "z"),
                             tiny("d", {"w"}, "-")};
  Predictions all{{"a", "x"}, {"b", "y"}, {"c", "z"}, {"d", "w"}};
  EXPECT_DOUBLE_EQ(evaluate(all, data, Metric::kExactMatch, false).mean, 100.0);
  Predictions half{{"a", "x"}, {"b", "no"}, {"c", "z"}, {"d", "no"}};
  const auto s = evaluate(half, data, Metric::kExactMatch, true);
  EXPECT_DOUBLE_EQ(s.mean, 50.0);
  EXPECT_EQ(s.support, 4u);
  ASSERT_TRUE(s.positive && s.negative);
  EXPECT_EQ(s.positive->support, 2u);
  EXPECT_DOUBLE_EQ(s.positive->mean, 100.0);
  EXPECT_DOUBLE_EQ(s.negative->mean, 0.0);

  Predictions missing{{"a", "x"}};
  try {
    (void)evaluate(missing, data, Metric::kExactMatch, false);
    FAIL();
  } catch (const DataError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("b"), std::string::npos);
    EXPECT_NE(what.find("d"), std::string::npos);
  }
}

TEST(Evaluate, ProvenanceSplitFixture) {
  const auto data = load("split_fixture.jsonl");
  Predictions preds{{"s0", "red apple"}, {"s1", "blue"}, {"s2", "green leaf"}, {"s3", "dog"}};
  const auto s = evaluate(preds, data, Metric::kF1, true);
  ASSERT_TRUE(s.positive && s.negative);
  EXPECT_EQ(s.positive->support, 2u);
  EXPECT_EQ(s.negative->support, 2u);
  EXPECT_NEAR(s.positive->mean, 100.0 * (1.0 + 2.0 / 3.0) / 2.0, 1e-9);
  EXPECT_NEAR(s.negative->mean, 50.0, 1e-9);
  EXPECT_NEAR(s.mean, 100.0 * (2.0 + 2.0 / 3.0) / 4.0, 1e-9);
  // supports and means recombine
  EXPECT_EQ(s.positive->support + s.negative->support, s.support);
  EXPECT_NEAR((s.positive->mean * 2 + s.negative->mean * 2) / 4, s.mean, 1e-9);
}

TEST(Evaluate, DefaultMetrics) {
  EXPECT_EQ(default_metric(TaskKind::kExtractiveQa), Metric::kExactMatch);
  EXPECT_EQ(default_metric(TaskKind::kMultihopQa), Metric::kF1);
  EXPECT_EQ(default_metric(TaskKind::kFactVerification), Metric::kAccuracy);
  EXPECT_EQ(parse_metric("f1"), Metric::kF1);
  EXPECT_THROW(parse_metric("bleu"), ConfigError);
}

TEST(ReadPredictions, DuplicatesRejected) {
  std::istringstream ok(R"({"id":"a","prediction":"x"})" "\n" R"({"id":"b","prediction":""})" "\n");
  const auto p = read_predictions(ok);
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(p.at("b"), "");
  std::istringstream dup(R"({"id":"a","prediction":"x"})" "\n" R"({"id":"a","prediction":"y"})" "\n");
  EXPECT_THROW(read_predictions(dup), DataError);
}
