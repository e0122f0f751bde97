#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "filco/dataset_io.hpp"
#include "support/random_records.hpp"

using namespace filco;

namespace {

const char* kLine =
    R"({"id":"q1","query":"who?","outputs":["Ann"],"task":"extractive_qa","passages":[)"
    R"({"rank":2,"title":"","text":"Bob."},{"rank":1,"title":"T","text":"Ann.","score":3.5}]})";

std::string with_passages(const std::string& passages) {
  return R"({"id":"x","query":"q","outputs":["a"],"task":"extractive_qa","passages":)" + passages +
         "}";
}

std::size_t error_line(const std::string& data) {
  std::istringstream in(data);
  try {
    (void)read_examples(in);
  } catch (const DataError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(ReadExamples, ParsesAndSortsByRank) {
  const auto inst = parse_instance(kLine, 1);
  EXPECT_EQ(inst.example.id, "q1");
  EXPECT_EQ(inst.example.outputs, std::vector<std::string>{"Ann"});
  ASSERT_EQ(inst.passages.size(), 2u);
  EXPECT_EQ(inst.passages[0].rank, 1);
  EXPECT_EQ(inst.passages[0].score, 3.5);
  EXPECT_EQ(inst.passages[1].title, "");
  EXPECT_FALSE(inst.passages[1].score.has_value());
}

TEST(ReadExamples, EmptyStreamAndBlankLines) {
  std::istringstream empty("");
  EXPECT_TRUE(read_examples(empty).empty());
  std::istringstream blanks(std::string("\n") + kLine + "\n\n" + kLine + "\n");
  EXPECT_EQ(read_examples(blanks).size(), 2u);
}

TEST(ReadExamples, ErrorsCarryLineNumbers) {
  const std::string good = std::string(kLine) + "\n";
  EXPECT_EQ(error_line(with_passages(R"([{"rank":1,"text":"a"},{"rank":1,"text":"b"}])")), 1u);
  EXPECT_EQ(error_line(good + "{not json\n"), 2u);
  EXPECT_EQ(error_line(good + "\n" + with_passages(R"([{"rank":2,"text":"a"}])")), 3u);
  try {
    (void)parse_instance(with_passages(R"([{"rank":1,"text":"a"},{"rank":1,"text":"b"}])"), 1);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 1: duplicate passage rank 1"), std::string::npos);
  }
}

TEST(ReadExamples, FieldValidation) {
  auto bad = [](const std::string& line) {
    EXPECT_THROW((void)parse_instance(line, 1), DataError) << line;
  };
  bad(R"({"id":"x","query":"q","outputs":[],"task":"extractive_qa","passages":[]})");
  bad(R"({"id":"x","query":"q","outputs":["  "],"task":"extractive_qa","passages":[]})");
  bad(R"({"id":"x","query":"q","outputs":["yes"],"task":"fact_verification","passages":[]})");
  bad(R"({"id":"x","query":"q","outputs":["a"],"task":"poetry","passages":[]})");
  bad(R"({"query":"q","outputs":["a"],"task":"extractive_qa","passages":[]})");
  bad(with_passages(R"([{"rank":0,"text":"a"}])"));
  bad(with_passages(R"([{"rank":1,"text":""}])"));
  bad(with_passages(R"([{"rank":1.5,"text":"a"}])"));
  bad(with_passages(R"([{"rank":1,"text":"a","score":"high"}])"));
  EXPECT_NO_THROW((void)parse_instance(
      R"({"id":"x","query":"q","outputs":["SUPPORTS"],"task":"fact_verification","passages":[]})", 1));
}

TEST(ReadExamples, UnknownFieldsSurviveRewrite) {
  const std::string line =
      R"({"id":"x","query":"q","outputs":["a"],"task":"dialog","passages":[{"rank":1,"title":"t","text":"a","lang":"en"}],"source":{"split":"dev"}})";
  const auto inst = parse_instance(line, 1);
  EXPECT_EQ(inst.example.extra["source"]["split"], "dev");
  EXPECT_EQ(inst.passages[0].extra["lang"], "en");
  EXPECT_EQ(serialize_instance(inst), line);
}

TEST(WriteRecords, OneLinePerRecordAndEscapedNewlines) {
  SilverRecord a;
  a.id = "a";
  a.input = "line one\nline two";
  a.target = "t";
  a.meta.measure = Measure::kLexical;
  SilverRecord b = a;
  b.id = "b";
  b.meta.measure.reset();
  std::ostringstream out;
  write_records(std::vector<SilverRecord>{a, b}, out);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_NE(text.find(R"("measure":"none")"), std::string::npos);
  std::istringstream in(text);
  EXPECT_EQ(read_records(in), (std::vector<SilverRecord>{a, b}));

  std::ostringstream empty;
  write_records({}, empty);
  EXPECT_EQ(empty.str(), "");
}

TEST(WriteRecords, SinkFailurePropagates) {
  std::ostringstream out;
  out.setstate(std::ios::badbit);
  SilverRecord r;
  r.id = "x";
  EXPECT_THROW(write_records(std::vector<SilverRecord>{r}, out), std::ios_base::failure);
}

TEST(WriteRecords, RecordSchemaKeyOrder) {
  SilverRecord r;
  r.id = "q";
  r.role = RecordRole::kGenTrain;
  r.input = "i";
  r.target = "t";
  r.meta.measure = Measure::kCxmi;
  r.meta.mode = ContextMode::kPsg;
  r.meta.input_tokens = 3;
  r.meta.context_tokens = 1;
  EXPECT_EQ(serialize_record(r),
            R"({"id":"q","role":"gen_train","input":"i","target":"t","meta":{"measure":"cxmi","mode":"psg","input_tokens":3,"context_tokens":1}})");
}

TEST(RoundTrip, RandomInstancesAndRecords) {
  synth::Rng rng(1234);
  std::vector<Instance> instances;
  std::vector<SilverRecord> records;
  for (int i = 0; i < 300; ++i) {
    instances.push_back(synth::random_instance(rng, i));
    records.push_back(synth::random_record(rng, i));
  }
  std::stringstream a;
  write_instances(instances, a);
  const auto back = read_examples(a);
  EXPECT_EQ(back, instances);
  std::stringstream again;
  write_instances(back, again);
  EXPECT_EQ(again.str(), a.str());

  std::stringstream r;
  write_records(records, r);
  const auto rback = read_records(r);
  EXPECT_EQ(rback, records);
  for (std::size_t i = 0; i < records.size(); ++i)
    EXPECT_EQ(serialize_record(rback[i]), serialize_record(records[i]));
}
