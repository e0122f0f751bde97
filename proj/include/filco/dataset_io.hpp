#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "filco/types.hpp"

namespace filco {

// JSONL dataset lines:
//   {"id": str, "query": str, "outputs": [str], "task": str,
//    "provenance": [str]?,
//    "passages": [{"rank": int, "title": str, "text": str, "score": float?,
//                  "provenance": str?}]}
// Passages come back sorted by rank. Unknown fields are kept in `extra`.
Instance parse_instance(std::string_view line, std::size_t line_number = 0);
std::string serialize_instance(const Instance& instance);

SilverRecord parse_record(std::string_view line, std::size_t line_number = 0);
std::string serialize_record(const SilverRecord& record);

// Streams instances from a JSONL source; blank lines are skipped but
// still counted for error line numbers.
class InstanceReader {
 public:
  explicit InstanceReader(std::istream& in) : in_(in) {}

  std::optional<Instance> next();
  // Line number of the most recently returned instance.
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::string buffer_;
};

std::vector<Instance> read_examples(std::istream& in);
std::vector<SilverRecord> read_records(std::istream& in);

// One line per record. Throws std::ios_base::failure when the sink fails.
void write_records(std::span<const SilverRecord> records, std::ostream& out);
void write_instances(std::span<const Instance> instances, std::ostream& out);

}  // namespace filco
