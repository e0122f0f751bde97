#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace filco {

struct ScoreRequest {
  std::string prefix;
  std::string target;

  bool operator==(const ScoreRequest&) const = default;
};

class ScorerError : public std::runtime_error {
 public:
  explicit ScorerError(const std::string& what, std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(what), index_(index) {}
  // Position of the failing request within the batch, when known.
  std::optional<std::size_t> index() const { return index_; }

 private:
  std::optional<std::size_t> index_;
};

// A response body that does not follow the scoring protocol.
class ProtocolError : public ScorerError {
 public:
  using ScorerError::ScorerError;
};

// Assigns log P(target | prefix) as a sum over target tokens.
// Implementations must be deterministic and safe for concurrent calls.
class SequenceScorer {
 public:
  virtual ~SequenceScorer() = default;

  virtual double score(std::string_view prefix, std::string_view target) const = 0;

  // Results are aligned with requests. The default scores one at a time.
  virtual std::vector<double> score_batch(std::span<const ScoreRequest> requests) const;
};

}  // namespace filco
