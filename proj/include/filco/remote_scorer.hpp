#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "filco/scorer.hpp"

namespace filco {

inline constexpr std::string_view kScorerUrlEnv = "FILCO_SCORER_URL";

struct RemoteScorerOptions {
  std::string url;  // http://host[:port][/path]
  std::size_t batch_size = 16;
  int max_in_flight = 8;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::milliseconds timeout{30000};
};

// Client for an HTTP scoring service.
//
// Request:  POST <url> {"items":[{"prefix":"...","target":"..."}]}
// Response: {"items":[{"logprob":-1.5}]}, aligned with the request items.
//
// score_batch splits the requests into batches of batch_size and keeps at
// most max_in_flight HTTP requests open per client instance, across all
// concurrent callers. Each batch is retried with exponential backoff up to
// max_attempts times.
class RemoteScorer final : public SequenceScorer {
 public:
  explicit RemoteScorer(RemoteScorerOptions options);

  double score(std::string_view prefix, std::string_view target) const override;
  std::vector<double> score_batch(std::span<const ScoreRequest> requests) const override;

  const RemoteScorerOptions& options() const { return options_; }

  static std::string encode_request(std::span<const ScoreRequest> requests);
  // Throws ProtocolError for bodies that are not a well-formed response of
  // exactly `expected` finite items.
  static std::vector<double> decode_response(std::string_view body, std::size_t expected);

 private:
  std::vector<double> send_batch(std::span<const ScoreRequest> batch, std::size_t offset) const;

  RemoteScorerOptions options_;
  std::string origin_;  // scheme://host:port
  std::string path_;
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

}  // namespace filco
