#include "filco/remote_scorer.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "filco/types.hpp"

namespace filco {

RemoteScorer::RemoteScorer(RemoteScorerOptions options) : options_(std::move(options)) {
  if (options_.batch_size == 0) throw ConfigError("scorer batch size must be >= 1");
  if (options_.max_in_flight < 1) throw ConfigError("scorer in-flight cap must be >= 1");
  if (options_.max_attempts < 1) throw ConfigError("scorer attempts must be >= 1");

  const std::string_view url = options_.url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos || url.substr(0, scheme_end) != "http")
    throw ConfigError("scorer URL must look like http://host[:port][/path], got '" +
                      options_.url + "'");
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string_view::npos) {
    origin_ = std::string(url);
    path_ = "/";
  } else {
    origin_ = std::string(url.substr(0, path_start));
    path_ = std::string(url.substr(path_start));
  }
  if (origin_.size() <= scheme_end + 3) throw ConfigError("scorer URL has no host");
  in_flight_ = std::make_unique<std::counting_semaphore<>>(options_.max_in_flight);
}

std::string RemoteScorer::encode_request(std::span<const ScoreRequest> requests) {
  Json items = Json::array();
  for (const auto& r : requests) items.push_back(Json{{"prefix", r.prefix}, {"target", r.target}});
  return Json{{"items", std::move(items)}}.dump();
}

std::vector<double> RemoteScorer::decode_response(std::string_view body, std::size_t expected) {
  const auto doc = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("items") ||
      !doc["items"].is_array())
    throw ProtocolError("scorer response is not an object with an \"items\" array");
  const auto& items = doc["items"];
  if (items.size() != expected)
    throw ProtocolError("scorer returned " + std::to_string(items.size()) + " items, expected " +
                        std::to_string(expected));
  std::vector<double> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    if (!item.is_object() || !item.contains("logprob") || !item["logprob"].is_number())
      throw ProtocolError("scorer item " + std::to_string(i) + " lacks a numeric \"logprob\"", i);
    const double lp = item["logprob"].get<double>();
    if (!std::isfinite(lp)) throw ProtocolError("scorer item " + std::to_string(i) + " is not finite", i);
    out.push_back(lp);
  }
  return out;
}

std::vector<double> RemoteScorer::send_batch(std::span<const ScoreRequest> batch,
                                             std::size_t offset) const {
  const std::string body = encode_request(batch);
  httplib::Client client(origin_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  std::string last_error;
  auto backoff = options_.initial_backoff;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    httplib::Result res;
    {
      in_flight_->acquire();
      res = client.Post(path_, body, "application/json");
      in_flight_->release();
    }
    if (res && res->status >= 200 && res->status < 300) {
      try {
        return decode_response(res->body, batch.size());
      } catch (const ProtocolError& e) {
        throw ProtocolError(std::string(e.what()) + " (batch at request " +
                                std::to_string(offset) + ")",
                            offset + e.index().value_or(0));
      }
    }
    last_error = res ? "HTTP status " + std::to_string(res->status)
                     : "transport error: " + httplib::to_string(res.error());
    if (attempt < options_.max_attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw ScorerError("scoring request " + std::to_string(offset) + " failed after " +
                        std::to_string(options_.max_attempts) + " attempts: " + last_error,
                    offset);
}

std::vector<double> RemoteScorer::score_batch(std::span<const ScoreRequest> requests) const {
  std::vector<double> out(requests.size());
  if (requests.empty()) return out;

  const std::size_t bs = options_.batch_size;
  const std::size_t batches = (requests.size() + bs - 1) / bs;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_batch = batches;
  std::exception_ptr error;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t b = next.fetch_add(1);
      if (b >= batches) return;
      const std::size_t offset = b * bs;
      const auto batch = requests.subspan(offset, std::min(bs, requests.size() - offset));
      try {
        const auto scores = send_batch(batch, offset);
        std::copy(scores.begin(), scores.end(), out.begin() + static_cast<std::ptrdiff_t>(offset));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        // report the earliest failing batch
        if (b < error_batch) {
          error_batch = b;
          error = std::current_exception();
        }
        failed = true;
      }
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(batches, static_cast<std::size_t>(options_.max_in_flight));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

double RemoteScorer::score(std::string_view prefix, std::string_view target) const {
  const ScoreRequest req{std::string(prefix), std::string(target)};
  return score_batch(std::span<const ScoreRequest>(&req, 1)).front();
}

}  // namespace filco
