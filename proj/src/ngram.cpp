#include "filco/ngram.hpp"

#include <cmath>

#include "filco/text.hpp"
#include "filco/types.hpp"

namespace filco {

std::vector<double> SequenceScorer::score_batch(std::span<const ScoreRequest> requests) const {
  std::vector<double> out;
  out.reserve(requests.size());
  for (const auto& r : requests) out.push_back(score(r.prefix, r.target));
  return out;
}

namespace {
constexpr char kKeySep = '\x1f';
}

NGramModel NGramModel::train(std::span<const std::string> corpus, int n, double alpha) {
  if (n < 1) throw ConfigError("n-gram order must be >= 1");
  if (!(alpha > 0.0)) throw ConfigError("smoothing constant alpha must be > 0");
  if (corpus.empty()) throw ConfigError("cannot train an n-gram model on an empty corpus");

  NGramModel model(n, alpha);
  model.vocab_.insert(std::string(kEnd));
  const std::size_t h = static_cast<std::size_t>(n - 1);
  for (const auto& line : corpus) {
    std::vector<std::string> seq(h, std::string(kBegin));
    for (auto& tok : text::tokenize(line)) {
      model.vocab_.insert(tok);
      seq.push_back(std::move(tok));
    }
    seq.emplace_back(kEnd);
    for (std::size_t i = h; i < seq.size(); ++i) {
      auto& counts =
          model.counts_[model.history_key(std::span<const std::string>(seq).subspan(i - h, h))];
      ++counts.total;
      ++counts.next[seq[i]];
    }
  }
  return model;
}

std::string NGramModel::history_key(std::span<const std::string> history) const {
  const std::size_t h = static_cast<std::size_t>(order_ - 1);
  std::string key;
  const std::size_t have = history.size();
  for (std::size_t i = 0; i < h; ++i) {
    if (i) key += kKeySep;
    // left-pad short histories with begin sentinels
    if (i + have < h)
      key += kBegin;
    else
      key += history[have - h + i];
  }
  return key;
}

double NGramModel::probability(std::span<const std::string> history, std::string_view token) const {
  const double v = static_cast<double>(vocab_.size());
  auto it = counts_.find(history_key(history));
  if (it == counts_.end()) return alpha_ / (alpha_ * v);
  const auto& hc = it->second;
  double c = 0.0;
  if (auto jt = hc.next.find(std::string(token)); jt != hc.next.end())
    c = static_cast<double>(jt->second);
  return (c + alpha_) / (static_cast<double>(hc.total) + alpha_ * v);
}

std::vector<std::vector<std::string>> NGramModel::observed_histories() const {
  std::vector<std::vector<std::string>> out;
  for (const auto& [key, counts] : counts_) {
    std::vector<std::string> hist;
    if (order_ > 1) {
      std::size_t pos = 0;
      while (true) {
        const auto next = key.find(kKeySep, pos);
        hist.push_back(key.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
      }
    }
    out.push_back(std::move(hist));
  }
  return out;
}

double NGramModel::score(std::string_view prefix, std::string_view target) const {
  auto history = text::tokenize(prefix);
  const auto target_tokens = text::tokenize(target);
  double total = 0.0;
  for (const auto& tok : target_tokens) {
    total += std::log(probability(history, tok));
    history.push_back(tok);
  }
  return total;
}

}  // namespace filco
