#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "filco/prompt.hpp"
#include "filco/scorer.hpp"
#include "filco/selection.hpp"
#include "filco/types.hpp"

namespace filco {

// Pulls items from `next` and runs `work` on up to `jobs` threads,
// handing results to `emit` strictly in input order. Items are processed
// in windows of `window` so memory stays bounded for any input length.
// The first failing item (in input order) has its exception rethrown
// after the window drains; items before it are still emitted.
template <typename In, typename Out>
void ordered_parallel_map(const std::function<std::optional<In>()>& next,
                          const std::function<Out(const In&)>& work,
                          const std::function<void(Out&&)>& emit, int jobs,
                          std::size_t window = 256) {
  const std::size_t workers = static_cast<std::size_t>(std::max(jobs, 1));
  window = std::max(window, workers);
  std::vector<In> inputs;
  std::vector<std::optional<Out>> outputs;
  std::vector<std::exception_ptr> errors;
  bool done = false;
  while (!done) {
    inputs.clear();
    while (inputs.size() < window) {
      auto item = next();
      if (!item) {
        done = true;
        break;
      }
      inputs.push_back(std::move(*item));
    }
    if (inputs.empty()) break;
    outputs.assign(inputs.size(), std::nullopt);
    errors.assign(inputs.size(), nullptr);

    std::atomic<std::size_t> cursor{0};
    auto run = [&] {
      for (std::size_t i; (i = cursor.fetch_add(1)) < inputs.size();) {
        try {
          outputs[i].emplace(work(inputs[i]));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    if (workers == 1 || inputs.size() == 1) {
      run();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < std::min(workers, inputs.size()); ++t) pool.emplace_back(run);
    }
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
      emit(std::move(*outputs[i]));
    }
  }
}

struct PipelineOptions {
  FilterConfig config;
  ContextMode mode = ContextMode::kFilco;
  const SequenceScorer* scorer = nullptr;
  PromptTemplates templates;
  // Compute the silver selection even outside filco mode.
  bool want_selection = false;
};

struct ProcessedExample {
  // Silver selection; empty unless mode is filco or want_selection is set.
  Selection selection;
  ContextAssembly context;
};

// Runs selection for options.mode and assembles the context.
ProcessedExample process_instance(const Instance& instance, const PipelineOptions& options);

// Line record written by `filco filter`.
Json selection_record(const Instance& instance, const ProcessedExample& processed,
                      const PipelineOptions& options);

}  // namespace filco
