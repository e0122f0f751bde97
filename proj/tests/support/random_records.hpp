#pragma once

// Random datasets and records for serialization round-trip tests.

#include <random>
#include <string>

#include "filco/types.hpp"
#include "support/synthetic.hpp"

namespace synth {

using filco::Json;

inline Json random_json(Rng& rng, int depth) {
  switch (uniform(rng, 0, depth > 0 ? 5 : 3)) {
    case 0: return random_text(rng, 8);
    case 1: return uniform(rng, -1000, 1000);
    case 2: return uniform(rng, 0, 1) == 1;
    case 3: return nullptr;
    case 4: {
      Json a = Json::array();
      for (int i = uniform(rng, 0, 3); i > 0; --i) a.push_back(random_json(rng, depth - 1));
      return a;
    }
    default: {
      Json o = Json::object();
      for (int i = uniform(rng, 0, 3); i > 0; --i)
        o["k" + std::to_string(i)] = random_json(rng, depth - 1);
      return o;
    }
  }
}

inline Json random_extra(Rng& rng) {
  Json extra = Json::object();
  for (int i = uniform(rng, 0, 2); i > 0; --i)
    extra["x_" + std::to_string(uniform(rng, 0, 99))] = random_json(rng, 2);
  return extra;
}

inline filco::Instance random_instance(Rng& rng, int id) {
  filco::Instance inst;
  auto& ex = inst.example;
  ex.id = "id" + std::to_string(id) + random_text(rng, 4);
  ex.query = random_text(rng, 20);
  ex.task = static_cast<filco::TaskKind>(uniform(rng, 0, 4));
  const int n_out = uniform(rng, 1, 3);
  for (int i = 0; i < n_out; ++i)
    ex.outputs.push_back(ex.task == filco::TaskKind::kFactVerification
                             ? std::string(uniform(rng, 0, 1) ? filco::kSupports : filco::kRefutes)
                             : "o" + random_text(rng, 10));
  if (uniform(rng, 0, 2) == 0) {
    ex.provenance.emplace();
    for (int i = uniform(rng, 0, 2); i > 0; --i) ex.provenance->push_back(random_text(rng, 5));
  }
  ex.extra = random_extra(rng);
  for (int r = 1, n = uniform(rng, 0, 4); r <= n; ++r) {
    filco::Passage p;
    p.rank = r;
    p.title = uniform(rng, 0, 1) ? random_text(rng, 6) : "";
    p.text = "T" + random_text(rng, 40);
    if (uniform(rng, 0, 1))
      p.score = std::uniform_real_distribution<double>(-100.0, 100.0)(rng);
    if (uniform(rng, 0, 3) == 0) p.provenance = random_text(rng, 5);
    p.extra = random_extra(rng);
    inst.passages.push_back(std::move(p));
  }
  return inst;
}

inline filco::SilverRecord random_record(Rng& rng, int id) {
  filco::SilverRecord r;
  r.id = "r" + std::to_string(id);
  r.role = static_cast<filco::RecordRole>(uniform(rng, 0, 2));
  r.input = random_text(rng, 60);
  r.target = r.role == filco::RecordRole::kGenInfer ? "" : random_text(rng, 20);
  if (uniform(rng, 0, 3)) r.meta.measure = static_cast<filco::Measure>(uniform(rng, 0, 2));
  r.meta.mode = static_cast<filco::ContextMode>(uniform(rng, 0, 2));
  r.meta.input_tokens = static_cast<std::size_t>(uniform(rng, 0, 5000));
  r.meta.context_tokens = static_cast<std::size_t>(uniform(rng, 0, 5000));
  r.meta.extra = random_extra(rng);
  r.extra = random_extra(rng);
  return r;
}

}  // namespace synth
