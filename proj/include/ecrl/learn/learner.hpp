#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <json.hpp>

#include "ecrl/env/environment.hpp"
#include "ecrl/replay/buffers.hpp"

namespace ecrl::learn {

// Off-policy learner driven by the training loop.
class Learner {
 public:
  virtual ~Learner() = default;

  // `state` is the product-state index when the environment is tabular.
  virtual env::Action act(const std::vector<double>& observation, std::optional<std::size_t> state,
                          bool explore, replay::Rng& rng) = 0;
  // One gradient (or table) update; returns the per-item TD errors.
  virtual std::vector<double> update(const replay::Batch& batch, replay::Rng& rng) = 0;
  // Training progress in [0, 1] for exploration schedules.
  virtual void set_progress(double /*fraction*/) {}
  virtual nlohmann::json to_json() const = 0;
};

// Linear decay from `start` to `end` over the first `fraction` of training.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  double fraction = 0.1;
  double at(double progress) const;
};

}  // namespace ecrl::learn
