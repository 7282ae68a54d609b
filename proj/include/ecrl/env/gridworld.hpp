#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecrl/env/environment.hpp"

namespace ecrl::env {

struct Cell {
  std::size_t x = 0;
  std::size_t y = 0;
  bool operator==(const Cell&) const = default;
};

struct ColoredCells {
  std::string proposition;
  std::vector<Cell> cells;
};

struct GridworldConfig {
  std::size_t width = 7;
  std::size_t height = 7;
  std::vector<ColoredCells> colors;
  // Unset: uniform over uncolored cells at every reset.
  std::optional<Cell> start;
  // Probability that a move goes sideways instead (split evenly).
  double slip = 0.0;
  std::size_t horizon = 100;
};

void validate(const GridworldConfig& config);
GridworldConfig gridworld_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GridworldConfig& config);

// Four-action grid (0 up, 1 right, 2 down, 3 left). Moves into a wall leave
// the agent in place. A cell's label is the set of colors painted on it.
class Gridworld final : public Environment, public TabularModel {
 public:
  Gridworld(GridworldConfig config, std::uint64_t seed);

  std::vector<double> reset() override;
  StepResult step(const Action& action) override;
  const ltlf::AtomSet& propositions() const override { return props_; }
  TraceState labels() const override { return label_of(state_); }
  ActionSpace action_space() const override { return ActionSpace::discrete(4); }
  std::size_t observation_size() const override { return 2; }
  std::size_t default_horizon() const override { return config_.horizon; }
  std::optional<std::size_t> tabular_state() const override { return state_; }
  std::optional<std::size_t> tabular_state_count() const override {
    return num_states();
  }
  std::unique_ptr<Environment> clone() const override;

  std::size_t num_states() const override { return config_.width * config_.height; }
  std::size_t num_actions() const override { return 4; }
  std::vector<Outcome> transitions(std::size_t s, std::size_t a) const override;
  TraceState label_of(std::size_t s) const override { return cell_labels_.at(s); }
  std::vector<Outcome> start_distribution() const override;

  const GridworldConfig& config() const { return config_; }
  std::size_t index(Cell c) const { return c.y * config_.width + c.x; }
  Cell cell(std::size_t s) const { return {s % config_.width, s / config_.width}; }
  void set_state(std::size_t s) { state_ = s; }

 private:
  std::size_t move(std::size_t s, std::size_t direction) const;
  std::vector<double> observe() const;

  GridworldConfig config_;
  ltlf::AtomSet props_;
  std::vector<TraceState> cell_labels_;
  std::mt19937_64 rng_;
  std::size_t state_ = 0;
};

}  // namespace ecrl::env
