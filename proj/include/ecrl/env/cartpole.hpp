#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecrl/env/environment.hpp"

namespace ecrl::env {

struct CartpoleConfig {
  double track_half_width = 3.5;
  std::size_t regions = 7;  // colored regions g1..gk, centered on the track
  double region_width = 1.0;
  double angle_limit = 0.21;
  double termination_penalty = -10.0;
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double pole_half_length = 0.25;
  double gravity = 9.8;
  double force_magnitude = 10.0;
  double dt = 0.02;
  std::size_t horizon = 500;
  std::string region_prefix = "g";
};

struct CartpoleState {
  double x = 0.0;
  double x_dot = 0.0;
  double theta = 0.0;
  double theta_dot = 0.0;
};

void validate(const CartpoleConfig& config);
CartpoleConfig cartpole_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CartpoleConfig& config);

// Region k (0-based) is the half-open interval (lo_k, lo_k + width]; the
// regions are contiguous and centered on the track.
std::vector<std::array<double, 2>> cartpole_regions(const CartpoleConfig& config);

// Semi-implicit Euler step of the standard cart-pole equations with a
// horizontal force in newtons.
CartpoleState cartpole_step(const CartpoleConfig& config, const CartpoleState& state,
                            double force);
bool cartpole_failed(const CartpoleConfig& config, const CartpoleState& state);
TraceState cartpole_labels(const CartpoleConfig& config, const CartpoleState& state);

class Cartpole final : public Environment {
 public:
  explicit Cartpole(CartpoleConfig config);

  std::vector<double> reset() override;
  // Continuous 1-d action in [-1, 1], scaled by force_magnitude.
  StepResult step(const Action& action) override;
  const ltlf::AtomSet& propositions() const override { return props_; }
  TraceState labels() const override { return cartpole_labels(config_, state_); }
  ActionSpace action_space() const override { return ActionSpace::continuous(1, -1.0, 1.0); }
  std::size_t observation_size() const override { return 4; }
  std::size_t default_horizon() const override { return config_.horizon; }
  std::unique_ptr<Environment> clone() const override;

  const CartpoleState& state() const { return state_; }
  void set_state(const CartpoleState& s) { state_ = s; }

 private:
  std::vector<double> observe() const;

  CartpoleConfig config_;
  ltlf::AtomSet props_;
  CartpoleState state_;
};

}  // namespace ecrl::env
