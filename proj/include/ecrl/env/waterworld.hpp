#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecrl/env/environment.hpp"

namespace ecrl::env {

using Vec2 = std::array<double, 2>;

struct Ball {
  Vec2 position{};
  Vec2 velocity{};
  std::string color;
};

struct WaterworldConfig {
  double side = 20.0;
  std::vector<Ball> balls;
  double ball_radius = 0.5;
  double agent_radius = 0.5;
  double agent_max_speed = 3.5;  // per velocity component
  double ball_max_speed = 2.0;   // per velocity component
  double dt = 0.1;
  // Acceleration magnitude bound; dt * max_acceleration caps the per-step
  // velocity change at 1.0.
  double max_acceleration = 10.0;
  Vec2 agent_start{10.0, 10.0};
  std::size_t horizon = 600;
  // 9 discrete accelerations (null + 8 compass directions) instead of a
  // continuous 2-vector in [-1, 1]^2.
  bool discrete_actions = true;
  // A ball touched in one step is re-placed uniformly (away from the agent,
  // with a fresh velocity) at the start of the next, so each touch labels
  // exactly one state.
  bool respawn_on_contact = false;
  // Minimum centre distance between the agent and a respawned ball.
  double respawn_clearance = 2.5;
};

struct WaterworldState {
  Vec2 agent_position{};
  Vec2 agent_velocity{};
  std::vector<Ball> balls;
};

void validate(const WaterworldConfig& config);
WaterworldConfig waterworld_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const WaterworldConfig& config);

struct BallCount {
  std::string color;
  std::size_t count;
};

// Random map with the agent at the centre. Balls are placed uniformly inside
// the walls with velocity components uniform in [-ball_max_speed,
// ball_max_speed]; placements touching the agent are redrawn.
WaterworldConfig generate_waterworld_map(double side,
                                         const std::vector<BallCount>& balls,
                                         std::uint64_t seed,
                                         WaterworldConfig base = {});

// One integration step: agent velocity += clamp(acceleration) * dt, clamped
// per component; positions integrate; balls reflect off walls; the agent is
// held inside the walls.
WaterworldState waterworld_step(const WaterworldConfig& config,
                                const WaterworldState& state, Vec2 acceleration);

// Random ball inside the walls whose centre is farther than `clearance` from
// `agent`.
Ball random_ball(const WaterworldConfig& config, const Vec2& agent, double clearance,
                 std::string color, std::mt19937_64& rng);

// Color c holds iff some ball of color c is within agent_radius + ball_radius
// of the agent (closed contact).
TraceState waterworld_labels(const WaterworldConfig& config,
                             const ltlf::AtomSet& colors,
                             const WaterworldState& state);

class Waterworld final : public Environment {
 public:
  explicit Waterworld(WaterworldConfig config, std::uint64_t seed = 0);

  std::vector<double> reset() override;
  StepResult step(const Action& action) override;
  const ltlf::AtomSet& propositions() const override { return colors_; }
  TraceState labels() const override;
  ActionSpace action_space() const override;
  std::size_t observation_size() const override { return 4 + 4 * config_.balls.size(); }
  std::size_t default_horizon() const override { return config_.horizon; }
  std::unique_ptr<Environment> clone() const override;

  const WaterworldState& state() const { return state_; }
  const WaterworldConfig& config() const { return config_; }
  Vec2 acceleration_for(const Action& action) const;

 private:
  std::vector<double> observe() const;
  void respawn_touched();

  WaterworldConfig config_;
  ltlf::AtomSet colors_;
  WaterworldState state_;
  std::mt19937_64 rng_;
};

}  // namespace ecrl::env
