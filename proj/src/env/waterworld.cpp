#include "ecrl/env/waterworld.hpp"

#include <algorithm>
#include <cmath>

namespace ecrl::env {

void validate(const WaterworldConfig& c) {
  if (!(c.side > 2 * std::max(c.ball_radius, c.agent_radius)))
    throw ConfigError("waterworld side too small");
  if (!(c.dt > 0.0)) throw ConfigError("waterworld dt must be positive");
  if (c.respawn_on_contact && !(c.respawn_clearance < c.side / 2))
    throw ConfigError("respawn clearance leaves no room inside the walls");
  auto inside = [&](const Vec2& p, double r) {
    return p[0] >= r && p[0] <= c.side - r && p[1] >= r && p[1] <= c.side - r;
  };
  if (!inside(c.agent_start, c.agent_radius)) throw ConfigError("agent starts outside the walls");
  for (const auto& b : c.balls) {
    if (!inside(b.position, c.ball_radius)) throw ConfigError("ball starts outside the walls");
    if (std::abs(b.velocity[0]) > c.ball_max_speed || std::abs(b.velocity[1]) > c.ball_max_speed)
      throw ConfigError("ball velocity exceeds the speed range");
    if (!ltlf::AtomSet::is_valid_name(b.color)) throw ConfigError("invalid ball color '" + b.color + "'");
  }
}

WaterworldConfig waterworld_config_from_json(const nlohmann::json& j) {
  WaterworldConfig c;
  c.side = j.value("side", c.side);
  c.ball_radius = j.value("ball_radius", c.ball_radius);
  c.agent_radius = j.value("agent_radius", c.agent_radius);
  c.agent_max_speed = j.value("agent_max_speed", c.agent_max_speed);
  c.ball_max_speed = j.value("ball_max_speed", c.ball_max_speed);
  c.dt = j.value("dt", c.dt);
  c.max_acceleration = j.value("max_acceleration", c.max_acceleration);
  c.horizon = j.value("horizon", c.horizon);
  c.discrete_actions = j.value("discrete_actions", c.discrete_actions);
  c.respawn_on_contact = j.value("respawn_on_contact", c.respawn_on_contact);
  c.respawn_clearance = j.value("respawn_clearance", c.respawn_clearance);
  c.agent_start = j.value("agent_start", Vec2{c.side / 2, c.side / 2});
  for (const auto& b : j.value("balls", nlohmann::json::array()))
    c.balls.push_back({b.at("position").get<Vec2>(), b.at("velocity").get<Vec2>(),
                       b.at("color").get<std::string>()});
  validate(c);
  return c;
}

nlohmann::json to_json(const WaterworldConfig& c) {
  nlohmann::json j;
  j["side"] = c.side;
  j["ball_radius"] = c.ball_radius;
  j["agent_radius"] = c.agent_radius;
  j["agent_max_speed"] = c.agent_max_speed;
  j["ball_max_speed"] = c.ball_max_speed;
  j["dt"] = c.dt;
  j["max_acceleration"] = c.max_acceleration;
  j["horizon"] = c.horizon;
  j["discrete_actions"] = c.discrete_actions;
  j["respawn_on_contact"] = c.respawn_on_contact;
  j["respawn_clearance"] = c.respawn_clearance;
  j["agent_start"] = c.agent_start;
  auto balls = nlohmann::json::array();
  for (const auto& b : c.balls)
    balls.push_back({{"position", b.position}, {"velocity", b.velocity}, {"color", b.color}});
  j["balls"] = balls;
  return j;
}

Ball random_ball(const WaterworldConfig& c, const Vec2& agent, double clearance,
                 std::string color, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(c.ball_radius, c.side - c.ball_radius);
  std::uniform_real_distribution<double> vel(-c.ball_max_speed, c.ball_max_speed);
  Ball b;
  b.color = std::move(color);
  do {
    b.position = {pos(rng), pos(rng)};
  } while (std::hypot(b.position[0] - agent[0], b.position[1] - agent[1]) <= clearance);
  b.velocity = {vel(rng), vel(rng)};
  return b;
}

WaterworldConfig generate_waterworld_map(double side, const std::vector<BallCount>& balls,
                                         std::uint64_t seed, WaterworldConfig base) {
  base.side = side;
  base.agent_start = {side / 2, side / 2};
  base.balls.clear();
  std::mt19937_64 rng(seed);
  const double contact = base.agent_radius + base.ball_radius;
  for (const auto& [color, count] : balls)
    for (std::size_t k = 0; k < count; ++k)
      base.balls.push_back(random_ball(base, base.agent_start, contact, color, rng));
  validate(base);
  return base;
}

WaterworldState waterworld_step(const WaterworldConfig& c, const WaterworldState& s,
                                Vec2 acceleration) {
  WaterworldState next = s;
  double norm = std::hypot(acceleration[0], acceleration[1]);
  if (norm > c.max_acceleration) {
    acceleration[0] *= c.max_acceleration / norm;
    acceleration[1] *= c.max_acceleration / norm;
  }
  for (int d = 0; d < 2; ++d) {
    double v = s.agent_velocity[d] + acceleration[d] * c.dt;
    v = std::clamp(v, -c.agent_max_speed, c.agent_max_speed);
    double p = s.agent_position[d] + v * c.dt;
    const double lo = c.agent_radius, hi = c.side - c.agent_radius;
    if (p < lo) {
      p = lo;
      v = 0.0;
    } else if (p > hi) {
      p = hi;
      v = 0.0;
    }
    next.agent_position[d] = p;
    next.agent_velocity[d] = v;
  }
  for (auto& b : next.balls) {
    const double lo = c.ball_radius, hi = c.side - c.ball_radius;
    for (int d = 0; d < 2; ++d) {
      double p = b.position[d] + b.velocity[d] * c.dt;
      if (p < lo) {
        p = 2 * lo - p;
        b.velocity[d] = -b.velocity[d];
      } else if (p > hi) {
        p = 2 * hi - p;
        b.velocity[d] = -b.velocity[d];
      }
      b.position[d] = std::clamp(p, lo, hi);
    }
  }
  return next;
}

TraceState waterworld_labels(const WaterworldConfig& c, const ltlf::AtomSet& colors,
                             const WaterworldState& s) {
  TraceState out;
  const double contact = c.agent_radius + c.ball_radius;
  for (const auto& b : s.balls) {
    double dx = b.position[0] - s.agent_position[0];
    double dy = b.position[1] - s.agent_position[1];
    if (dx * dx + dy * dy <= contact * contact)
      if (auto i = colors.find(b.color)) out.set(*i);
  }
  return out;
}

namespace {

ltlf::AtomSet collect_colors(const WaterworldConfig& c) {
  std::vector<std::string> names;
  for (const auto& b : c.balls)
    if (std::find(names.begin(), names.end(), b.color) == names.end()) names.push_back(b.color);
  return ltlf::AtomSet(names);
}

}  // namespace

Waterworld::Waterworld(WaterworldConfig config, std::uint64_t seed)
    : config_(std::move(config)), colors_(collect_colors(config_)), rng_(seed) {
  validate(config_);
  reset();
}

std::unique_ptr<Environment> Waterworld::clone() const {
  return std::make_unique<Waterworld>(*this);
}

std::vector<double> Waterworld::reset() {
  state_.agent_position = config_.agent_start;
  state_.agent_velocity = {0.0, 0.0};
  state_.balls = config_.balls;
  return observe();
}

ActionSpace Waterworld::action_space() const {
  return config_.discrete_actions ? ActionSpace::discrete(9)
                                  : ActionSpace::continuous(2, -1.0, 1.0);
}

Vec2 Waterworld::acceleration_for(const Action& action) const {
  const double a = config_.max_acceleration;
  if (config_.discrete_actions) {
    if (action.empty()) throw Error("waterworld expects one action index");
    auto k = static_cast<int>(action.front());
    if (k < 0 || k > 8) throw Error("waterworld action out of range");
    if (k == 0) return {0.0, 0.0};
    // 1..8: compass directions counter-clockwise from east.
    double angle = (k - 1) * M_PI / 4.0;
    return {a * std::cos(angle), a * std::sin(angle)};
  }
  if (action.size() != 2) throw Error("waterworld expects a 2-vector action");
  return {std::clamp(action[0], -1.0, 1.0) * a, std::clamp(action[1], -1.0, 1.0) * a};
}

void Waterworld::respawn_touched() {
  const double contact = config_.agent_radius + config_.ball_radius;
  for (auto& b : state_.balls) {
    const double dx = b.position[0] - state_.agent_position[0];
    const double dy = b.position[1] - state_.agent_position[1];
    if (dx * dx + dy * dy <= contact * contact)
      b = random_ball(config_, state_.agent_position,
                      std::max(config_.respawn_clearance, contact), b.color, rng_);
  }
}

StepResult Waterworld::step(const Action& action) {
  const Vec2 acceleration = acceleration_for(action);
  if (config_.respawn_on_contact) respawn_touched();
  state_ = waterworld_step(config_, state_, acceleration);
  // No per-step reward or penalty in this domain.
  return {observe(), 0.0, false};
}

TraceState Waterworld::labels() const { return waterworld_labels(config_, colors_, state_); }

std::vector<double> Waterworld::observe() const {
  std::vector<double> obs;
  obs.reserve(observation_size());
  const auto& s = state_;
  obs.push_back(s.agent_position[0] / config_.side);
  obs.push_back(s.agent_position[1] / config_.side);
  obs.push_back(s.agent_velocity[0] / config_.agent_max_speed);
  obs.push_back(s.agent_velocity[1] / config_.agent_max_speed);
  for (const auto& b : s.balls) {
    obs.push_back((b.position[0] - s.agent_position[0]) / config_.side);
    obs.push_back((b.position[1] - s.agent_position[1]) / config_.side);
    obs.push_back(b.velocity[0] / config_.ball_max_speed);
    obs.push_back(b.velocity[1] / config_.ball_max_speed);
  }
  return obs;
}

}  // namespace ecrl::env
