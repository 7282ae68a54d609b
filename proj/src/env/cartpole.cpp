#include "ecrl/env/cartpole.hpp"

#include <algorithm>
#include <cmath>

namespace ecrl::env {

void validate(const CartpoleConfig& c) {
  if (!(c.track_half_width > 0.0)) throw ConfigError("track half-width must be positive");
  if (!(c.region_width > 0.0)) throw ConfigError("region width must be positive");
  if (c.regions * c.region_width > 2 * c.track_half_width + 1e-12)
    throw ConfigError("colored regions exceed the track");
  if (c.regions > 32) throw ConfigError("too many cartpole regions");
  if (!(c.dt > 0.0)) throw ConfigError("cartpole dt must be positive");
}

CartpoleConfig cartpole_config_from_json(const nlohmann::json& j) {
  CartpoleConfig c;
  c.track_half_width = j.value("track_half_width", c.track_half_width);
  c.regions = j.value("regions", c.regions);
  c.region_width = j.value("region_width", c.region_width);
  c.angle_limit = j.value("angle_limit", c.angle_limit);
  c.termination_penalty = j.value("termination_penalty", c.termination_penalty);
  c.cart_mass = j.value("cart_mass", c.cart_mass);
  c.pole_mass = j.value("pole_mass", c.pole_mass);
  c.pole_half_length = j.value("pole_half_length", c.pole_half_length);
  c.gravity = j.value("gravity", c.gravity);
  c.force_magnitude = j.value("force_magnitude", c.force_magnitude);
  c.dt = j.value("dt", c.dt);
  c.horizon = j.value("horizon", c.horizon);
  c.region_prefix = j.value("region_prefix", c.region_prefix);
  validate(c);
  return c;
}

nlohmann::json to_json(const CartpoleConfig& c) {
  return {{"track_half_width", c.track_half_width},
          {"regions", c.regions},
          {"region_width", c.region_width},
          {"angle_limit", c.angle_limit},
          {"termination_penalty", c.termination_penalty},
          {"cart_mass", c.cart_mass},
          {"pole_mass", c.pole_mass},
          {"pole_half_length", c.pole_half_length},
          {"gravity", c.gravity},
          {"force_magnitude", c.force_magnitude},
          {"dt", c.dt},
          {"horizon", c.horizon},
          {"region_prefix", c.region_prefix}};
}

std::vector<std::array<double, 2>> cartpole_regions(const CartpoleConfig& c) {
  std::vector<std::array<double, 2>> out;
  const double left = -0.5 * static_cast<double>(c.regions) * c.region_width;
  for (std::size_t k = 0; k < c.regions; ++k) {
    double lo = left + static_cast<double>(k) * c.region_width;
    out.push_back({lo, lo + c.region_width});
  }
  return out;
}

CartpoleState cartpole_step(const CartpoleConfig& c, const CartpoleState& s, double force) {
  const double total_mass = c.cart_mass + c.pole_mass;
  const double pole_ml = c.pole_mass * c.pole_half_length;
  const double cos_t = std::cos(s.theta), sin_t = std::sin(s.theta);
  const double temp = (force + pole_ml * s.theta_dot * s.theta_dot * sin_t) / total_mass;
  const double theta_acc =
      (c.gravity * sin_t - cos_t * temp) /
      (c.pole_half_length * (4.0 / 3.0 - c.pole_mass * cos_t * cos_t / total_mass));
  const double x_acc = temp - pole_ml * theta_acc * cos_t / total_mass;

  CartpoleState n;
  n.x_dot = s.x_dot + c.dt * x_acc;
  n.x = s.x + c.dt * n.x_dot;
  n.theta_dot = s.theta_dot + c.dt * theta_acc;
  n.theta = s.theta + c.dt * n.theta_dot;
  return n;
}

bool cartpole_failed(const CartpoleConfig& c, const CartpoleState& s) {
  return std::abs(s.theta) > c.angle_limit || std::abs(s.x) > c.track_half_width;
}

TraceState cartpole_labels(const CartpoleConfig& c, const CartpoleState& s) {
  TraceState out;
  auto regions = cartpole_regions(c);
  for (std::size_t k = 0; k < regions.size(); ++k)
    if (s.x > regions[k][0] && s.x <= regions[k][1]) {
      out.set(k);
      break;
    }
  return out;
}

namespace {

ltlf::AtomSet region_atoms(const CartpoleConfig& c) {
  std::vector<std::string> names;
  for (std::size_t k = 1; k <= c.regions; ++k) names.push_back(c.region_prefix + std::to_string(k));
  return ltlf::AtomSet(names);
}

}  // namespace

Cartpole::Cartpole(CartpoleConfig config)
    : config_(std::move(config)), props_(region_atoms(config_)) {
  validate(config_);
}

std::unique_ptr<Environment> Cartpole::clone() const { return std::make_unique<Cartpole>(*this); }

std::vector<double> Cartpole::reset() {
  state_ = {};
  return observe();
}

StepResult Cartpole::step(const Action& action) {
  if (action.size() != 1) throw Error("cartpole expects a 1-vector action");
  double force = std::clamp(action[0], -1.0, 1.0) * config_.force_magnitude;
  state_ = cartpole_step(config_, state_, force);
  bool failed = cartpole_failed(config_, state_);
  return {observe(), failed ? config_.termination_penalty : 0.0, failed};
}

std::vector<double> Cartpole::observe() const {
  return {state_.x / config_.track_half_width, state_.x_dot, state_.theta / config_.angle_limit,
          state_.theta_dot};
}

}  // namespace ecrl::env
