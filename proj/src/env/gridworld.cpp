#include "ecrl/env/gridworld.hpp"

#include <algorithm>

namespace ecrl::env {

void validate(const GridworldConfig& c) {
  if (c.width == 0 || c.height == 0) throw ConfigError("gridworld must be non-empty");
  if (c.slip < 0.0 || c.slip > 1.0) throw ConfigError("slip must lie in [0, 1]");
  auto inside = [&](const Cell& cell) { return cell.x < c.width && cell.y < c.height; };
  for (const auto& color : c.colors)
    for (const auto& cell : color.cells)
      if (!inside(cell))
        throw ConfigError("colored cell outside the grid for '" + color.proposition + "'");
  if (c.start && !inside(*c.start)) throw ConfigError("start cell outside the grid");
}

GridworldConfig gridworld_config_from_json(const nlohmann::json& j) {
  GridworldConfig c;
  c.width = j.value("width", c.width);
  c.height = j.value("height", c.height);
  c.slip = j.value("slip", c.slip);
  c.horizon = j.value("horizon", c.horizon);
  if (j.contains("start") && !j.at("start").is_null())
    c.start = Cell{j.at("start").at(0).get<std::size_t>(), j.at("start").at(1).get<std::size_t>()};
  if (j.contains("colors")) {
    for (const auto& [name, cells] : j.at("colors").items()) {
      ColoredCells cc{name, {}};
      for (const auto& xy : cells)
        cc.cells.push_back({xy.at(0).get<std::size_t>(), xy.at(1).get<std::size_t>()});
      c.colors.push_back(std::move(cc));
    }
  }
  validate(c);
  return c;
}

nlohmann::json to_json(const GridworldConfig& c) {
  nlohmann::json j;
  j["width"] = c.width;
  j["height"] = c.height;
  j["slip"] = c.slip;
  j["horizon"] = c.horizon;
  j["start"] = c.start ? nlohmann::json::array({c.start->x, c.start->y}) : nlohmann::json();
  nlohmann::json colors = nlohmann::json::object();
  for (const auto& cc : c.colors) {
    auto cells = nlohmann::json::array();
    for (const auto& cell : cc.cells) cells.push_back({cell.x, cell.y});
    colors[cc.proposition] = cells;
  }
  j["colors"] = colors;
  return j;
}

namespace {

ltlf::AtomSet collect_props(const GridworldConfig& c) {
  std::vector<std::string> names;
  for (const auto& cc : c.colors)
    if (std::find(names.begin(), names.end(), cc.proposition) == names.end())
      names.push_back(cc.proposition);
  return ltlf::AtomSet(names);
}

}  // namespace

Gridworld::Gridworld(GridworldConfig config, std::uint64_t seed)
    : config_(std::move(config)), props_(collect_props(config_)), rng_(seed) {
  validate(config_);
  cell_labels_.assign(num_states(), TraceState{});
  for (const auto& cc : config_.colors) {
    auto bit = props_.index_of(cc.proposition);
    for (const auto& cell : cc.cells) cell_labels_[index(cell)].set(bit);
  }
  if (!config_.start && start_distribution().empty())
    throw ConfigError("gridworld has no uncolored start cell");
}

std::unique_ptr<Environment> Gridworld::clone() const {
  return std::make_unique<Gridworld>(*this);
}

std::vector<TabularModel::Outcome> Gridworld::start_distribution() const {
  if (config_.start) return {{1.0, index(*config_.start)}};
  std::vector<std::size_t> free;
  for (std::size_t s = 0; s < num_states(); ++s)
    if (cell_labels_[s].bits() == 0) free.push_back(s);
  std::vector<Outcome> out;
  for (auto s : free) out.push_back({1.0 / static_cast<double>(free.size()), s});
  return out;
}

std::vector<double> Gridworld::reset() {
  auto starts = start_distribution();
  if (starts.size() == 1) {
    state_ = starts.front().next;
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, starts.size() - 1);
    state_ = starts[pick(rng_)].next;
  }
  return observe();
}

std::size_t Gridworld::move(std::size_t s, std::size_t direction) const {
  Cell c = cell(s);
  switch (direction) {
    case 0: if (c.y + 1 < config_.height) ++c.y; break;
    case 1: if (c.x + 1 < config_.width) ++c.x; break;
    case 2: if (c.y > 0) --c.y; break;
    case 3: if (c.x > 0) --c.x; break;
    default: throw Error("gridworld action out of range");
  }
  return index(c);
}

std::vector<TabularModel::Outcome> Gridworld::transitions(std::size_t s,
                                                          std::size_t a) const {
  std::vector<Outcome> out;
  auto add = [&](double p, std::size_t next) {
    if (p <= 0.0) return;
    for (auto& o : out)
      if (o.next == next) {
        o.probability += p;
        return;
      }
    out.push_back({p, next});
  };
  add(1.0 - config_.slip, move(s, a));
  add(config_.slip / 2.0, move(s, (a + 1) % 4));
  add(config_.slip / 2.0, move(s, (a + 3) % 4));
  return out;
}

StepResult Gridworld::step(const Action& action) {
  if (action.empty()) throw Error("gridworld expects one action index");
  auto a = static_cast<std::size_t>(action.front());
  if (a >= 4) throw Error("gridworld action out of range");
  std::size_t direction = a;
  if (config_.slip > 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double x = u(rng_);
    if (x < config_.slip / 2.0)
      direction = (a + 1) % 4;
    else if (x < config_.slip)
      direction = (a + 3) % 4;
  }
  state_ = move(state_, direction);
  return {observe(), 0.0, false};
}

std::vector<double> Gridworld::observe() const {
  Cell c = cell(state_);
  auto scale = [](std::size_t v, std::size_t n) {
    return n > 1 ? static_cast<double>(v) / static_cast<double>(n - 1) : 0.0;
  };
  return {scale(c.x, config_.width), scale(c.y, config_.height)};
}

}  // namespace ecrl::env
