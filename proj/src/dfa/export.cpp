#include "ecrl/dfa/export.hpp"

#include <sstream>

#include "ecrl/dfa/guard.hpp"
#include "ecrl/ltlf/parser.hpp"

namespace ecrl::dfa {

namespace {

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

std::string rddl_value(StateId q) { return "@" + Dfa::state_name(q); }

}  // namespace

std::string export_dot(const Dfa& d) {
  std::ostringstream out;
  out << "digraph dfa {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=circle];\n";
  out << "  init [shape=point];\n";
  for (StateId q = 0; q < d.num_states(); ++q) {
    out << "  " << Dfa::state_name(q);
    if (d.is_accepting(q))
      out << " [shape=doublecircle]";
    else if (d.is_error(q))
      out << " [style=dashed]";
    out << ";\n";
  }
  out << "  init -> " << Dfa::state_name(d.initial()) << ";\n";
  for (const auto& e : d.edges()) {
    if (e.guard.op() == ltlf::Op::False) continue;
    out << "  " << Dfa::state_name(e.from) << " -> " << Dfa::state_name(e.to)
        << " [label=\"" << guard_to_string(e.guard, d.atoms()) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_rddl(const Dfa& d, double reward) {
  std::ostringstream out;
  out << "pvariables {\n";
  out << "    fQ : {state-fluent,{";
  for (StateId q = 0; q < d.num_states(); ++q)
    out << (q ? ", " : "") << rddl_value(q);
  out << "},default=" << rddl_value(d.initial()) << "};\n";
  out << "};\n";
  out << "cpfs{\n";
  bool first = true;
  for (const auto& e : d.edges()) {
    if (e.guard.op() == ltlf::Op::False) continue;
    out << (first ? "    fQ' = if(" : "          else if(");
    out << "fQ == " << rddl_value(e.from) << " ^ "
        << guard_to_rddl(e.guard, d.atoms()) << ") then " << rddl_value(e.to)
        << "\n";
    first = false;
  }
  out << "          else fQ;\n";
  out << "};\n";
  out << "reward = ";
  first = true;
  for (auto q : d.accepting_states()) {
    out << (first ? "" : " + ") << format_number(reward) << "*(fQ == "
        << rddl_value(q) << ")";
    first = false;
  }
  out << ";\n";
  out << "termination {";
  first = true;
  for (StateId q = 0; q < d.num_states(); ++q)
    if (d.is_accepting(q) || d.is_error(q)) {
      out << (first ? "" : " ") << "fQ == " << rddl_value(q) << ";";
      first = false;
    }
  out << "};\n";
  return out.str();
}

std::vector<Edge> parse_rddl_cpfs(std::string_view text, const AtomSet& atoms) {
  auto state_id = [&](std::string_view s, std::size_t at) -> StateId {
    if (s.size() < 3 || s.substr(0, 2) != "@q")
      throw InvalidDfa("malformed state value near offset " + std::to_string(at));
    return static_cast<StateId>(std::stoul(std::string(s.substr(2)))) - 1;
  };
  std::vector<Edge> edges;
  std::size_t pos = 0;
  while ((pos = text.find("if(", pos)) != std::string_view::npos) {
    std::size_t open = pos + 2;
    int depth = 0;
    std::size_t close = open;
    for (; close < text.size(); ++close) {
      if (text[close] == '(') ++depth;
      if (text[close] == ')' && --depth == 0) break;
    }
    if (close >= text.size()) throw InvalidDfa("unbalanced condition in cpfs");
    std::string_view cond = text.substr(open + 1, close - open - 1);
    const std::string_view prefix = "fQ == ";
    if (cond.substr(0, prefix.size()) != prefix)
      throw InvalidDfa("condition does not test fQ near offset " +
                       std::to_string(pos));
    std::size_t sep = cond.find(" ^ ");
    if (sep == std::string_view::npos)
      throw InvalidDfa("condition has no guard near offset " + std::to_string(pos));
    StateId from = state_id(cond.substr(prefix.size(), sep - prefix.size()), pos);
    std::string guard(cond.substr(sep + 3));
    for (auto& c : guard) {
      if (c == '~') c = '!';
      if (c == '^') c = '&';
    }
    std::size_t then = text.find("then ", close);
    if (then == std::string_view::npos) throw InvalidDfa("missing 'then'");
    std::size_t begin = then + 5;
    std::size_t end = begin;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])))
      ++end;
    StateId to = state_id(text.substr(begin, end - begin), begin);
    edges.push_back({from, ltlf::parse(guard, atoms), to});
    pos = end;
  }
  return edges;
}

nlohmann::json to_json(const Dfa& d) {
  nlohmann::json j;
  j["atoms"] = d.atoms().names();
  j["states"] = d.num_states();
  j["initial"] = d.initial();
  j["accepting"] = d.accepting_states();
  j["errors"] = d.error_states();
  auto edges = nlohmann::json::array();
  for (const auto& e : d.edges())
    edges.push_back({{"from", e.from},
                     {"guard", guard_to_string(e.guard, d.atoms())},
                     {"to", e.to}});
  j["edges"] = std::move(edges);
  return j;
}

Dfa dfa_from_json(const nlohmann::json& j) {
  AtomSet atoms(j.at("atoms").get<std::vector<std::string>>());
  const auto n = j.at("states").get<std::size_t>();
  std::vector<bool> accepting(n, false);
  for (auto q : j.at("accepting").get<std::vector<StateId>>()) accepting.at(q) = true;
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges"))
    edges.push_back({e.at("from").get<StateId>(),
                     ltlf::parse(e.at("guard").get<std::string>(), atoms),
                     e.at("to").get<StateId>()});
  return Dfa::from_edges(atoms, n, edges, j.at("initial").get<StateId>(),
                         std::move(accepting));
}

}  // namespace ecrl::dfa
