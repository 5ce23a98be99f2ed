#include "fourhammer/agents.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "fourhammer/wire.hpp"

namespace fourhammer {

Action RandomAgent::choose(const GameState&, const DecisionRequest& d) {
  std::uniform_int_distribution<std::size_t> pick(0, d.options.size() - 1);
  return d.options[pick(rng_)];
}

namespace {

int distance_to_goal(const GameState& s, int player, GridPos p) {
  const Control mine = player == 0 ? Control::p0 : Control::p1;
  int best = std::numeric_limits<int>::max();
  int any = std::numeric_limits<int>::max();
  for (int i = 0; i < 4; ++i) {
    const int d = chebyshev_distance(p, s.objectives[static_cast<std::size_t>(i)].position);
    any = std::min(any, d);
    if (objective_control(s, i) != mine) best = std::min(best, d);
  }
  return best == std::numeric_limits<int>::max() ? any : best;
}

int nearest(GridPos from, const UnitState& u) {
  int best = std::numeric_limits<int>::max();
  for (const auto& m : u.models) {
    if (m.alive()) best = std::min(best, chebyshev_distance(from, m.position));
  }
  return best;
}

GridPos anchor_of(const UnitState& u) {
  return u.models[static_cast<std::size_t>(u.anchor())].position;
}

/// Lowest remaining wounds among TargetUnit options.
Action weakest_target(const GameState& s, const DecisionRequest& d) {
  const Action* best = nullptr;
  int best_w = std::numeric_limits<int>::max();
  for (const auto& a : d.options) {
    const auto* t = std::get_if<TargetUnit>(&a);
    if (t == nullptr) continue;
    const int w = s.find_unit(t->unit)->wounds_remaining();
    if (w < best_w) {
      best_w = w;
      best = &a;
    }
  }
  return best != nullptr ? *best : d.options.front();
}

int charge_needed(const UnitState& unit, const UnitState& target) {
  return nearest(anchor_of(unit), target) - 1;
}

/// Best enemy charge target for `unit` by needed distance, if any reaches
/// even odds.
int good_charge_target(const GameState& s, const UnitState& unit) {
  int best = -1;
  int best_needed = std::numeric_limits<int>::max();
  for (const auto& t : s.units) {
    if (t.owner == unit.owner || !t.on_table()) continue;
    const int needed = charge_needed(unit, t);
    if (needed > 12 || two_d6_at_least(needed) < 0.5) continue;
    if (needed < best_needed) {
      best_needed = needed;
      best = t.unit_id;
    }
  }
  return best;
}

}  // namespace

Action GreedyAgent::choose(const GameState& s, const DecisionRequest& d) {
  const auto& opts = d.options;
  switch (d.kind) {
    case DecisionKind::deploy_position:
    case DecisionKind::move_target: {
      const Action* best = &opts.front();
      int best_d = std::numeric_limits<int>::max();
      for (const auto& a : opts) {
        const int dist = distance_to_goal(s, d.actor, std::get<TargetSquare>(a).square);
        if (dist < best_d) {
          best_d = dist;
          best = &a;
        }
      }
      return *best;
    }
    case DecisionKind::choose_move_kind: {
      const UnitState& u = *s.find_unit(decision_subject_unit(s));
      if (is_engaged(s, u)) return ChooseMoveKind{MoveKind::stationary};
      if (std::find(opts.begin(), opts.end(), Action{ChooseMoveKind{MoveKind::normal}}) != opts.end() &&
          distance_to_goal(s, d.actor, anchor_of(u)) > 0) {
        return ChooseMoveKind{MoveKind::normal};
      }
      return ChooseMoveKind{MoveKind::stationary};
    }
    case DecisionKind::select_move_unit:
    case DecisionKind::select_shoot_unit:
    case DecisionKind::select_fight_unit:
    case DecisionKind::deploy_unit:
      for (const auto& a : opts) {
        if (std::holds_alternative<SelectUnit>(a)) return a;
      }
      return opts.front();
    case DecisionKind::shoot_target:
    case DecisionKind::fight_target:
      return weakest_target(s, d);
    case DecisionKind::select_charge_unit:
      for (const auto& a : opts) {
        const auto* sel = std::get_if<SelectUnit>(&a);
        if (sel != nullptr && good_charge_target(s, *s.find_unit(sel->unit)) >= 0) return a;
      }
      return opts.front();
    case DecisionKind::charge_target: {
      const UnitState& u = *s.find_unit(decision_subject_unit(s));
      const int t = good_charge_target(s, u);
      if (t >= 0 && std::find(opts.begin(), opts.end(), Action{TargetUnit{t}}) != opts.end()) {
        return TargetUnit{t};
      }
      return opts.front();
    }
    case DecisionKind::reroll_offer: {
      const auto roll = pending_roll(s);
      if (roll && roll->total < roll->needed) return RerollAccept{};
      return RerollDecline{};
    }
    default:
      return opts.front();
  }
}

Action ScriptedAgent::choose(const GameState&, const DecisionRequest& d) {
  const std::size_t step = next_ + 1;
  if (next_ >= ids_.size()) {
    throw Error("script step " + std::to_string(step) + ": script ended before the game");
  }
  const int id = ids_[next_++];
  if (id < 0 || id >= kActionCount || !d.contains(id_to_action(id))) {
    throw Error("script step " + std::to_string(step) + ": action id " + std::to_string(id) +
                " is not legal");
  }
  return id_to_action(id);
}

std::vector<int> read_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read script " + path);
  std::vector<int> ids;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    std::string w;
    while (words >> w) {
      try {
        std::size_t used = 0;
        ids.push_back(std::stoi(w, &used));
        if (used != w.size()) throw std::invalid_argument(w);
      } catch (const std::exception&) {
        throw Error(path + ":" + std::to_string(lineno) + ": not an action id: " + w);
      }
    }
  }
  return ids;
}

std::unique_ptr<Agent> make_agent(std::string_view spec, std::uint64_t seed, int player) {
  if (spec == "random") return std::make_unique<RandomAgent>(seed + static_cast<std::uint64_t>(player));
  if (spec == "greedy") return std::make_unique<GreedyAgent>();
  if (spec.substr(0, 9) == "scripted:") {
    return std::make_unique<ScriptedAgent>(read_script(std::string(spec.substr(9))));
  }
  throw Error("unknown agent: " + std::string(spec));
}

PlayedGame play_game(ScenarioKind scenario, std::uint64_t seed, const Registry& registry, Agent& p0,
                     Agent& p1) {
  auto start = start_scenario(scenario, seed, registry);
  PlayedGame g{seed, std::move(start.state), {}, std::move(start.events)};
  while (!g.state.terminal) {
    const DecisionRequest d = pending_decision(g.state);
    const Action a = (d.actor == 0 ? p0 : p1).choose(g.state, d);
    g.actions.push_back(action_to_id(a));
    apply_in_place(g.state, a, &g.events);
  }
  return g;
}

PlayedGame replay_game(ScenarioKind scenario, std::uint64_t seed, const Registry& registry,
                       const std::vector<int>& actions) {
  auto start = start_scenario(scenario, seed, registry);
  PlayedGame g{seed, std::move(start.state), {}, std::move(start.events)};
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (g.state.terminal) {
      throw IllegalAction("step " + std::to_string(i + 1) + ": game already over");
    }
    const int id = actions[i];
    if (id < 0 || id >= kActionCount || !is_legal(g.state, id_to_action(id))) {
      throw IllegalAction("step " + std::to_string(i + 1) + ": action id " + std::to_string(id) +
                          " is not legal");
    }
    apply_in_place(g.state, id_to_action(id), &g.events);
    g.actions.push_back(id);
  }
  return g;
}

std::string render_transcript(const PlayedGame& g) {
  std::string out = "seed=" + std::to_string(g.seed) + "\n";
  for (int id : g.actions) out += std::to_string(id) + "\n";
  out += "---\n";
  for (const auto& e : g.events) out += event_to_json(e).dump() + "\n";
  return out;
}

PlayedGame parse_transcript(std::string_view text) {
  PlayedGame g;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("seed=", 0) != 0) {
    throw Error("transcript must start with seed=<n>");
  }
  try {
    g.seed = std::stoull(line.substr(5));
  } catch (const std::exception&) {
    throw Error("bad seed line: " + line);
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line == "---") return g;
    try {
      g.actions.push_back(std::stoi(line));
    } catch (const std::exception&) {
      throw Error("transcript line " + std::to_string(lineno) + ": not an action id");
    }
  }
  return g;
}

}  // namespace fourhammer
