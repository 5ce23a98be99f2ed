#include "fourhammer/scenarios.hpp"

namespace fourhammer {

const char* to_string(RewardRule r) {
  switch (r) {
    case RewardRule::win_loss: return "win_loss";
    case RewardRule::piece_difference: return "piece_difference";
    case RewardRule::damage_dealt: return "damage_dealt";
  }
  return "?";
}

const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::full_game: return "full_game";
    case ScenarioKind::single_turn: return "single_turn";
    case ScenarioKind::single_shooting_maximize: return "single_shooting_maximize";
  }
  return "?";
}

ScenarioKind parse_scenario(std::string_view name) {
  for (auto k : {ScenarioKind::full_game, ScenarioKind::single_turn,
                 ScenarioKind::single_shooting_maximize}) {
    if (name == to_string(k)) return k;
  }
  throw Error("unknown scenario: " + std::string(name));
}

ScenarioSpec scenario_spec(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::full_game: return {k, false, std::nullopt, RewardRule::win_loss};
    case ScenarioKind::single_turn: return {k, true, 1, RewardRule::piece_difference};
    case ScenarioKind::single_shooting_maximize: return {k, true, std::nullopt, RewardRule::damage_dealt};
  }
  throw Error("unknown scenario");
}

std::array<std::vector<Datasheet>, 2> default_rosters(const Registry& registry) {
  if (registry.factions().count("AST") != 0 && registry.factions().count("HIV") != 0) {
    return {roster(registry, "AST"), roster(registry, "HIV")};
  }
  if (registry.factions().size() < 2) throw Error("registry needs at least two factions");
  auto it = registry.factions().begin();
  const std::string first = *it++;
  const std::string second = *it;
  auto a = roster(registry, first);
  auto b = roster(registry, second);
  if (a.size() > static_cast<std::size_t>(kMaxUnitsPerSide)) a.resize(kMaxUnitsPerSide);
  if (b.size() > static_cast<std::size_t>(kMaxUnitsPerSide)) b.resize(kMaxUnitsPerSide);
  return {a, b};
}

namespace {

/// Empty board with the given units added but not placed.
GameState blank(const std::array<std::vector<Datasheet>, 2>& rosters, std::uint64_t seed) {
  GameState s;
  for (int p = 0; p < 2; ++p) {
    const auto& r = rosters[static_cast<std::size_t>(p)];
    if (!r.empty()) s.players[static_cast<std::size_t>(p)].faction = r.front().faction;
    for (std::size_t i = 0; i < r.size(); ++i) {
      UnitState u;
      u.unit_id = p * kMaxUnitsPerSide + static_cast<int>(i);
      u.owner = p;
      u.datasheet = static_cast<int>(s.datasheets.size());
      u.models.assign(static_cast<std::size_t>(r[i].models), ModelState{{0, 0}, r[i].wounds_per_model});
      s.datasheets.push_back(r[i]);
      s.units.push_back(std::move(u));
    }
  }
  for (std::size_t i = 0; i < s.objectives.size(); ++i) s.objectives[i].position = kObjectivePositions[i];
  s.rng = RngStream(seed);
  return s;
}

Transition single_turn(std::uint64_t seed, const Registry& registry) {
  auto rosters = default_rosters(registry);
  for (auto& r : rosters) {
    if (r.size() > 4) r.resize(4);
  }
  Transition t{blank(rosters, seed), {}};
  GameState& s = t.state;
  s.scenario = ScenarioKind::single_turn;
  for (std::size_t i = 0; i < rosters[0].size(); ++i) {
    place_unit(s, static_cast<int>(i), placements::kSingleTurnP0[i]);
  }
  for (std::size_t i = 0; i < rosters[1].size(); ++i) {
    place_unit(s, kMaxUnitsPerSide + static_cast<int>(i), placements::kSingleTurnP1[i]);
  }
  s.sequence_stack.push_back(make_frame(Sequence::game, steps::kGameAfterRound));
  s.sequence_stack.push_back(make_frame(Sequence::round));
  run_until_decision(s, &t.events);
  return t;
}

Transition single_shooting(std::uint64_t seed, const Registry& registry) {
  const Registry& r = registry.find(placements::kShooterAName) != nullptr &&
                              registry.find(placements::kShooterBName) != nullptr &&
                              registry.find(placements::kShootingTargetName) != nullptr
                          ? registry
                          : builtin_registry();
  Transition t{blank({std::vector<Datasheet>{r.at(placements::kShooterAName),
                                             r.at(placements::kShooterBName)},
                      std::vector<Datasheet>{r.at(placements::kShootingTargetName)}},
                     seed),
               {}};
  GameState& s = t.state;
  s.scenario = ScenarioKind::single_shooting_maximize;
  s.phase = Phase::shooting;
  place_unit(s, 0, placements::kShooterA);
  place_unit(s, 1, placements::kShooterB);
  place_unit(s, kMaxUnitsPerSide, placements::kShootingTarget);
  s.sequence_stack.push_back(make_frame(Sequence::game, steps::kGameAfterRound));
  s.sequence_stack.push_back(make_frame(Sequence::shooting_phase, steps::kShootingSelect));
  run_until_decision(s, &t.events);
  return t;
}

}  // namespace

Transition start_scenario(ScenarioKind k, std::uint64_t seed, const Registry& registry) {
  switch (k) {
    case ScenarioKind::full_game: return start_game(default_rosters(registry), seed);
    case ScenarioKind::single_turn: return single_turn(seed, registry);
    case ScenarioKind::single_shooting_maximize: return single_shooting(seed, registry);
  }
  throw Error("unknown scenario");
}

GameState make_scenario(ScenarioKind k, std::uint64_t seed, const Registry& registry) {
  return start_scenario(k, seed, registry).state;
}

double reward(const GameState& s, int player) {
  if (!s.terminal) throw Error("reward of a non-terminal state");
  if (player != 0 && player != 1) throw Error("player must be 0 or 1");
  switch (scenario_spec(s.scenario).reward_rule) {
    case RewardRule::win_loss:
      if (s.terminal->winner == kDraw) return 0.0;
      return s.terminal->winner == player ? 1.0 : -1.0;
    case RewardRule::piece_difference: {
      const int total = s.starting_models(0) + s.starting_models(1);
      const int diff = s.alive_models(player) - s.alive_models(1 - player);
      return static_cast<double>(diff) / total;
    }
    case RewardRule::damage_dealt: {
      if (player != 0) return 0.0;
      int start = 0;
      int left = 0;
      for (const auto& u : s.units) {
        if (u.owner != 1) continue;
        start += s.sheet(u).total_wounds();
        left += u.wounds_remaining();
      }
      return static_cast<double>(start - left) / start;
    }
  }
  return 0.0;
}

}  // namespace fourhammer
