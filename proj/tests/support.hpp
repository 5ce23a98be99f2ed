#pragma once

#include <random>
#include <vector>

#include "fourhammer/agents.hpp"
#include "fourhammer/encodings.hpp"
#include "fourhammer/wire.hpp"

namespace testing {

using namespace fourhammer;

inline PlayedGame random_game(std::uint64_t seed, ScenarioKind kind = ScenarioKind::full_game) {
  RandomAgent p0(seed);
  RandomAgent p1(seed + 1000003);
  return play_game(kind, seed, builtin_registry(), p0, p1);
}

/// Every decision state of a random game, in order.
inline std::vector<GameState> random_game_states(std::uint64_t seed,
                                                 ScenarioKind kind = ScenarioKind::full_game) {
  std::vector<GameState> out;
  GameState s = make_scenario(kind, seed);
  std::mt19937_64 rng(seed);
  while (!s.terminal) {
    out.push_back(s);
    const auto d = pending_decision(s);
    std::uniform_int_distribution<std::size_t> pick(0, d.options.size() - 1);
    apply_in_place(s, d.options[pick(rng)]);
  }
  return out;
}

inline std::string events_text(const EventLog& log) {
  std::string out;
  for (const auto& e : log) out += event_to_json(e).dump() + "\n";
  return out;
}

/// Hand-built state with the given rosters, nothing deployed and an empty
/// sequence stack. Units are placed with place_unit by the caller.
inline GameState custom_state(const std::vector<Datasheet>& p0, const std::vector<Datasheet>& p1,
                              std::uint64_t seed = 0) {
  GameState s;
  s.rng = RngStream(seed);
  for (std::size_t i = 0; i < s.objectives.size(); ++i) s.objectives[i].position = kObjectivePositions[i];
  const std::vector<Datasheet>* rosters[2] = {&p0, &p1};
  for (int p = 0; p < 2; ++p) {
    for (std::size_t i = 0; i < rosters[p]->size(); ++i) {
      const Datasheet& d = (*rosters[p])[i];
      if (i == 0) s.players[static_cast<std::size_t>(p)].faction = d.faction;
      UnitState u;
      u.unit_id = p * kMaxUnitsPerSide + static_cast<int>(i);
      u.owner = p;
      u.datasheet = static_cast<int>(s.datasheets.size());
      u.models.assign(static_cast<std::size_t>(d.models), ModelState{{0, 0}, d.wounds_per_model});
      s.datasheets.push_back(d);
      s.units.push_back(u);
    }
  }
  return s;
}

/// One attacker unit (id 0) at (10, 10) and one target unit (id 8) at
/// (10, 12), for driving single attacks directly.
inline GameState duel(const Datasheet& attacker, const Datasheet& target, std::uint64_t seed) {
  GameState s = custom_state({attacker}, {target}, seed);
  place_unit(s, 0, {10, 10});
  place_unit(s, kMaxUnitsPerSide, {10, 12});
  return s;
}

/// First seed whose first two d6 faces satisfy `pred`.
template <class Pred>
std::uint64_t seed_where(Pred pred, std::uint64_t from = 0) {
  for (std::uint64_t seed = from;; ++seed) {
    RngStream r(seed);
    const int a = r.d6();
    const int b = r.d6();
    if (pred(a, b)) return seed;
  }
}

inline Datasheet sheet(int models, int toughness, int save, std::optional<int> inv, int wounds,
                       std::vector<WeaponProfile> weapons) {
  Datasheet d;
  d.name = "Test " + std::to_string(models) + "x" + std::to_string(wounds);
  d.faction = "TST";
  d.models = models;
  d.move = 6;
  d.toughness = toughness;
  d.save = save;
  d.invulnerable_save = inv;
  d.wounds_per_model = wounds;
  d.leadership = 7;
  d.objective_control = 1;
  d.weapons = std::move(weapons);
  return d;
}

inline WeaponProfile melee(int skill, int strength, int ap, int damage, int attacks = 1) {
  return {"Blade", WeaponKind::melee, 1, attacks, skill, strength, ap, damage};
}

inline WeaponProfile ranged(int range, int skill, int strength, int ap, int damage, int attacks = 1) {
  return {"Gun", WeaponKind::ranged, range, attacks, skill, strength, ap, damage};
}

}  // namespace testing
