#pragma once

// Independent reference computations. Nothing here calls the engine's own
// threshold or probability helpers.

#include <random>
#include <vector>

#include "fourhammer/rules.hpp"
#include "support.hpp"

namespace oracle {

/// Wound roll needed, from the strength/toughness ratio.
inline int wound_needed(int s, int t) {
  const double r = static_cast<double>(s) / t;
  if (r >= 2.0) return 2;
  if (r > 1.0) return 3;
  if (r == 1.0) return 4;
  if (r <= 0.5) return 6;
  return 5;
}

struct Profile {
  int hit = 4;     // hit roll needed
  int wound = 4;   // wound roll needed
  int save = 7;    // save roll needed, 7 = none
  int damage = 1;
  // Engine inputs that produce these thresholds.
  int strength = 4;
  int toughness = 4;
  int sv = 6;
  int ap = 0;
};

/// Expected damage of one attack by enumerating all 216 (hit, wound, save)
/// die triples with the unmodified-1 and unmodified-6 conventions.
inline double enumerate_expected_damage(const Profile& p) {
  int successes = 0;
  for (int h = 1; h <= 6; ++h) {
    const bool hit = h != 1 && (h == 6 || h >= p.hit);
    for (int w = 1; w <= 6; ++w) {
      const bool wound = w != 1 && (w == 6 || w >= p.wound);
      for (int sv = 1; sv <= 6; ++sv) {
        const bool saved = sv != 1 && sv >= p.save;
        if (hit && wound && !saved) ++successes;
      }
    }
  }
  return successes * p.damage / 216.0;
}

inline double success_probability(const Profile& p) {
  return enumerate_expected_damage(p) / p.damage;
}

/// Random profile whose per-attack success chance is at least `floor_p`.
inline Profile random_profile(std::mt19937_64& rng, double floor_p) {
  std::uniform_int_distribution<int> skill(2, 6), st(1, 10), sv(2, 6), ap(0, 3), dmg(1, 3);
  while (true) {
    Profile p;
    p.hit = skill(rng);
    p.strength = st(rng);
    p.toughness = st(rng);
    p.wound = wound_needed(p.strength, p.toughness);
    p.sv = sv(rng);
    p.ap = ap(rng);
    p.save = std::min(p.sv + p.ap, 7);
    p.damage = dmg(rng);
    if (success_probability(p) >= floor_p) return p;
  }
}

/// Mean damage of `n` engine-resolved attacks with this profile against a
/// single-model target whose wounds are restored after every attack.
inline double monte_carlo_damage(const Profile& p, int n, std::uint64_t seed) {
  using namespace fourhammer;
  const Datasheet attacker = testing::sheet(
      1, 4, 4, std::nullopt, 1,
      {testing::ranged(24, p.hit, p.strength, p.ap, p.damage), testing::melee(4, 4, 0, 1)});
  const Datasheet target =
      testing::sheet(1, p.toughness, p.sv, std::nullopt, p.damage, {testing::melee(4, 4, 0, 1)});
  GameState s = testing::duel(attacker, target, seed);
  const AttackRef ref{0, 0, 0, kMaxUnitsPerSide};
  long long total = 0;
  for (int i = 0; i < n; ++i) {
    total += resolve_single_attack(s, ref);
    s.units[1].models[0].wounds_remaining = p.damage;
    s.terminal.reset();  // a slain target ends the game; start over
  }
  return static_cast<double>(total) / n;
}

/// Expected damage the whole unit deals to a target with one shooting
/// activation, ignoring wound caps (valid while the target cannot die).
inline double expected_unit_damage(const fourhammer::Datasheet& shooter,
                                   const fourhammer::Datasheet& target) {
  double total = 0.0;
  for (const auto& w : shooter.weapons) {
    if (w.kind != fourhammer::WeaponKind::ranged) continue;
    Profile p;
    p.hit = w.skill;
    p.wound = wound_needed(w.strength, target.toughness);
    int save = std::min(target.save + w.armor_penetration, 7);
    if (target.invulnerable_save) save = std::min(save, *target.invulnerable_save);
    p.save = save;
    p.damage = w.damage;
    total += shooter.models * w.attacks * enumerate_expected_damage(p);
  }
  return total;
}

}  // namespace oracle
