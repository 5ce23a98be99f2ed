#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "fourhammer/board.hpp"
#include "fourhammer/rules.hpp"

namespace fourhammer {

enum class RewardRule : std::uint8_t { win_loss, piece_difference, damage_dealt };
const char* to_string(RewardRule r);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::full_game;
  bool fixed_rosters = false;
  std::optional<int> turn_limit;  // turns per player
  RewardRule reward_rule = RewardRule::win_loss;
};

const char* to_string(ScenarioKind k);
/// Throws Error("unknown scenario: <name>").
ScenarioKind parse_scenario(std::string_view name);
ScenarioSpec scenario_spec(ScenarioKind k);

/// Fixed placements of the toy scenarios (anchor squares by roster order).
namespace placements {
inline constexpr std::array<GridPos, 4> kSingleTurnP0{
    GridPos{8, 8}, GridPos{16, 8}, GridPos{26, 8}, GridPos{34, 8}};
inline constexpr std::array<GridPos, 4> kSingleTurnP1{
    GridPos{8, 19}, GridPos{16, 19}, GridPos{26, 19}, GridPos{34, 19}};
inline constexpr GridPos kShooterA{10, 5};
inline constexpr GridPos kShooterB{30, 5};
inline constexpr GridPos kShootingTarget{20, 20};
inline constexpr const char* kShooterAName = "Intercessor Squad";
inline constexpr const char* kShooterBName = "Redemptor Dreadnought";
inline constexpr const char* kShootingTargetName = "Carnifex";
}  // namespace placements

/// The two faction rosters a registry provides for full games: AST against
/// HIV when both exist, otherwise the first two factions by name.
std::array<std::vector<Datasheet>, 2> default_rosters(const Registry& registry);

/// Initial state plus the events emitted while reaching the first decision.
Transition start_scenario(ScenarioKind k, std::uint64_t seed,
                          const Registry& registry = builtin_registry());
GameState make_scenario(ScenarioKind k, std::uint64_t seed,
                        const Registry& registry = builtin_registry());

/// Throws Error on non-terminal states or players other than 0 and 1.
double reward(const GameState& s, int player);

}  // namespace fourhammer
