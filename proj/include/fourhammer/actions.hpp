#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fourhammer/board.hpp"

namespace fourhammer {

enum class MoveKind : std::uint8_t { stationary, normal, advance, fall_back };
const char* to_string(MoveKind k);

struct Pass {
  bool operator==(const Pass&) const = default;
};
struct ChooseFirst {
  bool operator==(const ChooseFirst&) const = default;
};
struct ChooseSecond {
  bool operator==(const ChooseSecond&) const = default;
};
struct RerollAccept {
  bool operator==(const RerollAccept&) const = default;
};
struct RerollDecline {
  bool operator==(const RerollDecline&) const = default;
};
struct ChooseMoveKind {
  MoveKind kind = MoveKind::stationary;
  bool operator==(const ChooseMoveKind&) const = default;
};
struct SelectUnit {
  int unit = 0;
  bool operator==(const SelectUnit&) const = default;
};
struct TargetUnit {
  int unit = 0;
  bool operator==(const TargetUnit&) const = default;
};
struct AllocateModel {
  int model = 0;
  bool operator==(const AllocateModel&) const = default;
};
struct TargetSquare {
  GridPos square;
  bool operator==(const TargetSquare&) const = default;
};

using Action = std::variant<Pass, ChooseFirst, ChooseSecond, RerollAccept, RerollDecline,
                            ChooseMoveKind, SelectUnit, TargetUnit, AllocateModel, TargetSquare>;

enum class DecisionKind : std::uint8_t {
  choose_turn_order,
  deploy_unit,
  deploy_position,
  select_move_unit,
  choose_move_kind,
  move_target,
  select_shoot_unit,
  shoot_target,
  select_charge_unit,
  charge_target,
  reroll_offer,
  select_fight_unit,
  fight_target,
  allocate_model,
};
inline constexpr int kDecisionKindCount = 14;
const char* to_string(DecisionKind k);

struct DecisionRequest {
  DecisionKind kind = DecisionKind::choose_turn_order;
  int actor = 0;
  std::vector<Action> options;  // ascending action id

  bool contains(const Action& a) const;
  bool operator==(const DecisionRequest&) const = default;
};

// Flat action catalog used for RL masks.
inline constexpr int kActionCount = 1371;
inline constexpr int kIdPass = 0;
inline constexpr int kIdChooseFirst = 1;
inline constexpr int kIdChooseSecond = 2;
inline constexpr int kIdRerollAccept = 3;
inline constexpr int kIdRerollDecline = 4;
inline constexpr int kIdMoveKindBase = 5;
inline constexpr int kIdSelectUnitBase = 9;
inline constexpr int kIdTargetUnitBase = 25;
inline constexpr int kIdAllocateModelBase = 41;
inline constexpr int kIdTargetSquareBase = 51;

/// Throws Error if a field of the action is outside its catalog range.
int action_to_id(const Action& a);
/// Throws Error for ids outside 0..1370.
Action id_to_action(int id);

/// Short English rendering, e.g. "move unit 3 to (10, 4)".
std::string describe(const Action& a, DecisionKind context, const GameState& s);

}  // namespace fourhammer
