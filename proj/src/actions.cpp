#include "fourhammer/actions.hpp"

#include <algorithm>

#include "fourhammer/events.hpp"
#include "fourhammer/rules.hpp"

namespace fourhammer {

const char* to_string(MoveKind k) {
  switch (k) {
    case MoveKind::stationary: return "stationary";
    case MoveKind::normal: return "normal";
    case MoveKind::advance: return "advance";
    case MoveKind::fall_back: return "fall_back";
  }
  return "?";
}

const char* to_string(DecisionKind k) {
  switch (k) {
    case DecisionKind::choose_turn_order: return "choose_turn_order";
    case DecisionKind::deploy_unit: return "deploy_unit";
    case DecisionKind::deploy_position: return "deploy_position";
    case DecisionKind::select_move_unit: return "select_move_unit";
    case DecisionKind::choose_move_kind: return "choose_move_kind";
    case DecisionKind::move_target: return "move_target";
    case DecisionKind::select_shoot_unit: return "select_shoot_unit";
    case DecisionKind::shoot_target: return "shoot_target";
    case DecisionKind::select_charge_unit: return "select_charge_unit";
    case DecisionKind::charge_target: return "charge_target";
    case DecisionKind::reroll_offer: return "reroll_offer";
    case DecisionKind::select_fight_unit: return "select_fight_unit";
    case DecisionKind::fight_target: return "fight_target";
    case DecisionKind::allocate_model: return "allocate_model";
  }
  return "?";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::phase_started: return "phase_started";
    case EventKind::dice_rolled: return "dice_rolled";
    case EventKind::reroll_used: return "reroll_used";
    case EventKind::move_made: return "move_made";
    case EventKind::damage_dealt: return "damage_dealt";
    case EventKind::model_slain: return "model_slain";
    case EventKind::unit_destroyed: return "unit_destroyed";
    case EventKind::battle_shock_result: return "battle_shock_result";
    case EventKind::charge_result: return "charge_result";
    case EventKind::vp_scored: return "vp_scored";
    case EventKind::cp_changed: return "cp_changed";
    case EventKind::game_over: return "game_over";
  }
  return "?";
}

const char* to_string(RollPurpose p) {
  switch (p) {
    case RollPurpose::roll_off: return "roll_off";
    case RollPurpose::advance: return "advance";
    case RollPurpose::charge: return "charge";
    case RollPurpose::battle_shock: return "battle_shock";
    case RollPurpose::hit: return "hit";
    case RollPurpose::wound: return "wound";
    case RollPurpose::save: return "save";
  }
  return "?";
}

bool DecisionRequest::contains(const Action& a) const {
  return std::find(options.begin(), options.end(), a) != options.end();
}

namespace {

int checked(int value, int count, const char* what) {
  if (value < 0 || value >= count) {
    throw Error(std::string(what) + " " + std::to_string(value) + " outside 0.." +
                std::to_string(count - 1));
  }
  return value;
}

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

}  // namespace

int action_to_id(const Action& a) {
  return std::visit(
      Overload{
          [](const Pass&) { return kIdPass; },
          [](const ChooseFirst&) { return kIdChooseFirst; },
          [](const ChooseSecond&) { return kIdChooseSecond; },
          [](const RerollAccept&) { return kIdRerollAccept; },
          [](const RerollDecline&) { return kIdRerollDecline; },
          [](const ChooseMoveKind& m) {
            return kIdMoveKindBase + checked(static_cast<int>(m.kind), 4, "move kind");
          },
          [](const SelectUnit& u) { return kIdSelectUnitBase + checked(u.unit, kMaxUnits, "unit"); },
          [](const TargetUnit& u) { return kIdTargetUnitBase + checked(u.unit, kMaxUnits, "unit"); },
          [](const AllocateModel& m) {
            return kIdAllocateModelBase + checked(m.model, bounds::models.max, "model");
          },
          [](const TargetSquare& t) {
            if (!on_board(t.square)) {
              throw Error("square (" + std::to_string(t.square.x) + ", " +
                          std::to_string(t.square.y) + ") is off the board");
            }
            return kIdTargetSquareBase + square_index(t.square);
          },
      },
      a);
}

Action id_to_action(int id) {
  checked(id, kActionCount, "action id");
  if (id == kIdPass) return Pass{};
  if (id == kIdChooseFirst) return ChooseFirst{};
  if (id == kIdChooseSecond) return ChooseSecond{};
  if (id == kIdRerollAccept) return RerollAccept{};
  if (id == kIdRerollDecline) return RerollDecline{};
  if (id < kIdSelectUnitBase) return ChooseMoveKind{static_cast<MoveKind>(id - kIdMoveKindBase)};
  if (id < kIdTargetUnitBase) return SelectUnit{id - kIdSelectUnitBase};
  if (id < kIdAllocateModelBase) return TargetUnit{id - kIdTargetUnitBase};
  if (id < kIdTargetSquareBase) return AllocateModel{id - kIdAllocateModelBase};
  return TargetSquare{square_at(id - kIdTargetSquareBase)};
}

namespace {

std::string unit_label(const GameState& s, int unit_id) {
  std::string out = "unit " + std::to_string(unit_id);
  if (const UnitState* u = s.find_unit(unit_id)) out += " (" + s.sheet(*u).name + ")";
  return out;
}

std::string square_label(GridPos p) {
  return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
}

}  // namespace

std::string describe(const Action& a, DecisionKind context, const GameState& s) {
  const int subject = decision_subject_unit(s);
  return std::visit(
      Overload{
          [&](const Pass&) -> std::string {
            switch (context) {
              case DecisionKind::select_move_unit: return "end movement phase";
              case DecisionKind::select_shoot_unit: return "end shooting phase";
              case DecisionKind::select_charge_unit: return "end charge phase";
              default: return "pass";
            }
          },
          [](const ChooseFirst&) -> std::string { return "take the first turn"; },
          [](const ChooseSecond&) -> std::string { return "take the second turn"; },
          [](const RerollAccept&) -> std::string { return "re-roll for 1 CP"; },
          [](const RerollDecline&) -> std::string { return "keep the roll"; },
          [&](const ChooseMoveKind& m) -> std::string {
            switch (m.kind) {
              case MoveKind::stationary: return "remain stationary";
              case MoveKind::normal: return "normal move";
              case MoveKind::advance: return "advance (roll 1d6 extra)";
              case MoveKind::fall_back: return "fall back";
            }
            return "?";
          },
          [&](const SelectUnit& u) -> std::string {
            switch (context) {
              case DecisionKind::deploy_unit: return "deploy " + unit_label(s, u.unit);
              case DecisionKind::select_move_unit: return "move " + unit_label(s, u.unit);
              case DecisionKind::select_shoot_unit: return "shoot with " + unit_label(s, u.unit);
              case DecisionKind::select_charge_unit: return "charge with " + unit_label(s, u.unit);
              case DecisionKind::select_fight_unit: return "fight with " + unit_label(s, u.unit);
              default: return "select " + unit_label(s, u.unit);
            }
          },
          [&](const TargetUnit& u) -> std::string {
            switch (context) {
              case DecisionKind::shoot_target: return "shoot at " + unit_label(s, u.unit);
              case DecisionKind::charge_target: return "charge " + unit_label(s, u.unit);
              case DecisionKind::fight_target: return "fight " + unit_label(s, u.unit);
              default: return "target " + unit_label(s, u.unit);
            }
          },
          [&](const AllocateModel& m) -> std::string {
            std::string out = "allocate to model " + std::to_string(m.model);
            if (const UnitState* u = s.find_unit(subject)) {
              if (m.model >= 0 && m.model < static_cast<int>(u->models.size())) {
                out += " (" + std::to_string(u->models[static_cast<std::size_t>(m.model)]
                                                 .wounds_remaining) +
                       " wounds left)";
              }
            }
            return out;
          },
          [&](const TargetSquare& t) -> std::string {
            if (context == DecisionKind::deploy_position) {
              return "deploy unit " + std::to_string(subject) + " at " + square_label(t.square);
            }
            return "move unit " + std::to_string(subject) + " to " + square_label(t.square);
          },
      },
      a);
}

}  // namespace fourhammer
