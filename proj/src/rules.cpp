#include "fourhammer/rules.hpp"

#include <algorithm>
#include <cassert>

#include "geometry.hpp"

namespace fourhammer {

int hit_threshold(const WeaponProfile& w) { return w.skill; }

int wound_threshold(int strength, int toughness) {
  if (strength >= 2 * toughness) return 2;
  if (strength > toughness) return 3;
  if (strength == toughness) return 4;
  if (2 * strength <= toughness) return 6;
  return 5;
}

int save_threshold(const Datasheet& d, int ap) {
  int armour = std::min(d.save + ap, 7);
  if (d.invulnerable_save) armour = std::min(armour, *d.invulnerable_save);
  return armour;
}

bool hit_succeeds(int roll, int threshold) {
  if (roll == 1) return false;
  if (roll == 6) return true;
  return roll >= threshold;
}

bool wound_succeeds(int roll, int threshold) {
  if (roll == 1) return false;
  if (roll == 6) return true;
  return roll >= threshold;
}

bool save_succeeds(int roll, int threshold) { return roll != 1 && roll >= threshold; }

double two_d6_at_least(int needed) {
  int hits = 0;
  for (int a = 1; a <= 6; ++a) {
    for (int b = 1; b <= 6; ++b) {
      if (a + b >= needed) ++hits;
    }
  }
  return hits / 36.0;
}

SequenceFrame make_frame(Sequence seq, int step) {
  SequenceFrame f;
  f.sequence = seq;
  f.step = step;
  return f;
}

namespace {

using detail::Field;
using detail::owner_of_unit;

// Every sequence that pushes roll_dice receives the result in these slots.
constexpr int kDiceTotal = 6;
constexpr int kDiceFirst = 7;

namespace game {
enum Step { kRollOffP0, kRollOffP1, kRollOffCompare, kChooseOrder, kDeployUnit, kDeployPosition,
            kDeployNext, kBattle, kAfterRound };
constexpr int kRollP0 = 0, kWinner = 1, kDeployer = 2, kUnit = 3;
}  // namespace game
static_assert(game::kAfterRound == steps::kGameAfterRound);

namespace round_seq {
enum Step { kFirstTurn, kSecondTurn, kDone };
}
namespace turn {
enum Step { kStart, kMovement, kShooting, kCharge, kFight, kDone };
constexpr int kPlayer = 0;
}  // namespace turn
namespace command {
enum Step { kStart, kTests };
constexpr int kScan = 0;
}  // namespace command
namespace movement {
enum Step { kStart, kSelect, kKind, kAdvanceRolled, kTarget };
constexpr int kUnit = 0, kKindSlot = 1, kRange = 2;
}  // namespace movement
namespace shooting {
enum Step { kStart, kSelect, kTarget, kResolve };
constexpr int kUnit = 0, kTargetSlot = 1, kModel = 2, kWeapon = 3, kAttack = 4;
}  // namespace shooting
static_assert(shooting::kSelect == steps::kShootingSelect);
namespace charge {
enum Step { kStart, kSelect, kTarget };
constexpr int kUnit = 0;
}  // namespace charge
namespace fight {
enum Step { kStart, kPick, kSelect, kTarget, kResolve };
constexpr int kMode = 0, kPicker = 1, kUnit = 2, kTargetSlot = 3, kModel = 4, kWeapon = 5,
              kAttack = 6;
}  // namespace fight
namespace attack {
enum Step { kRollHit, kHitRolled, kWoundRolled, kAllocate, kRollSave, kSaveRolled };
constexpr int kAttacker = 0, kModel = 1, kWeapon = 2, kTarget = 3, kAllocated = 4;
}  // namespace attack
namespace dice {
enum Step { kRoll, kOffer, kDone };
constexpr int kCount = 0, kPurpose = 1, kActor = 2, kSubject = 3, kNeeded = 4, kRerollable = 5,
              kFirst = 6, kSecond = 7;
}  // namespace dice
namespace shock {
enum Step { kRoll, kResolve };
constexpr int kUnit = 0;
}  // namespace shock
namespace charge_res {
enum Step { kRoll, kResolve };
constexpr int kUnit = 0, kTarget = 1;
}  // namespace charge_res

int other(int player) { return 1 - player; }

bool below_half_strength(const GameState& s, const UnitState& u) {
  if (u.models.size() == 1) {
    return u.models[0].wounds_remaining * 2 < s.sheet(u).wounds_per_model;
  }
  return u.alive_models() * 2 < static_cast<int>(u.models.size());
}

int nearest_distance(GridPos from, const UnitState& target) {
  int best = 1 << 20;
  for (const auto& m : target.models) {
    if (m.alive()) best = std::min(best, chebyshev_distance(from, m.position));
  }
  return best;
}

GridPos anchor_pos(const UnitState& u) { return u.models[static_cast<std::size_t>(u.anchor())].position; }

/// Alive models in placement order: the anchor first, a wounded model last,
/// the rest by index. Keeping the wounded model a leaf of the packed
/// formation means it can always be removed without breaking coherency.
std::vector<int> placement_order(const GameState& s, const UnitState& u) {
  std::vector<int> order;
  const int anchor = u.anchor();
  const int full = s.sheet(u).wounds_per_model;
  int wounded = -1;
  for (int i = 0; i < static_cast<int>(u.models.size()); ++i) {
    const auto& m = u.models[static_cast<std::size_t>(i)];
    if (!m.alive()) continue;
    if (i != anchor && m.wounds_remaining < full) {
      wounded = i;
      continue;
    }
    order.push_back(i);
  }
  if (wounded >= 0) order.push_back(wounded);
  return order;
}

bool can_reroll(const GameState& s, int player, int subject_unit) {
  const PlayerState& p = s.players[player];
  if (p.command_points < 1 || p.stratagem_used_this_phase) return false;
  if (subject_unit >= 0) {
    const UnitState* u = s.find_unit(subject_unit);
    if (u != nullptr && u->flags.has(UnitFlag::battle_shocked)) return false;
  }
  return true;
}

bool weapon_in_range(const ModelState& m, const WeaponProfile& w, const UnitState& target) {
  return nearest_distance(m.position, target) <= w.range_squares;
}

bool can_shoot_at(const GameState& s, const UnitState& shooter, const UnitState& target) {
  const Datasheet& sheet = s.sheet(shooter);
  for (const auto& m : shooter.models) {
    if (!m.alive()) continue;
    for (const auto& w : sheet.weapons) {
      if (w.kind == WeaponKind::ranged && weapon_in_range(m, w, target)) return true;
    }
  }
  return false;
}

class Engine {
 public:
  Engine(GameState& s, EventLog* log) : s_(s), log_(log) {}

  /// Run until a free decision or the end of the game. When `floor` is
  /// non-negative, also stop once the stack shrinks to that depth.
  void run(std::size_t floor = 0, bool take_lowest = false) {
    std::vector<Action> opts;
    while (!s_.terminal && s_.sequence_stack.size() > floor) {
      if (pending_kind()) {
        const bool forced_only = s_.auto_resolve || take_lowest;
        if (!forced_only) return;
        options(opts, 2);
        if (opts.empty()) throw InternalError("decision with no legal options");
        if (opts.size() == 1 || take_lowest) {
          feed(opts.front());
          continue;
        }
        return;
      }
      step();
    }
  }

  std::optional<DecisionKind> pending_kind() const {
    if (s_.terminal || s_.sequence_stack.empty()) return std::nullopt;
    const SequenceFrame& f = s_.sequence_stack.back();
    switch (f.sequence) {
      case Sequence::game:
        if (f.step == game::kChooseOrder) return DecisionKind::choose_turn_order;
        if (f.step == game::kDeployUnit) return DecisionKind::deploy_unit;
        if (f.step == game::kDeployPosition) return DecisionKind::deploy_position;
        break;
      case Sequence::movement_phase:
        if (f.step == movement::kSelect) return DecisionKind::select_move_unit;
        if (f.step == movement::kKind) return DecisionKind::choose_move_kind;
        if (f.step == movement::kTarget) return DecisionKind::move_target;
        break;
      case Sequence::shooting_phase:
        if (f.step == shooting::kSelect) return DecisionKind::select_shoot_unit;
        if (f.step == shooting::kTarget) return DecisionKind::shoot_target;
        break;
      case Sequence::charge_phase:
        if (f.step == charge::kSelect) return DecisionKind::select_charge_unit;
        if (f.step == charge::kTarget) return DecisionKind::charge_target;
        break;
      case Sequence::fight_phase:
        if (f.step == fight::kSelect) return DecisionKind::select_fight_unit;
        if (f.step == fight::kTarget) return DecisionKind::fight_target;
        break;
      case Sequence::roll_dice:
        if (f.step == dice::kOffer) return DecisionKind::reroll_offer;
        break;
      case Sequence::single_attack:
        if (f.step == attack::kAllocate) return DecisionKind::allocate_model;
        break;
      default:
        break;
    }
    return std::nullopt;
  }

  int actor() const {
    const SequenceFrame& f = s_.sequence_stack.back();
    switch (f.sequence) {
      case Sequence::game:
        return f.step == game::kChooseOrder ? f.locals[game::kWinner] : f.locals[game::kDeployer];
      case Sequence::fight_phase:
        return f.locals[fight::kPicker];
      case Sequence::roll_dice:
        return f.locals[dice::kActor];
      case Sequence::single_attack:
        return owner_of_unit(f.locals[attack::kTarget]);
      default:
        return s_.active_player;
    }
  }

  /// Legal options in ascending action id; stops after `limit` when > 0.
  void options(std::vector<Action>& out, int limit = 0) const {
    out.clear();
    const auto kind = pending_kind();
    if (!kind) return;
    const SequenceFrame& f = s_.sequence_stack.back();
    auto full = [&] { return limit > 0 && static_cast<int>(out.size()) >= limit; };
    switch (*kind) {
      case DecisionKind::choose_turn_order:
        out.emplace_back(ChooseFirst{});
        out.emplace_back(ChooseSecond{});
        break;
      case DecisionKind::deploy_unit:
        for (const auto& u : s_.units) {
          if (u.owner == f.locals[game::kDeployer] && !u.deployed) {
            out.emplace_back(SelectUnit{u.unit_id});
            if (full()) return;
          }
        }
        break;
      case DecisionKind::deploy_position:
        deploy_squares(f.locals[game::kUnit], out, limit);
        break;
      case DecisionKind::select_move_unit:
        out.emplace_back(Pass{});
        for (const auto& u : s_.units) {
          if (full()) return;
          if (u.owner == s_.active_player && u.on_table() && !u.flags.has(UnitFlag::moved)) {
            out.emplace_back(SelectUnit{u.unit_id});
          }
        }
        break;
      case DecisionKind::choose_move_kind:
        move_kinds(f.locals[movement::kUnit], out);
        break;
      case DecisionKind::move_target:
        move_squares(f.locals[movement::kUnit], static_cast<MoveKind>(f.locals[movement::kKindSlot]),
                     f.locals[movement::kRange], out, limit);
        break;
      case DecisionKind::select_shoot_unit:
        if (s_.scenario != ScenarioKind::single_shooting_maximize) out.emplace_back(Pass{});
        for (const auto& u : s_.units) {
          if (full()) return;
          if (u.owner == s_.active_player && can_shoot(u)) out.emplace_back(SelectUnit{u.unit_id});
        }
        break;
      case DecisionKind::shoot_target: {
        const UnitState& shooter = *s_.find_unit(f.locals[shooting::kUnit]);
        for (const auto& t : s_.units) {
          if (full()) return;
          if (valid_shot(shooter, t)) out.emplace_back(TargetUnit{t.unit_id});
        }
        break;
      }
      case DecisionKind::select_charge_unit:
        out.emplace_back(Pass{});
        for (const auto& u : s_.units) {
          if (full()) return;
          if (u.owner == s_.active_player && can_charge(u)) out.emplace_back(SelectUnit{u.unit_id});
        }
        break;
      case DecisionKind::charge_target: {
        const UnitState& unit = *s_.find_unit(f.locals[charge::kUnit]);
        for (const auto& t : s_.units) {
          if (full()) return;
          if (valid_charge_target(unit, t)) out.emplace_back(TargetUnit{t.unit_id});
        }
        break;
      }
      case DecisionKind::reroll_offer:
        out.emplace_back(RerollAccept{});
        out.emplace_back(RerollDecline{});
        break;
      case DecisionKind::select_fight_unit:
        for (const auto& u : s_.units) {
          if (full()) return;
          if (can_fight(u, f.locals[fight::kMode], f.locals[fight::kPicker])) {
            out.emplace_back(SelectUnit{u.unit_id});
          }
        }
        break;
      case DecisionKind::fight_target:
        for (int id : engaged_units(s_, f.locals[fight::kUnit])) {
          out.emplace_back(TargetUnit{id});
          if (full()) return;
        }
        break;
      case DecisionKind::allocate_model:
        allocation_options(*s_.find_unit(f.locals[attack::kTarget]), out);
        break;
    }
    if (limit > 0 && static_cast<int>(out.size()) > limit) out.resize(static_cast<std::size_t>(limit));
  }

  /// Cheap legality check for a single action.
  bool legal(const Action& a) const {
    const auto kind = pending_kind();
    if (!kind) return false;
    const SequenceFrame& f = s_.sequence_stack.back();
    if (const auto* sq = std::get_if<TargetSquare>(&a)) {
      if (!on_board(sq->square)) return false;
      if (*kind == DecisionKind::deploy_position) {
        return deploy_square_ok(f.locals[game::kUnit], sq->square);
      }
      if (*kind == DecisionKind::move_target) {
        return move_square_ok(f.locals[movement::kUnit],
                              static_cast<MoveKind>(f.locals[movement::kKindSlot]),
                              f.locals[movement::kRange], sq->square);
      }
      return false;
    }
    std::vector<Action> opts;
    options(opts);
    return std::find(opts.begin(), opts.end(), a) != opts.end();
  }

  void feed(const Action& a) {
    SequenceFrame& f = s_.sequence_stack.back();
    switch (f.sequence) {
      case Sequence::game: feed_game(f, a); break;
      case Sequence::movement_phase: feed_movement(f, a); break;
      case Sequence::shooting_phase: feed_shooting(f, a); break;
      case Sequence::charge_phase: feed_charge(f, a); break;
      case Sequence::fight_phase: feed_fight(f, a); break;
      case Sequence::roll_dice: feed_dice(f, a); break;
      case Sequence::single_attack:
        f.locals[attack::kAllocated] = std::get<AllocateModel>(a).model;
        f.step = attack::kRollSave;
        break;
      default:
        throw InternalError("no decision pending in this sequence");
    }
  }

  void finish(GameResult result) {
    s_.terminal = result;
    s_.phase = Phase::end;
    s_.sequence_stack.clear();
    emit(EventKind::game_over, kNoActor,
         {result.winner, result.vp[0], result.vp[1], result.budget_exhausted ? 1 : 0});
  }

  void finish_by_vp() {
    GameResult r;
    r.vp = {s_.players[0].victory_points, s_.players[1].victory_points};
    r.winner = r.vp[0] > r.vp[1] ? 0 : (r.vp[1] > r.vp[0] ? 1 : kDraw);
    finish(r);
  }

  void finish_budget_draw() {
    GameResult r;
    r.vp = {s_.players[0].victory_points, s_.players[1].victory_points};
    r.budget_exhausted = true;
    finish(r);
  }

  void push(Sequence seq, std::initializer_list<std::pair<int, int>> locals = {}) {
    if (s_.sequence_stack.size() >= static_cast<std::size_t>(kMaxStackDepth)) {
      throw InternalError("sequence stack overflow");
    }
    SequenceFrame f = make_frame(seq);
    for (const auto& [k, v] : locals) f.locals[static_cast<std::size_t>(k)] = v;
    s_.sequence_stack.push_back(f);
  }

 private:
  void emit(EventKind kind, int actor, std::vector<std::int32_t> payload) {
    const std::uint64_t ordinal = s_.next_event_ordinal++;
    if (log_ != nullptr) log_->push_back({ordinal, kind, actor, std::move(payload)});
  }

  void pop() { s_.sequence_stack.pop_back(); }

  void push_roll(int count, RollPurpose purpose, int actor, int subject, int needed,
                 bool rerollable) {
    push(Sequence::roll_dice, {{dice::kCount, count},
                               {dice::kPurpose, static_cast<int>(purpose)},
                               {dice::kActor, actor},
                               {dice::kSubject, subject},
                               {dice::kNeeded, needed},
                               {dice::kRerollable, rerollable ? 1 : 0}});
  }

  void start_phase(Phase p) {
    s_.phase = p;
    s_.players[0].stratagem_used_this_phase = false;
    s_.players[1].stratagem_used_this_phase = false;
    emit(EventKind::phase_started, s_.active_player,
         {static_cast<int>(p), s_.round, s_.active_player});
  }

  // ------------------------------------------------------------ eligibility

  bool can_shoot(const UnitState& u) const {
    if (!u.on_table() || u.flags.has(UnitFlag::shot) || u.flags.has(UnitFlag::advanced) ||
        u.flags.has(UnitFlag::fell_back) || !s_.sheet(u).has_ranged() || is_engaged(s_, u)) {
      return false;
    }
    for (const auto& t : s_.units) {
      if (valid_shot(u, t)) return true;
    }
    return false;
  }

  bool valid_shot(const UnitState& shooter, const UnitState& target) const {
    return target.owner != shooter.owner && target.on_table() && !is_engaged(s_, target) &&
           can_shoot_at(s_, shooter, target);
  }

  bool can_charge(const UnitState& u) const {
    if (!u.on_table() || u.flags.has(UnitFlag::advanced) || u.flags.has(UnitFlag::fell_back) ||
        u.flags.has(UnitFlag::declared_charge) || is_engaged(s_, u)) {
      return false;
    }
    for (const auto& t : s_.units) {
      if (valid_charge_target(u, t)) return true;
    }
    return false;
  }

  bool valid_charge_target(const UnitState& unit, const UnitState& target) const {
    return target.owner != unit.owner && target.on_table() &&
           nearest_distance(anchor_pos(unit), target) <= 12;
  }

  bool can_fight(const UnitState& u, int mode, int picker) const {
    if (u.owner != picker || !u.on_table() || u.flags.has(UnitFlag::fought)) return false;
    if (mode == 0 && !u.flags.has(UnitFlag::charged_this_turn)) return false;
    return is_engaged(s_, u);
  }

  bool any_can_fight(int mode, int picker) const {
    return std::any_of(s_.units.begin(), s_.units.end(),
                       [&](const UnitState& u) { return can_fight(u, mode, picker); });
  }

  void allocation_options(const UnitState& target, std::vector<Action>& out) const {
    const int full = s_.sheet(target).wounds_per_model;
    const int anchor = target.anchor();
    for (int i = 0; i < static_cast<int>(target.models.size()); ++i) {
      const auto& m = target.models[static_cast<std::size_t>(i)];
      if (m.alive() && m.wounds_remaining < full) {
        out.emplace_back(AllocateModel{i});
        return;
      }
    }
    if (target.alive_models() == 1) {
      out.emplace_back(AllocateModel{anchor});
      return;
    }
    UnitState trial = target;
    for (int i = 0; i < static_cast<int>(target.models.size()); ++i) {
      if (i == anchor || !target.models[static_cast<std::size_t>(i)].alive()) continue;
      const int w = trial.models[static_cast<std::size_t>(i)].wounds_remaining;
      trial.models[static_cast<std::size_t>(i)].wounds_remaining = 0;
      if (is_coherent(trial)) out.emplace_back(AllocateModel{i});
      trial.models[static_cast<std::size_t>(i)].wounds_remaining = w;
    }
    if (out.empty()) throw InternalError("no coherent allocation");
  }

  // ------------------------------------------------------------ geometry

  bool deploy_square_ok(int unit_id, GridPos anchor) const {
    const UnitState& u = *s_.find_unit(unit_id);
    Occupancy occ(s_);
    std::vector<int> placed;
    return detail::pack(anchor, static_cast<int>(u.models.size()),
                        [&](int sq) {
                          return occ.at(sq) == -1 && in_deployment_zone(u.owner, square_at(sq));
                        },
                        placed);
  }

  void deploy_squares(int unit_id, std::vector<Action>& out, int limit) const {
    const UnitState& u = *s_.find_unit(unit_id);
    Occupancy occ(s_);
    auto landing = [&](int sq) {
      return occ.at(sq) == -1 && in_deployment_zone(u.owner, square_at(sq));
    };
    std::vector<int> placed;
    const int y0 = u.owner == 0 ? 0 : kBoardHeight - kDeployDepth;
    for (int y = y0; y < y0 + kDeployDepth; ++y) {
      for (int x = 0; x < kBoardWidth; ++x) {
        if (detail::pack({x, y}, static_cast<int>(u.models.size()), landing, placed)) {
          out.emplace_back(TargetSquare{{x, y}});
          if (limit > 0 && static_cast<int>(out.size()) >= limit) return;
        }
      }
    }
  }

  struct MoveRules {
    const Field& field;
    int unit_id;
    int owner;
    bool passable(int sq) const {
      const int occ = field.occ.at(sq);
      return occ == -1 || owner_of_unit(occ) == owner;
    }
    bool landing(int sq) const {
      const int occ = field.occ.at(sq);
      return (occ == -1 || occ == unit_id) && (field.near[sq] & (1U << (1 - owner))) == 0;
    }
  };

  /// Legal anchor destinations (ascending square index) for a move.
  void move_destinations(const UnitState& u, int range, std::vector<int>& out, int limit,
                         int only = -1) const {
    out.clear();
    Field field(s_);
    MoveRules rules{field, u.unit_id, u.owner};
    thread_local std::vector<std::pair<int, int>> reached;
    detail::reach(anchor_pos(u), range, [&](int sq) { return rules.passable(sq); }, reached);
    std::vector<int> placed;
    const int n = u.alive_models();
    if (only >= 0) {
      for (const auto& [sq, depth] : reached) {
        if (sq != only) continue;
        if (rules.landing(sq) &&
            detail::pack(square_at(sq), n, [&](int q) { return rules.landing(q); }, placed)) {
          out.push_back(sq);
        }
        return;
      }
      return;
    }
    if (limit > 0) {
      for (const auto& [sq, depth] : reached) {
        if (rules.landing(sq) &&
            detail::pack(square_at(sq), n, [&](int q) { return rules.landing(q); }, placed)) {
          out.push_back(sq);
          if (static_cast<int>(out.size()) >= limit) break;
        }
      }
      std::sort(out.begin(), out.end());
      return;
    }
    thread_local std::vector<int> candidates;
    candidates.clear();
    for (const auto& [sq, depth] : reached) {
      if (rules.landing(sq)) candidates.push_back(sq);
    }
    std::sort(candidates.begin(), candidates.end());
    for (int sq : candidates) {
      if (detail::pack(square_at(sq), n, [&](int q) { return rules.landing(q); }, placed)) {
        out.push_back(sq);
      }
    }
  }

  void move_kinds(int unit_id, std::vector<Action>& out) const {
    const UnitState& u = *s_.find_unit(unit_id);
    const int move = s_.sheet(u).move;
    std::vector<int> probe;
    out.emplace_back(ChooseMoveKind{MoveKind::stationary});
    if (!is_engaged(s_, u)) {
      move_destinations(u, move, probe, 1);
      if (!probe.empty()) out.emplace_back(ChooseMoveKind{MoveKind::normal});
      move_destinations(u, move + 1, probe, 1);
      if (!probe.empty()) out.emplace_back(ChooseMoveKind{MoveKind::advance});
    } else {
      move_destinations(u, move, probe, 1);
      if (!probe.empty()) out.emplace_back(ChooseMoveKind{MoveKind::fall_back});
    }
  }

  void move_squares(int unit_id, MoveKind, int range, std::vector<Action>& out, int limit) const {
    const UnitState& u = *s_.find_unit(unit_id);
    std::vector<int> dest;
    move_destinations(u, range, dest, limit);
    for (int sq : dest) out.emplace_back(TargetSquare{square_at(sq)});
  }

  bool move_square_ok(int unit_id, MoveKind, int range, GridPos p) const {
    const UnitState& u = *s_.find_unit(unit_id);
    std::vector<int> dest;
    move_destinations(u, range, dest, 0, square_index(p));
    return !dest.empty();
  }

  /// Put the unit's alive models on `squares` (anchor first).
  void assign_positions(UnitState& u, const std::vector<int>& squares) {
    const auto order = placement_order(s_, u);
    for (std::size_t i = 0; i < order.size(); ++i) {
      u.models[static_cast<std::size_t>(order[i])].position = square_at(squares[i]);
    }
  }

  // ------------------------------------------------------------ feeding

  void feed_game(SequenceFrame& f, const Action& a) {
    if (f.step == game::kChooseOrder) {
      const int winner = f.locals[game::kWinner];
      s_.first_player = std::holds_alternative<ChooseFirst>(a) ? winner : other(winner);
      s_.active_player = s_.first_player;
      f.locals[game::kDeployer] = winner;
      f.step = game::kDeployNext;
    } else if (f.step == game::kDeployUnit) {
      f.locals[game::kUnit] = std::get<SelectUnit>(a).unit;
      f.step = game::kDeployPosition;
    } else {
      const GridPos anchor = std::get<TargetSquare>(a).square;
      UnitState& u = *s_.find_unit(f.locals[game::kUnit]);
      Occupancy occ(s_);
      std::vector<int> placed;
      const bool ok = detail::pack(anchor, static_cast<int>(u.models.size()),
                                   [&](int sq) {
                                     return occ.at(sq) == -1 &&
                                            in_deployment_zone(u.owner, square_at(sq));
                                   },
                                   placed);
      if (!ok) throw InternalError("deployment square became illegal");
      assign_positions(u, placed);
      u.deployed = true;
      emit(EventKind::move_made, u.owner, {u.unit_id, 4, -1, -1, anchor.x, anchor.y});
      f.locals[game::kDeployer] = other(f.locals[game::kDeployer]);
      f.step = game::kDeployNext;
    }
  }

  void feed_movement(SequenceFrame& f, const Action& a) {
    if (f.step == movement::kSelect) {
      if (std::holds_alternative<Pass>(a)) {
        pop();
        return;
      }
      f.locals[movement::kUnit] = std::get<SelectUnit>(a).unit;
      f.step = movement::kKind;
    } else if (f.step == movement::kKind) {
      const MoveKind kind = std::get<ChooseMoveKind>(a).kind;
      UnitState& u = *s_.find_unit(f.locals[movement::kUnit]);
      f.locals[movement::kKindSlot] = static_cast<int>(kind);
      f.locals[movement::kRange] = s_.sheet(u).move;
      if (kind == MoveKind::stationary) {
        u.flags.set(UnitFlag::moved);
        const GridPos p = anchor_pos(u);
        emit(EventKind::move_made, u.owner, {u.unit_id, 0, p.x, p.y, p.x, p.y});
        f.step = movement::kSelect;
      } else if (kind == MoveKind::advance) {
        f.step = movement::kAdvanceRolled;
        push_roll(1, RollPurpose::advance, u.owner, u.unit_id, 0, false);
      } else {
        f.step = movement::kTarget;
      }
    } else {
      const GridPos dest = std::get<TargetSquare>(a).square;
      UnitState& u = *s_.find_unit(f.locals[movement::kUnit]);
      const auto kind = static_cast<MoveKind>(f.locals[movement::kKindSlot]);
      Field field(s_);
      MoveRules rules{field, u.unit_id, u.owner};
      std::vector<int> placed;
      if (!detail::pack(dest, u.alive_models(), [&](int q) { return rules.landing(q); }, placed)) {
        throw InternalError("move destination became illegal");
      }
      const GridPos from = anchor_pos(u);
      assign_positions(u, placed);
      u.flags.set(UnitFlag::moved);
      if (kind == MoveKind::advance) u.flags.set(UnitFlag::advanced);
      if (kind == MoveKind::fall_back) u.flags.set(UnitFlag::fell_back);
      emit(EventKind::move_made, u.owner,
           {u.unit_id, static_cast<int>(kind), from.x, from.y, dest.x, dest.y});
      f.step = movement::kSelect;
    }
  }

  void feed_shooting(SequenceFrame& f, const Action& a) {
    if (f.step == shooting::kSelect) {
      if (std::holds_alternative<Pass>(a)) {
        pop();
        return;
      }
      f.locals[shooting::kUnit] = std::get<SelectUnit>(a).unit;
      f.step = shooting::kTarget;
    } else {
      f.locals[shooting::kTargetSlot] = std::get<TargetUnit>(a).unit;
      f.locals[shooting::kModel] = 0;
      f.locals[shooting::kWeapon] = 0;
      f.locals[shooting::kAttack] = 0;
      s_.find_unit(f.locals[shooting::kUnit])->flags.set(UnitFlag::shot);
      f.step = shooting::kResolve;
    }
  }

  void feed_charge(SequenceFrame& f, const Action& a) {
    if (f.step == charge::kSelect) {
      if (std::holds_alternative<Pass>(a)) {
        pop();
        return;
      }
      const int unit = std::get<SelectUnit>(a).unit;
      f.locals[charge::kUnit] = unit;
      s_.find_unit(unit)->flags.set(UnitFlag::declared_charge);
      f.step = charge::kTarget;
    } else {
      const int unit = f.locals[charge::kUnit];
      f.step = charge::kSelect;
      push(Sequence::charge_resolution,
           {{charge_res::kUnit, unit}, {charge_res::kTarget, std::get<TargetUnit>(a).unit}});
    }
  }

  void feed_fight(SequenceFrame& f, const Action& a) {
    if (f.step == fight::kSelect) {
      f.locals[fight::kUnit] = std::get<SelectUnit>(a).unit;
      f.step = fight::kTarget;
    } else {
      f.locals[fight::kTargetSlot] = std::get<TargetUnit>(a).unit;
      f.locals[fight::kModel] = 0;
      f.locals[fight::kWeapon] = 0;
      f.locals[fight::kAttack] = 0;
      s_.find_unit(f.locals[fight::kUnit])->flags.set(UnitFlag::fought);
      f.step = fight::kResolve;
    }
  }

  void feed_dice(SequenceFrame& f, const Action& a) {
    if (std::holds_alternative<RerollAccept>(a)) {
      const int actor = f.locals[dice::kActor];
      PlayerState& p = s_.players[actor];
      p.command_points -= 1;
      p.stratagem_used_this_phase = true;
      emit(EventKind::cp_changed, actor, {actor, -1, p.command_points});
      emit(EventKind::reroll_used, actor, {f.locals[dice::kPurpose], f.locals[dice::kSubject]});
      roll_into(f);
    }
    f.step = dice::kDone;
  }

  void roll_into(SequenceFrame& f) {
    const int count = f.locals[dice::kCount];
    f.locals[dice::kFirst] = s_.rng.d6();
    f.locals[dice::kSecond] = count > 1 ? s_.rng.d6() : 0;
    emit(EventKind::dice_rolled, f.locals[dice::kActor],
         {f.locals[dice::kPurpose], f.locals[dice::kFirst], f.locals[dice::kSecond],
          f.locals[dice::kSubject]});
  }

  // ------------------------------------------------------------ stepping

  void step() {
    SequenceFrame& f = s_.sequence_stack.back();
    switch (f.sequence) {
      case Sequence::game: step_game(f); break;
      case Sequence::round: step_round(f); break;
      case Sequence::turn: step_turn(f); break;
      case Sequence::command_phase: step_command(f); break;
      case Sequence::movement_phase: step_movement(f); break;
      case Sequence::shooting_phase: step_shooting(f); break;
      case Sequence::charge_phase: step_charge(f); break;
      case Sequence::fight_phase: step_fight(f); break;
      case Sequence::scoring: step_scoring(); break;
      case Sequence::single_attack: step_attack(f); break;
      case Sequence::roll_dice: step_dice(f); break;
      case Sequence::battle_shock_test: step_shock(f); break;
      case Sequence::charge_resolution: step_charge_resolution(f); break;
    }
  }

  void step_game(SequenceFrame& f) {
    switch (f.step) {
      case game::kRollOffP0:
        f.step = game::kRollOffP1;
        push_roll(1, RollPurpose::roll_off, 0, -1, 0, false);
        break;
      case game::kRollOffP1:
        f.locals[game::kRollP0] = f.locals[kDiceTotal];
        f.step = game::kRollOffCompare;
        push_roll(1, RollPurpose::roll_off, 1, -1, 0, false);
        break;
      case game::kRollOffCompare: {
        const int r0 = f.locals[game::kRollP0];
        const int r1 = f.locals[kDiceTotal];
        if (r0 == r1) {
          f.step = game::kRollOffP0;
        } else {
          f.locals[game::kWinner] = r0 > r1 ? 0 : 1;
          s_.active_player = f.locals[game::kWinner];
          f.step = game::kChooseOrder;
        }
        break;
      }
      case game::kDeployNext: {
        auto has_undeployed = [&](int p) {
          return std::any_of(s_.units.begin(), s_.units.end(),
                             [&](const UnitState& u) { return u.owner == p && !u.deployed; });
        };
        const int deployer = f.locals[game::kDeployer];
        if (has_undeployed(deployer)) {
          s_.active_player = deployer;
          f.step = game::kDeployUnit;
        } else if (has_undeployed(other(deployer))) {
          f.locals[game::kDeployer] = other(deployer);
          s_.active_player = other(deployer);
          f.step = game::kDeployUnit;
        } else {
          f.step = game::kBattle;
        }
        break;
      }
      case game::kBattle:
        s_.round = 1;
        f.step = game::kAfterRound;
        push(Sequence::round);
        break;
      case game::kAfterRound:
        if (s_.round >= kMaxRounds) {
          finish_by_vp();
        } else {
          ++s_.round;
          push(Sequence::round);
        }
        break;
      default:
        throw InternalError("bad game step");
    }
  }

  void step_round(SequenceFrame& f) {
    switch (f.step) {
      case round_seq::kFirstTurn:
        f.step = round_seq::kSecondTurn;
        push(Sequence::turn, {{turn::kPlayer, s_.first_player}});
        break;
      case round_seq::kSecondTurn:
        f.step = round_seq::kDone;
        push(Sequence::turn, {{turn::kPlayer, other(s_.first_player)}});
        break;
      default:
        if (s_.scenario == ScenarioKind::single_turn) {
          finish_by_vp();
        } else {
          pop();
        }
    }
  }

  void step_turn(SequenceFrame& f) {
    const int player = f.locals[turn::kPlayer];
    switch (f.step) {
      case turn::kStart:
        s_.active_player = player;
        for (auto& u : s_.units) {
          if (u.owner != player) continue;
          for (UnitFlag fl : {UnitFlag::moved, UnitFlag::advanced, UnitFlag::fell_back,
                              UnitFlag::shot, UnitFlag::declared_charge,
                              UnitFlag::charged_this_turn}) {
            u.flags.clear(fl);
          }
        }
        f.step = turn::kMovement;
        push(Sequence::command_phase);
        break;
      case turn::kMovement:
        f.step = turn::kShooting;
        push(Sequence::movement_phase);
        break;
      case turn::kShooting:
        f.step = turn::kCharge;
        push(Sequence::shooting_phase);
        break;
      case turn::kCharge:
        f.step = turn::kFight;
        push(Sequence::charge_phase);
        break;
      case turn::kFight:
        f.step = turn::kDone;
        push(Sequence::fight_phase);
        break;
      default:
        pop();
    }
  }

  void step_command(SequenceFrame& f) {
    if (f.step == command::kStart) {
      start_phase(Phase::command);
      const int p = s_.active_player;
      for (auto& u : s_.units) {
        if (u.owner == p) u.flags.clear(UnitFlag::battle_shocked);
      }
      PlayerState& ps = s_.players[p];
      if (ps.command_points < kMaxCommandPoints) {
        ps.command_points += 1;
        emit(EventKind::cp_changed, p, {p, 1, ps.command_points});
      }
      f.step = command::kTests;
      f.locals[command::kScan] = 0;
      if (s_.round >= 2) push(Sequence::scoring);
      return;
    }
    auto& scan = f.locals[command::kScan];
    while (scan < static_cast<int>(s_.units.size())) {
      const UnitState& u = s_.units[static_cast<std::size_t>(scan)];
      ++scan;
      if (u.owner == s_.active_player && u.on_table() && below_half_strength(s_, u)) {
        push(Sequence::battle_shock_test, {{shock::kUnit, u.unit_id}});
        return;
      }
    }
    pop();
  }

  void step_scoring() {
    const int p = s_.active_player;
    int controlled = 0;
    for (int i = 0; i < static_cast<int>(s_.objectives.size()); ++i) {
      const Control c = objective_control(s_, i);
      if ((p == 0 && c == Control::p0) || (p == 1 && c == Control::p1)) ++controlled;
    }
    PlayerState& ps = s_.players[p];
    const int gained = std::min({5 * controlled, 15, kMaxVictoryPoints - ps.victory_points});
    ps.victory_points += gained;
    emit(EventKind::vp_scored, p, {p, gained, ps.victory_points, controlled});
    pop();
  }

  void step_shock(SequenceFrame& f) {
    UnitState& u = *s_.find_unit(f.locals[shock::kUnit]);
    const int ld = s_.sheet(u).leadership;
    if (f.step == shock::kRoll) {
      f.step = shock::kResolve;
      push_roll(2, RollPurpose::battle_shock, u.owner, u.unit_id, ld, true);
      return;
    }
    const int roll = f.locals[kDiceTotal];
    const bool passed = roll >= ld;
    if (!passed) u.flags.set(UnitFlag::battle_shocked);
    emit(EventKind::battle_shock_result, u.owner, {u.unit_id, roll, ld, passed ? 1 : 0});
    pop();
  }

  void step_dice(SequenceFrame& f) {
    if (f.step == dice::kRoll) {
      roll_into(f);
      const bool offer = f.locals[dice::kRerollable] != 0 &&
                         can_reroll(s_, f.locals[dice::kActor], f.locals[dice::kSubject]);
      f.step = offer ? dice::kOffer : dice::kDone;
      return;
    }
    const int first = f.locals[dice::kFirst];
    const int total = first + f.locals[dice::kSecond];
    pop();
    SequenceFrame& parent = s_.sequence_stack.back();
    parent.locals[kDiceTotal] = total;
    parent.locals[kDiceFirst] = first;
  }

  void step_movement(SequenceFrame& f) {
    if (f.step == movement::kStart) {
      start_phase(Phase::movement);
      f.step = movement::kSelect;
    } else if (f.step == movement::kAdvanceRolled) {
      f.locals[movement::kRange] += f.locals[kDiceTotal];
      f.step = movement::kTarget;
    } else {
      throw InternalError("bad movement step");
    }
  }

  void step_shooting(SequenceFrame& f) {
    if (f.step == shooting::kStart) {
      start_phase(Phase::shooting);
      f.step = shooting::kSelect;
      return;
    }
    const UnitState& shooter = *s_.find_unit(f.locals[shooting::kUnit]);
    const UnitState& target = *s_.find_unit(f.locals[shooting::kTargetSlot]);
    const Datasheet& sheet = s_.sheet(shooter);
    auto& mi = f.locals[shooting::kModel];
    auto& wi = f.locals[shooting::kWeapon];
    auto& ai = f.locals[shooting::kAttack];
    while (target.alive() && mi < static_cast<int>(shooter.models.size())) {
      const ModelState& m = shooter.models[static_cast<std::size_t>(mi)];
      if (!m.alive() || wi >= static_cast<int>(sheet.weapons.size())) {
        ++mi;
        wi = 0;
        ai = 0;
        continue;
      }
      const WeaponProfile& w = sheet.weapons[static_cast<std::size_t>(wi)];
      if (w.kind != WeaponKind::ranged || ai >= w.attacks || !weapon_in_range(m, w, target)) {
        ++wi;
        ai = 0;
        continue;
      }
      ++ai;
      push(Sequence::single_attack, {{attack::kAttacker, shooter.unit_id},
                                     {attack::kModel, mi},
                                     {attack::kWeapon, wi},
                                     {attack::kTarget, target.unit_id}});
      return;
    }
    if (s_.scenario == ScenarioKind::single_shooting_maximize) {
      finish_by_vp();
      return;
    }
    f.step = shooting::kSelect;
  }

  void step_charge(SequenceFrame& f) {
    if (f.step != charge::kStart) throw InternalError("bad charge step");
    start_phase(Phase::charge);
    f.step = charge::kSelect;
  }

  void step_charge_resolution(SequenceFrame& f) {
    UnitState& u = *s_.find_unit(f.locals[charge_res::kUnit]);
    const UnitState& target = *s_.find_unit(f.locals[charge_res::kTarget]);
    const int needed = nearest_distance(anchor_pos(u), target) - 1;
    if (f.step == charge_res::kRoll) {
      f.step = charge_res::kResolve;
      push_roll(2, RollPurpose::charge, u.owner, u.unit_id, needed, true);
      return;
    }
    const int roll = f.locals[kDiceTotal];
    GridPos to = anchor_pos(u);
    bool success = false;
    if (roll >= needed) {
      if (auto dest = charge_move(u, target, roll)) {
        to = *dest;
        success = true;
        u.flags.set(UnitFlag::charged_this_turn);
      }
    }
    emit(EventKind::charge_result, u.owner,
         {u.unit_id, target.unit_id, roll, needed, success ? 1 : 0, to.x, to.y});
    pop();
  }

  /// Moves the unit into engagement with `target` if a destination within
  /// `roll` steps exists. Destination: fewest steps, then lowest square.
  std::optional<GridPos> charge_move(UnitState& u, const UnitState& target, int roll) {
    Field field(s_);
    std::array<bool, kSquares> near_other{};
    for (const auto& e : s_.units) {
      if (e.owner == u.owner || e.unit_id == target.unit_id || !e.on_table()) continue;
      for (const auto& m : e.models) {
        if (!m.alive()) continue;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            GridPos p{m.position.x + dx, m.position.y + dy};
            if (on_board(p)) near_other[square_index(p)] = true;
          }
        }
      }
    }
    const int id = u.unit_id;
    auto landing = [&](int sq) {
      const int occ = field.occ.at(sq);
      return (occ == -1 || occ == id) && !near_other[sq];
    };
    std::vector<std::pair<int, int>> reached;
    detail::reach(anchor_pos(u), roll,
                  [&](int sq) {
                    const int occ = field.occ.at(sq);
                    return occ == -1 || owner_of_unit(occ) == u.owner;
                  },
                  reached);
    std::vector<std::pair<int, int>> candidates;
    for (const auto& [sq, depth] : reached) {
      if (landing(sq) && nearest_distance(square_at(sq), target) == 1) {
        candidates.emplace_back(depth, sq);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    std::vector<int> placed;
    for (const auto& [depth, sq] : candidates) {
      if (detail::pack(square_at(sq), u.alive_models(), landing, placed)) {
        assign_positions(u, placed);
        return square_at(sq);
      }
    }
    return std::nullopt;
  }

  void step_fight(SequenceFrame& f) {
    switch (f.step) {
      case fight::kStart:
        start_phase(Phase::fight);
        for (auto& u : s_.units) u.flags.clear(UnitFlag::fought);
        f.locals[fight::kMode] = 0;
        f.locals[fight::kPicker] = s_.active_player;
        f.step = fight::kPick;
        break;
      case fight::kPick: {
        if (f.locals[fight::kMode] == 0) {
          if (any_can_fight(0, s_.active_player)) {
            f.locals[fight::kPicker] = s_.active_player;
            f.step = fight::kSelect;
            break;
          }
          f.locals[fight::kMode] = 1;
          f.locals[fight::kPicker] = other(s_.active_player);
        }
        const int picker = f.locals[fight::kPicker];
        if (any_can_fight(1, picker)) {
          f.step = fight::kSelect;
        } else if (any_can_fight(1, other(picker))) {
          f.locals[fight::kPicker] = other(picker);
          f.step = fight::kSelect;
        } else {
          pop();
        }
        break;
      }
      case fight::kResolve: {
        const UnitState& unit = *s_.find_unit(f.locals[fight::kUnit]);
        const UnitState& target = *s_.find_unit(f.locals[fight::kTargetSlot]);
        const Datasheet& sheet = s_.sheet(unit);
        auto& mi = f.locals[fight::kModel];
        auto& wi = f.locals[fight::kWeapon];
        auto& ai = f.locals[fight::kAttack];
        while (target.alive() && mi < static_cast<int>(unit.models.size())) {
          const ModelState& m = unit.models[static_cast<std::size_t>(mi)];
          if (!m.alive() || wi >= static_cast<int>(sheet.weapons.size())) {
            ++mi;
            wi = 0;
            ai = 0;
            continue;
          }
          const WeaponProfile& w = sheet.weapons[static_cast<std::size_t>(wi)];
          if (w.kind != WeaponKind::melee || ai >= w.attacks) {
            ++wi;
            ai = 0;
            continue;
          }
          ++ai;
          push(Sequence::single_attack, {{attack::kAttacker, unit.unit_id},
                                         {attack::kModel, mi},
                                         {attack::kWeapon, wi},
                                         {attack::kTarget, target.unit_id}});
          return;
        }
        if (f.locals[fight::kMode] == 1) f.locals[fight::kPicker] = other(unit.owner);
        f.step = fight::kPick;
        break;
      }
      default:
        throw InternalError("bad fight step");
    }
  }

  void step_attack(SequenceFrame& f) {
    const UnitState& attacker = *s_.find_unit(f.locals[attack::kAttacker]);
    UnitState& target = *s_.find_unit(f.locals[attack::kTarget]);
    const WeaponProfile& w =
        s_.sheet(attacker).weapons[static_cast<std::size_t>(f.locals[attack::kWeapon])];
    const Datasheet& defender = s_.sheet(target);
    switch (f.step) {
      case attack::kRollHit:
        f.step = attack::kHitRolled;
        push_roll(1, RollPurpose::hit, attacker.owner, attacker.unit_id, hit_threshold(w), false);
        break;
      case attack::kHitRolled:
        if (!hit_succeeds(f.locals[kDiceTotal], hit_threshold(w))) {
          pop();
          return;
        }
        f.step = attack::kWoundRolled;
        push_roll(1, RollPurpose::wound, attacker.owner, attacker.unit_id,
                  wound_threshold(w.strength, defender.toughness), false);
        break;
      case attack::kWoundRolled:
        if (!wound_succeeds(f.locals[kDiceTotal], wound_threshold(w.strength, defender.toughness))) {
          pop();
          return;
        }
        f.step = attack::kAllocate;
        break;
      case attack::kRollSave:
        f.step = attack::kSaveRolled;
        push_roll(1, RollPurpose::save, target.owner, target.unit_id,
                  save_threshold(defender, w.armor_penetration), false);
        break;
      case attack::kSaveRolled: {
        if (save_succeeds(f.locals[kDiceTotal], save_threshold(defender, w.armor_penetration))) {
          pop();
          return;
        }
        const int model = f.locals[attack::kAllocated];
        ModelState& m = target.models[static_cast<std::size_t>(model)];
        const int dealt = std::min(w.damage, m.wounds_remaining);
        m.wounds_remaining -= dealt;
        emit(EventKind::damage_dealt, attacker.owner,
             {attacker.unit_id, target.unit_id, model, dealt});
        const int target_owner = target.owner;
        if (!m.alive()) {
          emit(EventKind::model_slain, target_owner, {target.unit_id, model});
          if (!target.alive()) emit(EventKind::unit_destroyed, target_owner, {target.unit_id});
        }
        pop();
        if (s_.alive_models(target_owner) == 0) {
          GameResult r;
          r.winner = other(target_owner);
          r.vp = {s_.players[0].victory_points, s_.players[1].victory_points};
          finish(r);
        }
        break;
      }
      default:
        throw InternalError("bad attack step");
    }
  }

  GameState& s_;
  EventLog* log_;
};

}  // namespace

DecisionOrResult current_decision(const GameState& s) {
  if (s.terminal) return *s.terminal;
  Engine e(const_cast<GameState&>(s), nullptr);
  DecisionRequest req;
  const auto kind = e.pending_kind();
  if (!kind) throw InternalError("no pending decision in a non-terminal state");
  req.kind = *kind;
  req.actor = e.actor();
  e.options(req.options);
  return req;
}

DecisionRequest pending_decision(const GameState& s) {
  auto d = current_decision(s);
  if (auto* req = std::get_if<DecisionRequest>(&d)) return std::move(*req);
  throw GameAlreadyOver("game is over");
}

bool is_legal(const GameState& s, const Action& a) {
  if (s.terminal) return false;
  Engine e(const_cast<GameState&>(s), nullptr);
  return e.legal(a);
}

void apply_in_place(GameState& s, const Action& a, EventLog* events) {
  if (s.terminal) throw GameAlreadyOver("apply on a terminal state");
  Engine e(s, events);
  if (!e.legal(a)) throw IllegalAction("illegal action: " + std::to_string(action_to_id(a)));
  e.feed(a);
  ++s.decision_count;
  if (s.decision_count >= kDecisionBudget) {
    e.finish_budget_draw();
    return;
  }
  e.run();
}

void run_until_decision(GameState& s, EventLog* events) {
  if (s.terminal) return;
  Engine(s, events).run();
}

Transition apply(const GameState& s, const Action& a) {
  Transition t{s, {}};
  apply_in_place(t.state, a, &t.events);
  return t;
}

std::optional<GameResult> is_terminal(const GameState& s) { return s.terminal; }

std::optional<PendingRoll> pending_roll(const GameState& s) {
  if (s.terminal || s.sequence_stack.empty()) return std::nullopt;
  const SequenceFrame& f = s.sequence_stack.back();
  if (f.sequence != Sequence::roll_dice || f.step != dice::kOffer) return std::nullopt;
  PendingRoll r;
  r.purpose = static_cast<RollPurpose>(f.locals[dice::kPurpose]);
  r.actor = f.locals[dice::kActor];
  r.subject_unit = f.locals[dice::kSubject];
  r.die1 = f.locals[dice::kFirst];
  r.die2 = f.locals[dice::kSecond];
  r.total = r.die1 + r.die2;
  r.needed = f.locals[dice::kNeeded];
  return r;
}

int decision_subject_unit(const GameState& s) {
  if (s.terminal || s.sequence_stack.empty()) return -1;
  const SequenceFrame& f = s.sequence_stack.back();
  switch (f.sequence) {
    case Sequence::game:
      return f.step == game::kDeployPosition ? f.locals[game::kUnit] : -1;
    case Sequence::movement_phase:
      return f.step == movement::kKind || f.step == movement::kTarget ? f.locals[movement::kUnit]
                                                                       : -1;
    case Sequence::shooting_phase:
      return f.step == shooting::kTarget ? f.locals[shooting::kUnit] : -1;
    case Sequence::charge_phase:
      return f.step == charge::kTarget ? f.locals[charge::kUnit] : -1;
    case Sequence::fight_phase:
      return f.step == fight::kTarget ? f.locals[fight::kUnit] : -1;
    case Sequence::single_attack:
      return f.locals[attack::kTarget];
    case Sequence::roll_dice:
      return f.locals[dice::kSubject];
    default:
      return -1;
  }
}

Transition start_game(const std::array<std::vector<Datasheet>, 2>& rosters, std::uint64_t seed) {
  Transition t;
  GameState& s = t.state;
  for (int p = 0; p < 2; ++p) {
    const auto& r = rosters[static_cast<std::size_t>(p)];
    if (r.empty() || r.size() > static_cast<std::size_t>(kMaxUnitsPerSide)) {
      throw Error("roster for player " + std::to_string(p) + " must have 1.." +
                  std::to_string(kMaxUnitsPerSide) + " datasheets, got " +
                  std::to_string(r.size()));
    }
    for (const auto& sheet : r) {
      auto v = validate_datasheet(sheet);
      if (!v.empty()) throw Error("invalid datasheet: " + v.front());
    }
  }
  for (int p = 0; p < 2; ++p) {
    const auto& r = rosters[static_cast<std::size_t>(p)];
    s.players[p].faction = r.front().faction;
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
  s.sequence_stack.push_back(make_frame(Sequence::game));
  Engine(s, &t.events).run();
  return t;
}

GameState new_state(const std::array<std::vector<Datasheet>, 2>& rosters, std::uint64_t seed) {
  return start_game(rosters, seed).state;
}

GameState new_state(const Registry& registry, const std::array<std::vector<std::string>, 2>& names,
                    std::uint64_t seed) {
  std::array<std::vector<Datasheet>, 2> rosters;
  for (std::size_t p = 0; p < 2; ++p) {
    for (const auto& n : names[p]) rosters[p].push_back(registry.at(n));
  }
  return new_state(rosters, seed);
}

int resolve_single_attack(GameState& s, const AttackRef& ref, EventLog* events) {
  const UnitState* target = s.find_unit(ref.target_unit);
  if (target == nullptr || s.find_unit(ref.attacker_unit) == nullptr) {
    throw Error("unknown unit in attack");
  }
  const int before = target->wounds_remaining();
  Engine e(s, events);
  const std::size_t floor = s.sequence_stack.size();
  e.push(Sequence::single_attack, {{attack::kAttacker, ref.attacker_unit},
                                   {attack::kModel, ref.model},
                                   {attack::kWeapon, ref.weapon},
                                   {attack::kTarget, ref.target_unit}});
  e.run(floor, true);
  return before - s.find_unit(ref.target_unit)->wounds_remaining();
}

void place_unit(GameState& s, int unit_id, GridPos anchor) {
  UnitState* u = s.find_unit(unit_id);
  if (u == nullptr) throw Error("unknown unit " + std::to_string(unit_id));
  u->deployed = false;
  Occupancy occ(s);
  std::vector<int> placed;
  if (!detail::pack(anchor, u->alive_models(), [&](int sq) { return occ.at(sq) == -1; }, placed)) {
    throw Error("cannot place unit " + std::to_string(unit_id));
  }
  const auto order = placement_order(s, *u);
  for (std::size_t i = 0; i < order.size(); ++i) {
    u->models[static_cast<std::size_t>(order[i])].position = square_at(placed[i]);
  }
  u->deployed = true;
}

}  // namespace fourhammer

namespace fourhammer {

namespace {

bool parent_ok(Sequence child, Sequence parent) {
  switch (child) {
    case Sequence::game: return false;
    case Sequence::round: return parent == Sequence::game;
    case Sequence::turn: return parent == Sequence::round;
    case Sequence::command_phase:
    case Sequence::movement_phase:
    case Sequence::charge_phase:
    case Sequence::fight_phase: return parent == Sequence::turn;
    case Sequence::shooting_phase: return parent == Sequence::turn || parent == Sequence::game;
    case Sequence::scoring:
    case Sequence::battle_shock_test: return parent == Sequence::command_phase;
    case Sequence::single_attack:
      return parent == Sequence::shooting_phase || parent == Sequence::fight_phase;
    case Sequence::charge_resolution: return parent == Sequence::charge_phase;
    case Sequence::roll_dice:
      return parent == Sequence::game || parent == Sequence::movement_phase ||
             parent == Sequence::single_attack || parent == Sequence::battle_shock_test ||
             parent == Sequence::charge_resolution;
  }
  return false;
}

int max_step(Sequence seq) {
  switch (seq) {
    case Sequence::game: return game::kAfterRound;
    case Sequence::round: return round_seq::kDone;
    case Sequence::turn: return turn::kDone;
    case Sequence::command_phase: return command::kTests;
    case Sequence::movement_phase: return movement::kTarget;
    case Sequence::shooting_phase: return shooting::kResolve;
    case Sequence::charge_phase: return charge::kTarget;
    case Sequence::fight_phase: return fight::kResolve;
    case Sequence::scoring: return 0;
    case Sequence::single_attack: return attack::kSaveRolled;
    case Sequence::roll_dice: return dice::kDone;
    case Sequence::battle_shock_test: return shock::kResolve;
    case Sequence::charge_resolution: return charge_res::kResolve;
  }
  return 0;
}

}  // namespace

std::vector<std::string> validate_sequence_stack(const GameState& s) {
  std::vector<std::string> out;
  if (static_cast<int>(s.sequence_stack.size()) > kMaxStackDepth) {
    out.push_back("sequence stack deeper than " + std::to_string(kMaxStackDepth));
    return out;
  }
  for (std::size_t i = 0; i < s.sequence_stack.size(); ++i) {
    const SequenceFrame& f = s.sequence_stack[i];
    const std::string where = "frame " + std::to_string(i) + " (" + to_string(f.sequence) + ")";
    if (static_cast<int>(f.sequence) >= kSequenceCount) {
      out.push_back(where + " has an unknown sequence");
      continue;
    }
    if (i > 0 && !parent_ok(f.sequence, s.sequence_stack[i - 1].sequence)) {
      out.push_back(where + " cannot run inside " + to_string(s.sequence_stack[i - 1].sequence));
    }
    if (f.step < 0 || f.step > max_step(f.sequence)) {
      out.push_back(where + " step " + std::to_string(f.step) + " outside 0.." +
                    std::to_string(max_step(f.sequence)));
      continue;
    }
    const auto& L = f.locals;
    auto player = [&](int slot) {
      if (L[slot] != 0 && L[slot] != 1) {
        out.push_back(where + " local " + std::to_string(slot) + " is not a player");
      }
    };
    auto unit = [&](int slot) -> const UnitState* {
      const UnitState* u = s.find_unit(L[slot]);
      if (u == nullptr) {
        out.push_back(where + " local " + std::to_string(slot) + " names no unit");
      }
      return u;
    };
    auto range = [&](int slot, int lo, int hi) {
      if (L[slot] < lo || L[slot] > hi) {
        out.push_back(where + " local " + std::to_string(slot) + " = " + std::to_string(L[slot]) +
                      " outside " + std::to_string(lo) + ".." + std::to_string(hi));
      }
    };
    const bool top = i + 1 == s.sequence_stack.size();
    switch (f.sequence) {
      case Sequence::game:
        if (f.step >= game::kChooseOrder) player(game::kWinner);
        player(game::kDeployer);
        if (f.step == game::kDeployPosition) {
          if (const UnitState* u = unit(game::kUnit)) {
            if (u->deployed) out.push_back(where + " deploys a unit twice");
          }
        }
        break;
      case Sequence::turn:
        player(turn::kPlayer);
        break;
      case Sequence::command_phase:
        range(command::kScan, 0, static_cast<int>(s.units.size()));
        break;
      case Sequence::movement_phase:
        if (f.step >= movement::kKind) {
          if (const UnitState* u = unit(movement::kUnit)) {
            if (!u->on_table()) out.push_back(where + " moves a unit that is not on the table");
          }
          range(movement::kKindSlot, 0, 3);
          range(movement::kRange, 0, bounds::move.max + 6);
        }
        break;
      case Sequence::shooting_phase:
        if (f.step >= shooting::kTarget) {
          if (const UnitState* u = unit(shooting::kUnit)) {
            if (!u->on_table()) out.push_back(where + " shoots with a unit that is not on the table");
          }
        }
        if (f.step == shooting::kResolve) {
          unit(shooting::kTargetSlot);
          range(shooting::kModel, 0, bounds::models.max);
          range(shooting::kWeapon, 0, bounds::max_weapons);
          range(shooting::kAttack, 0, bounds::attacks.max);
        }
        break;
      case Sequence::charge_phase:
        if (f.step == charge::kTarget) unit(charge::kUnit);
        break;
      case Sequence::fight_phase:
        range(fight::kMode, 0, 1);
        player(fight::kPicker);
        if (f.step >= fight::kTarget) {
          if (const UnitState* u = unit(fight::kUnit)) {
            if (!u->on_table()) out.push_back(where + " fights with a unit that is not on the table");
          }
        }
        if (f.step == fight::kResolve) {
          unit(fight::kTargetSlot);
          range(fight::kModel, 0, bounds::models.max);
          range(fight::kWeapon, 0, bounds::max_weapons);
          range(fight::kAttack, 0, bounds::attacks.max);
        }
        break;
      case Sequence::single_attack: {
        const UnitState* a = unit(attack::kAttacker);
        const UnitState* t = unit(attack::kTarget);
        if (a != nullptr) {
          range(attack::kModel, 0, static_cast<int>(a->models.size()) - 1);
          range(attack::kWeapon, 0, static_cast<int>(s.sheet(*a).weapons.size()) - 1);
        }
        if (t != nullptr) {
          if (!t->on_table()) out.push_back(where + " attacks a unit that is not on the table");
          if (f.step >= attack::kRollSave) {
            range(attack::kAllocated, 0, static_cast<int>(t->models.size()) - 1);
            const int m = L[attack::kAllocated];
            if (m >= 0 && m < static_cast<int>(t->models.size()) &&
                !t->models[static_cast<std::size_t>(m)].alive()) {
              out.push_back(where + " allocates to a destroyed model");
            }
          }
        }
        break;
      }
      case Sequence::roll_dice:
        range(dice::kCount, 1, 2);
        range(dice::kPurpose, 0, 6);
        player(dice::kActor);
        if (L[dice::kSubject] != -1) unit(dice::kSubject);
        range(dice::kRerollable, 0, 1);
        if (f.step >= dice::kOffer) {
          range(dice::kFirst, 1, 6);
          range(dice::kSecond, L[dice::kCount] > 1 ? 1 : 0, L[dice::kCount] > 1 ? 6 : 0);
        }
        break;
      case Sequence::battle_shock_test:
        unit(shock::kUnit);
        break;
      case Sequence::charge_resolution:
        if (const UnitState* u = unit(charge_res::kUnit)) {
          if (!u->on_table()) out.push_back(where + " charges with a unit that is not on the table");
        }
        if (const UnitState* t = unit(charge_res::kTarget)) {
          if (!t->on_table()) out.push_back(where + " charges a unit that is not on the table");
        }
        break;
      default:
        break;
    }
    if (top && !s.terminal) {
      Engine e(const_cast<GameState&>(s), nullptr);
      if (!e.pending_kind()) out.push_back("top frame is not at a decision");
    }
  }
  return out;
}

}  // namespace fourhammer
