#include "fourhammer/board.hpp"

#include <algorithm>
#include <cstdlib>

namespace fourhammer {

int chebyshev_distance(GridPos a, GridPos b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

bool in_deployment_zone(int player, GridPos p) {
  if (!on_board(p)) return false;
  return player == 0 ? p.y < kDeployDepth : p.y >= kBoardHeight - kDeployDepth;
}

const char* to_string(UnitFlag f) {
  switch (f) {
    case UnitFlag::moved: return "moved";
    case UnitFlag::advanced: return "advanced";
    case UnitFlag::fell_back: return "fell_back";
    case UnitFlag::shot: return "shot";
    case UnitFlag::declared_charge: return "declared_charge";
    case UnitFlag::charged_this_turn: return "charged_this_turn";
    case UnitFlag::fought: return "fought";
    case UnitFlag::battle_shocked: return "battle_shocked";
  }
  return "?";
}

const char* to_string(Phase p) {
  switch (p) {
    case Phase::command: return "command";
    case Phase::movement: return "movement";
    case Phase::shooting: return "shooting";
    case Phase::charge: return "charge";
    case Phase::fight: return "fight";
    case Phase::end: return "end";
  }
  return "?";
}

const char* to_string(Sequence s) {
  switch (s) {
    case Sequence::game: return "game";
    case Sequence::round: return "round";
    case Sequence::turn: return "turn";
    case Sequence::command_phase: return "command_phase";
    case Sequence::movement_phase: return "movement_phase";
    case Sequence::shooting_phase: return "shooting_phase";
    case Sequence::charge_phase: return "charge_phase";
    case Sequence::fight_phase: return "fight_phase";
    case Sequence::scoring: return "scoring";
    case Sequence::single_attack: return "single_attack";
    case Sequence::roll_dice: return "roll_dice";
    case Sequence::battle_shock_test: return "battle_shock_test";
    case Sequence::charge_resolution: return "charge_resolution";
  }
  return "?";
}

const char* to_string(Control c) {
  switch (c) {
    case Control::none: return "none";
    case Control::p0: return "p0";
    case Control::p1: return "p1";
    case Control::contested: return "contested";
  }
  return "?";
}

bool UnitState::alive() const {
  return std::any_of(models.begin(), models.end(), [](const ModelState& m) { return m.alive(); });
}

int UnitState::alive_models() const {
  return static_cast<int>(
      std::count_if(models.begin(), models.end(), [](const ModelState& m) { return m.alive(); }));
}

int UnitState::wounds_remaining() const {
  int total = 0;
  for (const auto& m : models) total += m.wounds_remaining;
  return total;
}

int UnitState::anchor() const {
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (models[i].alive()) return static_cast<int>(i);
  }
  return -1;
}

const UnitState* GameState::find_unit(int unit_id) const {
  for (const auto& u : units) {
    if (u.unit_id == unit_id) return &u;
  }
  return nullptr;
}

UnitState* GameState::find_unit(int unit_id) {
  for (auto& u : units) {
    if (u.unit_id == unit_id) return &u;
  }
  return nullptr;
}

int GameState::alive_models(int player) const {
  int n = 0;
  for (const auto& u : units) {
    if (u.owner == player) n += u.alive_models();
  }
  return n;
}

int GameState::starting_models(int player) const {
  int n = 0;
  for (const auto& u : units) {
    if (u.owner == player) n += static_cast<int>(u.models.size());
  }
  return n;
}

Occupancy::Occupancy(const GameState& s) {
  cells_.fill(-1);
  for (const auto& u : s.units) {
    if (!u.deployed) continue;
    for (const auto& m : u.models) {
      if (m.alive() && on_board(m.position)) {
        cells_[square_index(m.position)] = static_cast<std::int8_t>(u.unit_id);
      }
    }
  }
}

Control objective_control(const GameState& s, int marker_index) {
  const ObjectiveMarker& marker = s.objectives.at(static_cast<std::size_t>(marker_index));
  std::array<int, 2> oc{0, 0};
  for (const auto& u : s.units) {
    if (!u.on_table() || u.flags.has(UnitFlag::battle_shocked)) continue;
    const int per_model = s.sheet(u).objective_control;
    for (const auto& m : u.models) {
      if (m.alive() && chebyshev_distance(m.position, marker.position) <= marker.control_radius) {
        oc[u.owner] += per_model;
      }
    }
  }
  if (oc[0] > oc[1]) return Control::p0;
  if (oc[1] > oc[0]) return Control::p1;
  return oc[0] == 0 ? Control::none : Control::contested;
}

namespace {

bool units_within(const UnitState& a, const UnitState& b, int range) {
  for (const auto& ma : a.models) {
    if (!ma.alive()) continue;
    for (const auto& mb : b.models) {
      if (mb.alive() && chebyshev_distance(ma.position, mb.position) <= range) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<int> engaged_units(const GameState& s, int unit_id) {
  std::vector<int> out;
  const UnitState* unit = s.find_unit(unit_id);
  if (unit == nullptr || !unit->on_table()) return out;
  for (const auto& other : s.units) {
    if (other.owner == unit->owner || !other.on_table()) continue;
    if (units_within(*unit, other, kEngagementRange)) out.push_back(other.unit_id);
  }
  return out;
}

bool is_engaged(const GameState& s, const UnitState& u) {
  if (!u.on_table()) return false;
  for (const auto& other : s.units) {
    if (other.owner != u.owner && other.on_table() && units_within(u, other, kEngagementRange)) {
      return true;
    }
  }
  return false;
}

bool is_coherent(const UnitState& u) {
  std::vector<GridPos> pos;
  for (const auto& m : u.models) {
    if (m.alive()) pos.push_back(m.position);
  }
  if (pos.size() <= 1) return true;
  std::vector<bool> seen(pos.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < pos.size(); ++j) {
      if (!seen[j] && chebyshev_distance(pos[i], pos[j]) <= kCoherencyRange) {
        seen[j] = true;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == pos.size();
}

namespace {

void bound(std::vector<std::string>& out, const std::string& what, long long v, long long lo,
           long long hi) {
  if (v < lo || v > hi) {
    out.push_back(what + " = " + std::to_string(v) + " outside " + std::to_string(lo) + ".." +
                  std::to_string(hi));
  }
}

}  // namespace

std::vector<std::string> validate_state(const GameState& s) {
  std::vector<std::string> out;
  bound(out, "round", s.round, 1, kMaxRounds);
  bound(out, "phase", static_cast<int>(s.phase), 0, kPhaseCount - 1);
  bound(out, "active_player", s.active_player, 0, 1);
  bound(out, "first_player", s.first_player, 0, 1);
  bound(out, "decision_count", s.decision_count, 0, kDecisionBudget);
  for (int p = 0; p < 2; ++p) {
    const std::string who = "player " + std::to_string(p);
    bound(out, who + " command_points", s.players[p].command_points, 0, kMaxCommandPoints);
    bound(out, who + " victory_points", s.players[p].victory_points, 0, kMaxVictoryPoints);
  }

  if (s.units.size() > static_cast<std::size_t>(kMaxUnits)) {
    out.push_back("more than " + std::to_string(kMaxUnits) + " units");
  }
  if (s.datasheets.size() != s.units.size()) {
    out.push_back("datasheet table size " + std::to_string(s.datasheets.size()) +
                  " does not match unit count " + std::to_string(s.units.size()));
  }
  for (const auto& sheet : s.datasheets) {
    for (auto& v : validate_datasheet(sheet)) out.push_back("datasheet " + v);
  }

  std::array<int, kSquares> owner_of{};
  owner_of.fill(-1);
  int prev_id = -1;
  std::array<int, 2> per_side{0, 0};
  for (const auto& u : s.units) {
    const std::string who = "unit " + std::to_string(u.unit_id);
    if (u.unit_id <= prev_id) out.push_back(who + " out of id order");
    prev_id = u.unit_id;
    bound(out, who + " id", u.unit_id, 0, kMaxUnits - 1);
    bound(out, who + " owner", u.owner, 0, 1);
    if (u.owner != (u.unit_id < kMaxUnitsPerSide ? 0 : 1)) {
      out.push_back(who + " owner does not match id range");
    }
    if (u.owner == 0 || u.owner == 1) ++per_side[u.owner];
    if (u.datasheet < 0 || u.datasheet >= static_cast<int>(s.datasheets.size())) {
      out.push_back(who + " datasheet index " + std::to_string(u.datasheet) + " invalid");
      continue;
    }
    const Datasheet& sheet = s.sheet(u);
    if (static_cast<int>(u.models.size()) != sheet.models) {
      out.push_back(who + " has " + std::to_string(u.models.size()) + " models, datasheet says " +
                    std::to_string(sheet.models));
    }
    for (std::size_t i = 0; i < u.models.size(); ++i) {
      const ModelState& m = u.models[i];
      const std::string mw = who + " model " + std::to_string(i);
      bound(out, mw + " wounds_remaining", m.wounds_remaining, 0, sheet.wounds_per_model);
      if (!u.deployed) continue;
      bound(out, mw + " x", m.position.x, 0, kBoardWidth - 1);
      bound(out, mw + " y", m.position.y, 0, kBoardHeight - 1);
      if (!m.alive() || !on_board(m.position)) continue;
      int& cell = owner_of[square_index(m.position)];
      if (cell != -1) {
        out.push_back("square (" + std::to_string(m.position.x) + ", " +
                      std::to_string(m.position.y) + ") holds two models");
      }
      cell = u.unit_id;
    }
    if (u.deployed) {
      std::vector<GridPos> alive;
      for (const auto& m : u.models) {
        if (m.alive()) alive.push_back(m.position);
      }
      if (alive.size() > 1) {
        for (std::size_t i = 0; i < alive.size(); ++i) {
          bool near = false;
          for (std::size_t j = 0; j < alive.size() && !near; ++j) {
            near = i != j && chebyshev_distance(alive[i], alive[j]) <= kCoherencyRange;
          }
          if (!near) {
            out.push_back(who + " is out of coherency");
            break;
          }
        }
      }
    }
  }
  for (int p = 0; p < 2; ++p) {
    bound(out, "player " + std::to_string(p) + " unit count", per_side[p], 0, kMaxUnitsPerSide);
  }

  for (std::size_t i = 0; i < s.objectives.size(); ++i) {
    if (s.objectives[i].position != kObjectivePositions[i] ||
        s.objectives[i].control_radius != kObjectiveRadius) {
      out.push_back("objective " + std::to_string(i) + " moved or resized");
    }
  }

  bound(out, "sequence_stack depth", static_cast<long long>(s.sequence_stack.size()), 0,
        kMaxStackDepth);
  if (!s.terminal && s.sequence_stack.empty()) {
    out.push_back("non-terminal state with empty sequence stack");
  }
  if (!s.sequence_stack.empty() && s.sequence_stack.front().sequence != Sequence::game) {
    out.push_back("sequence stack does not start with the game sequence");
  }
  for (const auto& f : s.sequence_stack) {
    bound(out, std::string("frame ") + to_string(f.sequence) + " step", f.step, 0, 63);
  }
  if (s.terminal) {
    bound(out, "result winner", s.terminal->winner, -1, 1);
    bound(out, "result vp0", s.terminal->vp[0], 0, kMaxVictoryPoints);
    bound(out, "result vp1", s.terminal->vp[1], 0, kMaxVictoryPoints);
  }
  return out;
}

}  // namespace fourhammer
