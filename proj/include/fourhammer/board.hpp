#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fourhammer/rng.hpp"
#include "fourhammer/stats.hpp"

namespace fourhammer {

inline constexpr int kBoardWidth = 44;
inline constexpr int kBoardHeight = 30;
inline constexpr int kSquares = kBoardWidth * kBoardHeight;
inline constexpr int kMaxUnitsPerSide = 8;
inline constexpr int kMaxUnits = 2 * kMaxUnitsPerSide;
inline constexpr int kMaxCommandPoints = 10;
inline constexpr int kMaxVictoryPoints = 60;
inline constexpr int kMaxRounds = 5;
inline constexpr int kObjectiveRadius = 3;
inline constexpr int kEngagementRange = 1;
inline constexpr int kCoherencyRange = 2;
inline constexpr int kMaxStackDepth = 16;
inline constexpr int kDecisionBudget = 20000;
inline constexpr int kDeployDepth = 6;

struct GridPos {
  int x = 0;
  int y = 0;

  bool operator==(const GridPos&) const = default;
  auto operator<=>(const GridPos&) const = default;
};

inline bool on_board(GridPos p) {
  return p.x >= 0 && p.x < kBoardWidth && p.y >= 0 && p.y < kBoardHeight;
}
inline int square_index(GridPos p) { return p.y * kBoardWidth + p.x; }
inline GridPos square_at(int index) { return {index % kBoardWidth, index / kBoardWidth}; }

int chebyshev_distance(GridPos a, GridPos b);

/// Deployment zones are the six rows along each player's table edge.
bool in_deployment_zone(int player, GridPos p);

struct ModelState {
  GridPos position;
  int wounds_remaining = 0;  // 0 = destroyed

  bool alive() const { return wounds_remaining > 0; }
  bool operator==(const ModelState&) const = default;
};

enum class UnitFlag : std::uint8_t {
  moved,
  advanced,
  fell_back,
  shot,
  declared_charge,
  charged_this_turn,
  fought,
  battle_shocked,
};
inline constexpr int kUnitFlagCount = 8;

class FlagSet {
 public:
  bool has(UnitFlag f) const { return (bits_ >> static_cast<int>(f)) & 1U; }
  void set(UnitFlag f) { bits_ |= static_cast<std::uint8_t>(1U << static_cast<int>(f)); }
  void clear(UnitFlag f) { bits_ &= static_cast<std::uint8_t>(~(1U << static_cast<int>(f))); }
  std::uint8_t bits() const { return bits_; }
  static FlagSet from_bits(std::uint8_t b) {
    FlagSet f;
    f.bits_ = b;
    return f;
  }
  bool operator==(const FlagSet&) const = default;

 private:
  std::uint8_t bits_ = 0;
};

const char* to_string(UnitFlag f);

struct UnitState {
  int unit_id = 0;  // 0-7 player 0, 8-15 player 1
  int datasheet = 0;  // index into GameState::datasheets
  int owner = 0;
  bool deployed = false;
  std::vector<ModelState> models;
  FlagSet flags;

  bool alive() const;
  int alive_models() const;
  int wounds_remaining() const;
  /// First alive model; spatial decisions refer to it. -1 when destroyed.
  int anchor() const;
  /// Alive models on the board.
  bool on_table() const { return deployed && alive(); }

  bool operator==(const UnitState&) const = default;
};

struct PlayerState {
  std::string faction;
  int command_points = 0;
  int victory_points = 0;
  bool stratagem_used_this_phase = false;

  bool operator==(const PlayerState&) const = default;
};

struct ObjectiveMarker {
  GridPos position;
  int control_radius = kObjectiveRadius;

  bool operator==(const ObjectiveMarker&) const = default;
};

inline constexpr std::array<GridPos, 4> kObjectivePositions{
    GridPos{11, 15}, GridPos{33, 15}, GridPos{22, 7}, GridPos{22, 22}};

enum class Phase : std::uint8_t { command, movement, shooting, charge, fight, end };
inline constexpr int kPhaseCount = 6;
const char* to_string(Phase p);

/// Winner index 0 or 1, or kDraw.
inline constexpr int kDraw = -1;

struct GameResult {
  int winner = kDraw;
  std::array<int, 2> vp{0, 0};
  bool budget_exhausted = false;

  bool operator==(const GameResult&) const = default;
};

enum class Sequence : std::uint8_t {
  game,
  round,
  turn,
  command_phase,
  movement_phase,
  shooting_phase,
  charge_phase,
  fight_phase,
  scoring,
  single_attack,
  roll_dice,
  battle_shock_test,
  charge_resolution,
};
inline constexpr int kSequenceCount = 13;
const char* to_string(Sequence s);

inline constexpr int kFrameLocals = 8;

/// One activation record of the sequence engine. `locals` is a small fixed
/// register file whose meaning depends on `sequence`.
struct SequenceFrame {
  Sequence sequence = Sequence::game;
  int step = 0;
  std::array<std::int32_t, kFrameLocals> locals{};

  bool operator==(const SequenceFrame&) const = default;
};

enum class ScenarioKind : std::uint8_t { full_game, single_turn, single_shooting_maximize };

struct GameState {
  int round = 1;
  Phase phase = Phase::command;
  int active_player = 0;
  int first_player = 0;
  std::array<PlayerState, 2> players;
  std::vector<UnitState> units;  // ordered by unit_id
  std::array<ObjectiveMarker, 4> objectives;
  std::vector<SequenceFrame> sequence_stack;
  RngStream rng;
  int decision_count = 0;
  std::optional<GameResult> terminal;

  ScenarioKind scenario = ScenarioKind::full_game;
  bool auto_resolve = true;
  std::vector<Datasheet> datasheets;
  std::uint64_t next_event_ordinal = 0;

  const UnitState* find_unit(int unit_id) const;
  UnitState* find_unit(int unit_id);
  const Datasheet& sheet(const UnitState& u) const { return datasheets[u.datasheet]; }
  int alive_models(int player) const;
  int starting_models(int player) const;

  bool operator==(const GameState&) const = default;
};

/// Build the opening state for a full game: roll-off resolved, deployment
/// pending. Throws Error for empty or oversized rosters.
GameState new_state(const std::array<std::vector<Datasheet>, 2>& rosters, std::uint64_t seed);

/// Every broken bound or structural invariant, one description each.
std::vector<std::string> validate_state(const GameState& s);

enum class Control : std::uint8_t { none, p0, p1, contested };
const char* to_string(Control c);

Control objective_control(const GameState& s, int marker_index);

/// Enemy units with an alive model within engagement range of the unit.
std::vector<int> engaged_units(const GameState& s, int unit_id);
bool is_engaged(const GameState& s, const UnitState& u);

/// Alive models of a unit form one connected group under the coherency
/// distance (stronger than each model merely having a neighbour).
bool is_coherent(const UnitState& u);

/// Square -> unit id of the alive model standing there, or -1.
class Occupancy {
 public:
  explicit Occupancy(const GameState& s);
  int at(GridPos p) const { return cells_[square_index(p)]; }
  int at(int index) const { return cells_[index]; }

 private:
  std::array<std::int8_t, kSquares> cells_;
};

}  // namespace fourhammer
