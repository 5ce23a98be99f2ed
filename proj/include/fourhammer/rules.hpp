#pragma once

#include <optional>
#include <variant>

#include "fourhammer/actions.hpp"
#include "fourhammer/board.hpp"
#include "fourhammer/events.hpp"

namespace fourhammer {

class IllegalAction : public Error {
 public:
  using Error::Error;
};

class GameAlreadyOver : public Error {
 public:
  using Error::Error;
};

/// Raised when the engine reaches a state it should never produce.
class InternalError : public Error {
 public:
  using Error::Error;
};

using DecisionOrResult = std::variant<DecisionRequest, GameResult>;

DecisionOrResult current_decision(const GameState& s);
/// The pending decision; throws GameAlreadyOver on terminal states.
DecisionRequest pending_decision(const GameState& s);

struct Transition {
  GameState state;
  EventLog events;
};

/// Apply one decision and run chance nodes and forced decisions until the
/// next free decision or the end of the game.
Transition apply(const GameState& s, const Action& a);
/// In-place variant; events are appended to `events` when non-null.
void apply_in_place(GameState& s, const Action& a, EventLog* events = nullptr);
bool is_legal(const GameState& s, const Action& a);

std::optional<GameResult> is_terminal(const GameState& s);

/// Run chance nodes and forced decisions from the current frame until the
/// next free decision or the end of the game. Used after hand-built setups.
void run_until_decision(GameState& s, EventLog* events = nullptr);

/// Same as new_state but also returns the roll-off events.
Transition start_game(const std::array<std::vector<Datasheet>, 2>& rosters, std::uint64_t seed);
/// Rosters given by datasheet name; throws Error for unknown names.
GameState new_state(const Registry& registry, const std::array<std::vector<std::string>, 2>& names,
                    std::uint64_t seed);

// Dice thresholds.
int hit_threshold(const WeaponProfile& w);
int wound_threshold(int strength, int toughness);
/// 7 means no save is possible.
int save_threshold(const Datasheet& d, int ap);
bool hit_succeeds(int roll, int threshold);
bool wound_succeeds(int roll, int threshold);
bool save_succeeds(int roll, int threshold);
/// P(2d6 >= needed), exact.
double two_d6_at_least(int needed);

/// Context of a reroll_offer decision, for agents and renderers.
struct PendingRoll {
  RollPurpose purpose = RollPurpose::charge;
  int actor = 0;
  int subject_unit = -1;
  int die1 = 0;
  int die2 = 0;
  int total = 0;
  int needed = 0;  // charge distance or leadership
};
std::optional<PendingRoll> pending_roll(const GameState& s);

/// Unit the pending spatial or allocation decision refers to, or -1.
int decision_subject_unit(const GameState& s);

struct AttackRef {
  int attacker_unit = 0;
  int model = 0;
  int weapon = 0;
  int target_unit = 0;
};

/// Run one single_attack sequence to completion on `s` (forced allocation
/// decisions resolved automatically, otherwise the lowest option is taken).
/// Returns the wounds removed from the target.
int resolve_single_attack(GameState& s, const AttackRef& attack, EventLog* events = nullptr);

/// Pack a unit onto the board around `anchor` ignoring deployment zones.
/// Throws Error when the models cannot be placed.
void place_unit(GameState& s, int unit_id, GridPos anchor);

/// Structural checks on the sequence stack beyond validate_state: frame
/// nesting, step ranges and every unit, model or weapon a frame refers to.
std::vector<std::string> validate_sequence_stack(const GameState& s);

/// Frames used by the scenario constructors.
SequenceFrame make_frame(Sequence seq, int step = 0);
namespace steps {
inline constexpr int kGameAfterRound = 8;
inline constexpr int kShootingSelect = 1;
}  // namespace steps

}  // namespace fourhammer
