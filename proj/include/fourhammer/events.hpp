#pragma once

#include <cstdint>
#include <vector>

namespace fourhammer {

enum class EventKind : std::uint8_t {
  phase_started,
  dice_rolled,
  reroll_used,
  move_made,
  damage_dealt,
  model_slain,
  unit_destroyed,
  battle_shock_result,
  charge_result,
  vp_scored,
  cp_changed,
  game_over,
};
inline constexpr int kEventKindCount = 12;
const char* to_string(EventKind k);

inline constexpr int kNoActor = -1;

/// Append-only log entry. Payload layouts per kind are listed in
/// docs/formats.md.
struct EventRecord {
  std::uint64_t ordinal = 0;
  EventKind kind = EventKind::phase_started;
  int actor = kNoActor;
  std::vector<std::int32_t> payload;

  bool operator==(const EventRecord&) const = default;
};

using EventLog = std::vector<EventRecord>;

/// Purpose codes carried by dice_rolled and reroll_used events.
enum class RollPurpose : std::uint8_t {
  roll_off,
  advance,
  charge,
  battle_shock,
  hit,
  wound,
  save,
};
const char* to_string(RollPurpose p);

}  // namespace fourhammer
