#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fourhammer/scenarios.hpp"

namespace fourhammer {

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
/// Throws DecodeError on characters outside the alphabet.
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// One game, its seats and its event log; the message handler behind the
/// TCP and WebSocket front ends. Not thread-safe: the server calls it from a
/// single strand.
class Session {
 public:
  Session(ScenarioKind scenario, std::uint64_t seed, Registry registry);

  struct Outcome {
    nlohmann::json reply;
    /// Messages for every connected client, in order.
    std::vector<nlohmann::json> broadcasts;
  };

  Outcome handle(int client, std::string_view line);
  Outcome handle(int client, const nlohmann::json& message);
  /// Frees any seats the client holds.
  void disconnect(int client);

  const GameState& state() const { return state_; }
  const EventLog& events() const { return log_; }
  std::optional<int> seat_holder(int seat) const { return seats_[static_cast<std::size_t>(seat)]; }

 private:
  void restart(ScenarioKind scenario, std::uint64_t seed, Outcome& out);
  void announce(const EventLog& events, Outcome& out) const;

  Registry registry_;
  ScenarioKind scenario_;
  GameState state_;
  EventLog log_;
  std::array<std::optional<int>, 2> seats_;
};

}  // namespace fourhammer
