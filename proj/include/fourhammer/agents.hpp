#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "fourhammer/rules.hpp"
#include "fourhammer/scenarios.hpp"

namespace fourhammer {

class Agent {
 public:
  virtual ~Agent() = default;
  virtual Action choose(const GameState& s, const DecisionRequest& d) = 0;
};

/// Uniform over the legal options.
class RandomAgent : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed) : rng_(seed) {}
  Action choose(const GameState& s, const DecisionRequest& d) override;

 private:
  std::mt19937_64 rng_;
};

/// Deterministic one-ply heuristic; ties go to the lowest action id.
class GreedyAgent : public Agent {
 public:
  Action choose(const GameState& s, const DecisionRequest& d) override;
};

/// Replays a fixed list of action ids. Throws Error naming the step when
/// an id is illegal or the list runs out.
class ScriptedAgent : public Agent {
 public:
  explicit ScriptedAgent(std::vector<int> ids) : ids_(std::move(ids)) {}
  Action choose(const GameState& s, const DecisionRequest& d) override;

 private:
  std::vector<int> ids_;
  std::size_t next_ = 0;
};

/// Action ids from a script file: whitespace-separated integers, `#` comments.
std::vector<int> read_script(const std::string& path);

/// "random", "greedy" or "scripted:<file>". The random agent of player p is
/// seeded with seed + p.
std::unique_ptr<Agent> make_agent(std::string_view spec, std::uint64_t seed, int player);

struct PlayedGame {
  std::uint64_t seed = 0;
  GameState state;
  std::vector<int> actions;
  EventLog events;
};

PlayedGame play_game(ScenarioKind scenario, std::uint64_t seed, const Registry& registry,
                     Agent& p0, Agent& p1);

/// Re-apply action ids from the scenario's initial state. Throws
/// IllegalAction naming the step on the first illegal id.
PlayedGame replay_game(ScenarioKind scenario, std::uint64_t seed, const Registry& registry,
                       const std::vector<int>& actions);

/// `seed=<n>`, one action id per line, `---`, then one JSON event per line.
std::string render_transcript(const PlayedGame& g);
/// Seed and action ids of a transcript; the event section is ignored.
PlayedGame parse_transcript(std::string_view text);

}  // namespace fourhammer
