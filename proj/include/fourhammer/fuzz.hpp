#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fourhammer/scenarios.hpp"

namespace fourhammer {

struct FuzzOptions {
  int games = 1;
  std::uint64_t seed = 0;
  int max_decisions = kDecisionBudget;
  int jobs = 1;
  ScenarioKind scenario = ScenarioKind::full_game;
  /// Test hook: treat player 0 holding 2+ CP as a broken bound.
  bool inject_fault = false;
};

struct Reproduction {
  std::uint64_t seed = 0;
  std::vector<int> actions;
  std::string message;
};

struct FuzzReport {
  int games = 0;
  long long decisions = 0;
  std::vector<int> decision_counts;  // per completed game, in seed order
  double seconds = 0.0;
  std::optional<Reproduction> violation;  // first by seed, minimized
};

/// Uniformly random legal play from consecutive seeds, checking every
/// reached state. Stops at the first violation.
FuzzReport run_fuzz(const FuzzOptions& options, const Registry& registry);

/// The violation produced by replaying `actions`, or nullopt if the replay
/// is clean (or diverges into an illegal action).
std::optional<std::string> check_replay(const FuzzOptions& options, const Registry& registry,
                                        std::uint64_t seed, const std::vector<int>& actions);

/// Greedy segment deletion keeping the violation reproducible.
Reproduction minimize(const FuzzOptions& options, const Registry& registry, Reproduction r);

}  // namespace fourhammer
