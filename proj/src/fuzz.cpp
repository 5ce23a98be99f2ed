#include "fourhammer/fuzz.hpp"

#include <atomic>
#include <chrono>
#include <random>
#include <thread>

#include "fourhammer/agents.hpp"

namespace fourhammer {

namespace {

std::optional<std::string> check_state(const FuzzOptions& o, const GameState& s) {
  std::vector<std::string> issues;
  if (o.inject_fault && s.players[0].command_points >= 2) {
    GameState broken = s;
    broken.players[0].command_points = kMaxCommandPoints + 1;
    issues = validate_state(broken);
  } else {
    issues = validate_state(s);
  }
  if (!issues.empty()) return "invalid state: " + issues.front();
  if (s.terminal) return std::nullopt;
  if (s.decision_count >= o.max_decisions) {
    return "no terminal state within " + std::to_string(o.max_decisions) + " decisions";
  }
  if (pending_decision(s).options.empty()) return "empty option list";
  return std::nullopt;
}

struct GameOutcome {
  int decisions = 0;
  std::optional<Reproduction> violation;
};

GameOutcome fuzz_one(const FuzzOptions& o, const Registry& registry, std::uint64_t seed) {
  GameOutcome out;
  std::vector<int> actions;
  auto fail = [&](std::string msg) {
    out.violation = Reproduction{seed, actions, std::move(msg)};
    return out;
  };
  try {
    GameState s = make_scenario(o.scenario, seed, registry);
    std::mt19937_64 rng(seed);
    if (auto v = check_state(o, s)) return fail(*v);
    while (!s.terminal) {
      const DecisionRequest d = pending_decision(s);
      std::uniform_int_distribution<std::size_t> pick(0, d.options.size() - 1);
      const Action a = d.options[pick(rng)];
      actions.push_back(action_to_id(a));
      apply_in_place(s, a);
      if (auto v = check_state(o, s)) return fail(*v);
    }
    out.decisions = s.decision_count;
  } catch (const std::exception& e) {
    return fail(std::string("exception: ") + e.what());
  }
  return out;
}

}  // namespace

std::optional<std::string> check_replay(const FuzzOptions& o, const Registry& registry,
                                        std::uint64_t seed, const std::vector<int>& actions) {
  try {
    GameState s = make_scenario(o.scenario, seed, registry);
    if (auto v = check_state(o, s)) return v;
    for (int id : actions) {
      if (s.terminal || !is_legal(s, id_to_action(id))) return std::nullopt;
      apply_in_place(s, id_to_action(id));
      if (auto v = check_state(o, s)) return v;
    }
  } catch (const std::exception& e) {
    return std::string("exception: ") + e.what();
  }
  return std::nullopt;
}

Reproduction minimize(const FuzzOptions& o, const Registry& registry, Reproduction r) {
  for (std::size_t chunk = std::max<std::size_t>(r.actions.size() / 2, 1); chunk >= 1; chunk /= 2) {
    std::size_t start = 0;
    while (start < r.actions.size()) {
      std::vector<int> trial(r.actions.begin(), r.actions.begin() + static_cast<long>(start));
      const std::size_t end = std::min(start + chunk, r.actions.size());
      trial.insert(trial.end(), r.actions.begin() + static_cast<long>(end), r.actions.end());
      if (auto v = check_replay(o, registry, r.seed, trial)) {
        r.actions = std::move(trial);
        r.message = *v;
      } else {
        start += chunk;
      }
    }
    if (chunk == 1) break;
  }
  return r;
}

FuzzReport run_fuzz(const FuzzOptions& o, const Registry& registry) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = o.games;
  std::vector<GameOutcome> outcomes(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::atomic<int> first_bad{n};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      if (i > first_bad.load()) break;
      outcomes[static_cast<std::size_t>(i)] = fuzz_one(o, registry, o.seed + static_cast<std::uint64_t>(i));
      if (outcomes[static_cast<std::size_t>(i)].violation) {
        int cur = first_bad.load();
        while (i < cur && !first_bad.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };
  const int jobs = std::max(1, o.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  FuzzReport report;
  for (int i = 0; i < n; ++i) {
    const auto& out = outcomes[static_cast<std::size_t>(i)];
    if (out.violation) {
      report.violation = minimize(o, registry, *out.violation);
      break;
    }
    ++report.games;
    report.decisions += out.decisions;
    report.decision_counts.push_back(out.decisions);
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace fourhammer
