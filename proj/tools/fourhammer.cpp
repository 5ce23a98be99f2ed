#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fourhammer/agents.hpp"
#include "fourhammer/encodings.hpp"
#include "fourhammer/fuzz.hpp"
#include "fourhammer/server.hpp"
#include "fourhammer/wire.hpp"

using namespace fourhammer;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string stats;
  std::uint64_t seed = 0;
  std::string scenario = "full_game";

  Registry registry() const {
    if (stats.empty()) return builtin_registry();
    try {
      Registry r = load_registry_file(stats);
      if (auto v = validate_registry(r); !v.empty()) throw UsageError(stats + ": " + v.front());
      return r;
    } catch (const UsageError&) {
      throw;
    } catch (const Error& e) {
      throw UsageError(stats + ": " + e.what());
    }
  }
  ScenarioKind kind() const {
    try {
      return parse_scenario(scenario);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
};

void add_common(CLI::App* cmd, Common& c, bool with_scenario = true) {
  cmd->add_option("--stats", c.stats, "Datasheet file (default: shipped rosters)");
  cmd->add_option("--seed", c.seed, "Game seed");
  if (with_scenario) {
    cmd->add_option("--scenario", c.scenario, "full_game, single_turn or single_shooting_maximize");
  }
}

std::string winner_text(const GameResult& r) {
  return r.winner == kDraw ? "draw" : "p" + std::to_string(r.winner);
}

int cmd_play(const Common& c, const std::string& p0, const std::string& p1,
             const std::string& transcript) {
  const Registry registry = c.registry();
  const ScenarioKind kind = c.kind();
  std::unique_ptr<Agent> a0;
  std::unique_ptr<Agent> a1;
  try {
    a0 = make_agent(p0, c.seed, 0);
    a1 = make_agent(p1, c.seed, 1);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const PlayedGame g = play_game(kind, c.seed, registry, *a0, *a1);
  const GameResult& r = *g.state.terminal;
  std::printf("result: %s\nVP: %d - %d\ndecisions: %d\nreward: %.4f / %.4f\n",
              winner_text(r).c_str(), r.vp[0], r.vp[1], g.state.decision_count,
              reward(g.state, 0), reward(g.state, 1));
  if (r.budget_exhausted) std::printf("decision budget exhausted\n");
  if (!transcript.empty()) {
    std::ofstream out(transcript);
    if (!out) throw UsageError("cannot write " + transcript);
    out << render_transcript(g);
  }
  return kExitOk;
}

int cmd_replay(const Common& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream text;
  text << in.rdbuf();
  const PlayedGame header = parse_transcript(text.str());
  const PlayedGame g = replay_game(c.kind(), header.seed, c.registry(), header.actions);
  const std::string again = render_transcript(g);
  if (again != text.str()) {
    std::fprintf(stderr, "replay diverges from %s\n", path.c_str());
    return kExitViolation;
  }
  std::printf("replay matches: %zu actions, %zu events\n", g.actions.size(), g.events.size());
  return kExitOk;
}

int cmd_fuzz(const Common& c, FuzzOptions o) {
  if (o.games < 1) throw UsageError("--games must be at least 1");
  if (o.max_decisions < 1) throw UsageError("--max-decisions must be at least 1");
  o.seed = c.seed;
  o.scenario = c.kind();
  const FuzzReport r = run_fuzz(o, c.registry());
  if (r.violation) {
    std::printf("VIOLATION seed=%llu after %zu actions: %s\n",
                static_cast<unsigned long long>(r.violation->seed), r.violation->actions.size(),
                r.violation->message.c_str());
    std::printf("reproduction:\nseed=%llu\n", static_cast<unsigned long long>(r.violation->seed));
    for (int id : r.violation->actions) std::printf("%d\n", id);
    return kExitViolation;
  }
  auto counts = r.decision_counts;
  std::sort(counts.begin(), counts.end());
  auto at = [&](double q) { return counts[static_cast<std::size_t>(q * (counts.size() - 1))]; };
  std::printf("fuzz: %d games, 0 violations, %.2f s, %.1f games/s, %.0f decisions/s\n", r.games,
              r.seconds, r.games / std::max(r.seconds, 1e-9),
              static_cast<double>(r.decisions) / std::max(r.seconds, 1e-9));
  std::printf("decisions per game: min %d, median %d, p90 %d, max %d, mean %.1f\n", counts.front(),
              at(0.5), at(0.9), counts.back(), static_cast<double>(r.decisions) / r.games);
  return kExitOk;
}

int cmd_dump(const Common& c, const std::string& format) {
  const GameState s = make_scenario(c.kind(), c.seed, c.registry());
  if (format == "text") {
    std::cout << encode_text(s);
  } else if (format == "json") {
    std::cout << encode_json(s) << "\n";
  } else if (format == "tensor") {
    const auto t = encode_tensor(s);
    for (std::size_t i = 0; i < t.size(); ++i) std::cout << (i ? " " : "") << t[i];
    std::cout << "\n";
  } else if (format == "binary") {
    const auto b = encode_binary(s);
    std::cout.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
  } else {
    throw UsageError("unknown format: " + format);
  }
  return kExitOk;
}

int cmd_bench(const Common& c, int games) {
  if (games < 1) throw UsageError("--games must be at least 1");
  const Registry registry = c.registry();
  const ScenarioKind kind = c.kind();
  const auto t0 = std::chrono::steady_clock::now();
  long long decisions = 0;
  for (int i = 0; i < games; ++i) {
    RandomAgent a0(c.seed + static_cast<std::uint64_t>(i));
    RandomAgent a1(c.seed + static_cast<std::uint64_t>(i) + 1);
    decisions += play_game(kind, c.seed + static_cast<std::uint64_t>(i), registry, a0, a1).state.decision_count;
  }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("bench: %d games in %.3f s, %.1f games/s, %.0f decisions/s\n", games, sec,
              games / std::max(sec, 1e-9), static_cast<double>(decisions) / std::max(sec, 1e-9));
  return kExitOk;
}

int cmd_serve(const Common& c, const std::string& host, unsigned short port) {
  ServerOptions o;
  o.host = host;
  o.port = port;
  o.scenario = c.kind();
  o.seed = c.seed;
  o.registry = c.registry();
  Server server(std::move(o));
  std::printf("serving %s on tcp %s:%u, websocket %s:%u\n", c.scenario.c_str(), host.c_str(),
              server.tcp_port(), host.c_str(), server.ws_port());
  std::fflush(stdout);
  server.run();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fourhammer: Combat Patrol rules engine"};
  app.require_subcommand(1);

  Common common;

  auto* play = app.add_subcommand("play", "Play one headless game");
  std::string p0 = "random", p1 = "random", transcript;
  add_common(play, common);
  play->add_option("--p0", p0, "random, greedy or scripted:<file>");
  play->add_option("--p1", p1, "random, greedy or scripted:<file>");
  play->add_option("--transcript", transcript, "Write a replayable transcript");

  auto* replay = app.add_subcommand("replay", "Replay a transcript and check its event log");
  std::string replay_path;
  add_common(replay, common);
  replay->add_option("transcript", replay_path)->required();

  auto* fuzz = app.add_subcommand("fuzz", "Random legal games with invariant checks");
  FuzzOptions fo;
  add_common(fuzz, common);
  fuzz->add_option("--games", fo.games, "Number of games")->required();
  fuzz->add_option("--max-decisions", fo.max_decisions, "Per-game decision limit");
  fuzz->add_option("--jobs", fo.jobs, "Worker threads");
  fuzz->add_flag("--inject-fault", fo.inject_fault)->group("");

  auto* dump = app.add_subcommand("dump", "Print a scenario's initial state");
  std::string format = "text";
  add_common(dump, common);
  dump->add_option("--format", format, "text, json, tensor or binary");

  auto* bench = app.add_subcommand("bench", "Random-playout throughput");
  int bench_games = 100;
  add_common(bench, common);
  bench->add_option("--games", bench_games, "Number of games");

  auto* serve = app.add_subcommand("serve", "Run the game server");
  std::string host = "127.0.0.1";
  unsigned short port = 7451;
  add_common(serve, common);
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--port", port, "TCP port; WebSocket uses port+1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*play) return cmd_play(common, p0, p1, transcript);
    if (*replay) return cmd_replay(common, replay_path);
    if (*fuzz) return cmd_fuzz(common, fo);
    if (*dump) return cmd_dump(common, format);
    if (*bench) return cmd_bench(common, bench_games);
    if (*serve) return cmd_serve(common, host, port);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitViolation;
  }
  return kExitUsage;
}
