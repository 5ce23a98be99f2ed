#include <doctest.h>

#include <map>
#include <set>

#include "fourhammer/rules.hpp"
#include "fourhammer/wire.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fourhammer;
using testing::custom_state;
using testing::seed_where;

namespace {

SequenceFrame frame(Sequence seq, int step, std::initializer_list<std::pair<int, int>> locals = {}) {
  SequenceFrame f = make_frame(seq, step);
  for (const auto& [k, v] : locals) f.locals[static_cast<std::size_t>(k)] = v;
  return f;
}

// Step numbers of the frames built below.
constexpr int kRoundSecondTurn = 1;
constexpr int kTurnMovementNext = 1;
constexpr int kTurnShootingNext = 2;
constexpr int kTurnFightNext = 4;
constexpr int kCommandTests = 1;
constexpr int kMovementSelect = 1;
constexpr int kChargeSelect = 1;

/// Stack of player `p`'s first-round turn with `inner` on top.
void in_turn(GameState& s, int p, int turn_step, SequenceFrame inner) {
  s.active_player = p;
  s.first_player = p;
  s.sequence_stack = {make_frame(Sequence::game, steps::kGameAfterRound),
                      frame(Sequence::round, kRoundSecondTurn),
                      frame(Sequence::turn, turn_step, {{0, p}}), inner};
  // Frames not yet run are fine here; everything else must hold.
  auto issues = validate_sequence_stack(s);
  std::erase(issues, std::string("top frame is not at a decision"));
  const std::string first_issue = issues.empty() ? std::string() : issues.front();
  INFO(first_issue);
  REQUIRE(issues.empty());
}

const Datasheet& named(const char* name) { return builtin_registry().at(name); }

std::vector<EventRecord> of_kind(const EventLog& log, EventKind k) {
  std::vector<EventRecord> out;
  for (const auto& e : log) {
    if (e.kind == k) out.push_back(e);
  }
  return out;
}

}  // namespace

TEST_CASE("hit thresholds are the weapon skill") {
  for (int skill : {2, 3, 6}) {
    WeaponProfile w;
    w.skill = skill;
    CHECK(hit_threshold(w) == skill);
  }
}

TEST_CASE("wound thresholds") {
  CHECK(wound_threshold(4, 4) == 4);
  CHECK(wound_threshold(8, 4) == 2);
  CHECK(wound_threshold(3, 8) == 6);
  for (int s = 1; s <= 20; ++s) {
    for (int t = 1; t <= 14; ++t) {
      CAPTURE(s);
      CAPTURE(t);
      REQUIRE(wound_threshold(s, t) == oracle::wound_needed(s, t));
    }
  }
}

TEST_CASE("save thresholds") {
  Datasheet d;
  d.save = 3;
  CHECK(save_threshold(d, 1) == 4);
  d.invulnerable_save = 5;
  CHECK(save_threshold(d, 4) == 5);
  Datasheet e;
  e.save = 5;
  CHECK(save_threshold(e, 3) == 7);
}

TEST_CASE("unmodified ones and sixes") {
  for (int t = 2; t <= 6; ++t) {
    CHECK_FALSE(hit_succeeds(1, t));
    CHECK(hit_succeeds(6, t));
    CHECK_FALSE(wound_succeeds(1, t));
    CHECK(wound_succeeds(6, t));
    CHECK_FALSE(save_succeeds(1, t));
  }
  CHECK_FALSE(save_succeeds(6, 7));
  CHECK_FALSE(hit_succeeds(1, 1));
}

TEST_CASE("2d6 table") {
  CHECK(two_d6_at_least(7) == doctest::Approx(21.0 / 36.0));
  CHECK(two_d6_at_least(2) == 1.0);
  CHECK(two_d6_at_least(13) == 0.0);
  CHECK(two_d6_at_least(12) == doctest::Approx(1.0 / 36.0));
}

TEST_CASE("expected damage of the worked profile") {
  oracle::Profile p;
  p.hit = 3;
  p.strength = 4;
  p.toughness = 4;
  p.wound = 4;
  p.sv = 5;
  p.ap = 0;
  p.save = 5;
  p.damage = 1;
  CHECK(oracle::enumerate_expected_damage(p) == doctest::Approx(2.0 / 9.0));
  const double mc = oracle::monte_carlo_damage(p, 100000, 2024);
  CHECK(std::abs(mc - 2.0 / 9.0) / (2.0 / 9.0) < 0.02);
}

TEST_CASE("excess damage is lost on a slain model") {
  const Datasheet attacker = testing::sheet(
      1, 4, 4, std::nullopt, 1, {testing::ranged(24, 2, 20, 6, 3, 1), testing::melee(4, 4, 0, 1)});
  const Datasheet target = testing::sheet(2, 1, 6, std::nullopt, 1, {testing::melee(4, 4, 0, 1)});
  // Seed whose hit and wound dice both pass (neither is a 1).
  const std::uint64_t seed = seed_where([](int a, int b) { return a > 1 && b > 1; });
  GameState s = testing::duel(attacker, target, seed);
  EventLog log;
  CHECK(resolve_single_attack(s, {0, 0, 0, kMaxUnitsPerSide}, &log) == 1);
  const auto slain = of_kind(log, EventKind::model_slain);
  REQUIRE(slain.size() == 1);
  const int model = slain[0].payload[1];
  CHECK(slain[0].payload[0] == kMaxUnitsPerSide);
  CHECK(of_kind(log, EventKind::damage_dealt)[0].payload.back() == 1);
  CHECK(s.units[1].models[static_cast<std::size_t>(model)].wounds_remaining == 0);
  CHECK(s.units[1].models[static_cast<std::size_t>(1 - model)].wounds_remaining == 1);
  CHECK_FALSE(s.terminal.has_value());
}

TEST_CASE("battle-shock tests") {
  // Tyranid Warriors: three models, leadership 7.
  const Datasheet warriors = named("Tyranid Warriors");
  REQUIRE(warriors.leadership == 7);
  auto setup = [&](std::uint64_t seed, int dead) {
    GameState s = custom_state({named("Intercessor Squad")}, {warriors, named("Termagants")}, seed);
    place_unit(s, 0, {10, 3});
    place_unit(s, 8, {10, 26});
    place_unit(s, 9, {30, 26});
    for (int i = 0; i < dead; ++i) s.find_unit(8)->models[static_cast<std::size_t>(i)].wounds_remaining = 0;
    in_turn(s, 1, kTurnMovementNext, make_frame(Sequence::command_phase));
    return s;
  };

  SUBCASE("full-strength units are not tested") {
    GameState s = setup(0, 0);
    EventLog log;
    run_until_decision(s, &log);
    CHECK(of_kind(log, EventKind::battle_shock_result).empty());
    CHECK(pending_decision(s).kind == DecisionKind::select_move_unit);
  }
  SUBCASE("a roll equal to leadership passes") {
    GameState s = setup(seed_where([](int a, int b) { return a + b == 7; }), 2);
    EventLog log;
    run_until_decision(s, &log);
    REQUIRE(pending_decision(s).kind == DecisionKind::reroll_offer);
    const auto roll = pending_roll(s);
    REQUIRE(roll.has_value());
    CHECK(roll->purpose == RollPurpose::battle_shock);
    CHECK(roll->total == 7);
    CHECK(roll->needed == 7);
    apply_in_place(s, RerollDecline{}, &log);
    const auto res = of_kind(log, EventKind::battle_shock_result);
    REQUIRE(res.size() == 1);
    CHECK(res[0].payload == std::vector<std::int32_t>{8, 7, 7, 1});
    CHECK_FALSE(s.find_unit(8)->flags.has(UnitFlag::battle_shocked));
  }
  SUBCASE("a roll below leadership shocks the unit") {
    GameState s = setup(seed_where([](int a, int b) { return a + b == 6; }), 2);
    EventLog log;
    run_until_decision(s, &log);
    apply_in_place(s, RerollDecline{}, &log);
    const auto res = of_kind(log, EventKind::battle_shock_result);
    REQUIRE(res.size() == 1);
    CHECK(res[0].payload == std::vector<std::int32_t>{8, 6, 7, 0});
    CHECK(s.find_unit(8)->flags.has(UnitFlag::battle_shocked));
  }
  SUBCASE("single-model units test on remaining wounds") {
    GameState s = custom_state({named("Intercessor Squad")}, {named("Carnifex")}, 0);
    place_unit(s, 0, {10, 3});
    place_unit(s, 8, {10, 26});
    s.find_unit(8)->models[0].wounds_remaining = 4;  // exactly half of 8
    in_turn(s, 1, kTurnMovementNext, make_frame(Sequence::command_phase));
    GameState t = s;
    EventLog log;
    run_until_decision(s, &log);
    CHECK(of_kind(log, EventKind::battle_shock_result).empty());
    t.find_unit(8)->models[0].wounds_remaining = 3;
    run_until_decision(t, &log);
    CHECK(pending_decision(t).kind == DecisionKind::reroll_offer);
  }
}

TEST_CASE("command re-roll") {
  const Datasheet warriors = named("Tyranid Warriors");
  GameState s = custom_state({named("Intercessor Squad")}, {warriors, warriors}, 5);
  place_unit(s, 0, {10, 3});
  place_unit(s, 8, {10, 26});
  place_unit(s, 9, {30, 26});
  for (int unit : {8, 9}) {
    for (int i = 0; i < 2; ++i) s.find_unit(unit)->models[static_cast<std::size_t>(i)].wounds_remaining = 0;
  }
  s.players[1].command_points = 1;  // the command phase adds one
  in_turn(s, 1, kTurnMovementNext, make_frame(Sequence::command_phase));
  EventLog log;
  run_until_decision(s, &log);
  REQUIRE(pending_decision(s).kind == DecisionKind::reroll_offer);
  REQUIRE(s.players[1].command_points == 2);
  CHECK(pending_decision(s).options == std::vector<Action>{RerollAccept{}, RerollDecline{}});
  const std::size_t before = log.size();
  apply_in_place(s, RerollAccept{}, &log);
  CHECK(s.players[1].command_points == 1);
  const EventLog after(log.begin() + static_cast<std::ptrdiff_t>(before), log.end());
  const auto cp = of_kind(after, EventKind::cp_changed);
  REQUIRE(cp.size() == 1);
  CHECK(cp[0].payload == std::vector<std::int32_t>{1, -1, 1});
  const auto used = of_kind(after, EventKind::reroll_used);
  REQUIRE(used.size() == 1);
  CHECK(used[0].payload ==
        std::vector<std::int32_t>{static_cast<int>(RollPurpose::battle_shock), 8});
  // The second unit's test in the same phase gets no offer.
  CHECK(of_kind(after, EventKind::battle_shock_result).size() == 2);
  CHECK(pending_decision(s).kind == DecisionKind::select_move_unit);
}

TEST_CASE("charges") {
  // Redemptor anchor 8 squares from the Carnifex: the charge needs 7.
  auto setup = [](std::uint64_t seed, int cp) {
    GameState s = custom_state({named("Redemptor Dreadnought")}, {named("Carnifex")}, seed);
    place_unit(s, 0, {40, 2});
    place_unit(s, 8, {40, 10});
    s.players[0].command_points = cp;
    s.phase = Phase::charge;
    in_turn(s, 0, kTurnFightNext, make_frame(Sequence::charge_phase, kChargeSelect));
    return s;
  };

  SUBCASE("roll 7 at distance 8 succeeds") {
    GameState s = setup(seed_where([](int a, int b) { return a + b == 7; }), 0);
    CHECK(pending_decision(s).options == std::vector<Action>{Pass{}, SelectUnit{0}});
    EventLog log;
    apply_in_place(s, SelectUnit{0}, &log);  // single target: chosen automatically
    const auto res = of_kind(log, EventKind::charge_result);
    REQUIRE(res.size() == 1);
    CHECK(std::vector<std::int32_t>(res[0].payload.begin(), res[0].payload.begin() + 5) ==
          std::vector<std::int32_t>{0, 8, 7, 7, 1});
    CHECK(s.find_unit(0)->flags.has(UnitFlag::charged_this_turn));
    CHECK(engaged_units(s, 0) == std::vector<int>{8});
    CHECK(of_kind(log, EventKind::reroll_used).empty());
  }
  SUBCASE("with no command points no re-roll is offered") {
    GameState s = setup(seed_where([](int a, int b) { return a + b == 6; }), 0);
    EventLog log;
    apply_in_place(s, SelectUnit{0}, &log);
    CHECK(of_kind(log, EventKind::charge_result).size() == 1);
    CHECK(pending_decision(s).kind != DecisionKind::reroll_offer);
  }
  SUBCASE("roll 6 declined fails without moving") {
    GameState s = setup(seed_where([](int a, int b) { return a + b == 6; }), 2);
    EventLog log;
    apply_in_place(s, SelectUnit{0}, &log);
    REQUIRE(pending_decision(s).kind == DecisionKind::reroll_offer);
    const auto roll = pending_roll(s);
    CHECK(roll->purpose == RollPurpose::charge);
    CHECK(roll->total == 6);
    CHECK(roll->needed == 7);
    apply_in_place(s, RerollDecline{}, &log);
    const auto res = of_kind(log, EventKind::charge_result);
    REQUIRE(res.size() == 1);
    CHECK(res[0].payload == std::vector<std::int32_t>{0, 8, 6, 7, 0, 40, 2});
    CHECK(s.find_unit(0)->models[0].position == GridPos{40, 2});
    CHECK(of_kind(log, EventKind::move_made).empty());
    CHECK(s.players[0].command_points == 2);
  }
  SUBCASE("the re-roll is once per phase") {
    GameState s = custom_state({named("Redemptor Dreadnought"), named("Intercessor Squad")},
                               {named("Carnifex"), named("Tyranid Warriors")}, 9);
    place_unit(s, 0, {40, 2});
    place_unit(s, 1, {10, 2});
    place_unit(s, 8, {40, 10});
    place_unit(s, 9, {10, 10});
    s.players[0].command_points = 2;
    s.phase = Phase::charge;
    in_turn(s, 0, kTurnFightNext, make_frame(Sequence::charge_phase, kChargeSelect));
    EventLog log;
    apply_in_place(s, SelectUnit{0}, &log);
    REQUIRE(pending_decision(s).kind == DecisionKind::reroll_offer);
    apply_in_place(s, RerollAccept{}, &log);
    CHECK(s.players[0].command_points == 1);
    REQUIRE(pending_decision(s).kind == DecisionKind::select_charge_unit);
    apply_in_place(s, SelectUnit{1}, &log);
    CHECK(of_kind(log, EventKind::charge_result).size() == 2);
    CHECK(pending_decision(s).kind != DecisionKind::reroll_offer);
    CHECK(s.players[0].command_points == 1);
  }
}

TEST_CASE("charge success chance at distance 8 matches 21/36") {
  int successes = 0;
  const int n = 2000;
  for (int seed = 0; seed < n; ++seed) {
    GameState s = custom_state({named("Redemptor Dreadnought")}, {named("Carnifex")},
                               static_cast<std::uint64_t>(seed));
    place_unit(s, 0, {40, 2});
    place_unit(s, 8, {40, 10});
    in_turn(s, 0, kTurnFightNext, make_frame(Sequence::charge_phase, kChargeSelect));
    EventLog log;
    apply_in_place(s, SelectUnit{0}, &log);
    successes += of_kind(log, EventKind::charge_result)[0].payload[4];
  }
  const double p = 21.0 / 36.0;
  CHECK(std::abs(successes / static_cast<double>(n) - p) < 4 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("primary scoring") {
  const Datasheet holder = named("Redemptor Dreadnought");  // OC 4
  auto score = [&](int held) {
    std::vector<Datasheet> p0(4, holder);
    GameState s = custom_state(p0, {named("Carnifex")}, 1);
    for (int i = 0; i < 4; ++i) {
      place_unit(s, i, i < held ? kObjectivePositions[static_cast<std::size_t>(i)]
                                : GridPos{2 + 4 * i, 0});
    }
    place_unit(s, 8, {43, 29});
    s.round = 2;
    s.sequence_stack = {make_frame(Sequence::game, steps::kGameAfterRound),
                        make_frame(Sequence::round)};
    EventLog log;
    run_until_decision(s, &log);
    const auto vp = of_kind(log, EventKind::vp_scored);
    REQUIRE(vp.size() == 1);
    return vp[0].payload;
  };
  CHECK(score(0) == std::vector<std::int32_t>{0, 0, 0, 0});
  CHECK(score(2) == std::vector<std::int32_t>{0, 10, 10, 2});
  CHECK(score(4) == std::vector<std::int32_t>{0, 15, 15, 4});
}

TEST_CASE("no scoring in round one") {
  GameState s = make_scenario(ScenarioKind::single_turn, 0);
  EventLog log = start_scenario(ScenarioKind::single_turn, 0).events;
  CHECK(of_kind(log, EventKind::vp_scored).empty());
}

TEST_CASE("end of the game") {
  auto ended = [](int vp0, int vp1) {
    GameState s = make_scenario(ScenarioKind::single_turn, 0);
    s.scenario = ScenarioKind::full_game;
    s.round = 5;
    s.players[0].victory_points = vp0;
    s.players[1].victory_points = vp1;
    s.sequence_stack = {make_frame(Sequence::game, steps::kGameAfterRound)};
    EventLog log;
    run_until_decision(s, &log);
    REQUIRE(of_kind(log, EventKind::game_over).size() == 1);
    return s;
  };
  SUBCASE("more VP wins") {
    const GameState s = ended(25, 10);
    REQUIRE(is_terminal(s).has_value());
    CHECK(is_terminal(s)->winner == 0);
    CHECK(is_terminal(s)->vp == std::array<int, 2>{25, 10});
    CHECK(std::holds_alternative<GameResult>(current_decision(s)));
    CHECK_THROWS_AS(pending_decision(s), GameAlreadyOver);
    CHECK_THROWS_AS(apply(s, Pass{}), GameAlreadyOver);
  }
  SUBCASE("equal VP is a draw") { CHECK(is_terminal(ended(12, 12))->winner == kDraw); }
  SUBCASE("wiping out the enemy wins at once") {
    const Datasheet attacker = testing::sheet(
        1, 4, 4, std::nullopt, 1, {testing::ranged(24, 2, 20, 6, 3), testing::melee(4, 4, 0, 1)});
    const Datasheet target = testing::sheet(1, 1, 6, std::nullopt, 1, {testing::melee(4, 4, 0, 1)});
    GameState s = testing::duel(attacker, target, seed_where([](int a, int b) { return a > 1 && b > 1; }));
    s.round = 3;
    s.players[0].victory_points = 0;
    s.players[1].victory_points = 20;
    resolve_single_attack(s, {0, 0, 0, kMaxUnitsPerSide});
    REQUIRE(is_terminal(s).has_value());
    CHECK(is_terminal(s)->winner == 0);
    CHECK(s.round == 3);
  }
}

TEST_CASE("decision requests") {
  SUBCASE("all units moved leaves only Pass") {
    GameState s = make_scenario(ScenarioKind::single_turn, 0);
    for (auto& u : s.units) u.flags.set(UnitFlag::moved);
    in_turn(s, 0, kTurnShootingNext, make_frame(Sequence::movement_phase, kMovementSelect));
    const auto d = pending_decision(s);
    CHECK(d.kind == DecisionKind::select_move_unit);
    CHECK(d.options == std::vector<Action>{Pass{}});
  }
  SUBCASE("Pass ends the movement phase") {
    GameState s = make_scenario(ScenarioKind::single_turn, 0);
    REQUIRE(pending_decision(s).kind == DecisionKind::select_move_unit);
    const Transition t = apply(s, Pass{});
    CHECK(t.state.phase == Phase::shooting);
    REQUIRE_FALSE(t.events.empty());
    CHECK(t.events[0].kind == EventKind::phase_started);
    CHECK(t.events[0].payload[0] == static_cast<int>(Phase::shooting));
    CHECK(t.state.decision_count == 1);
  }
  SUBCASE("targeting an own unit is illegal") {
    GameState s = make_scenario(ScenarioKind::single_turn, 0);
    apply_in_place(s, Pass{});
    while (pending_decision(s).kind != DecisionKind::shoot_target) {
      const auto d = pending_decision(s);
      REQUIRE(d.kind == DecisionKind::select_shoot_unit);
      apply_in_place(s, d.options.back());
    }
    CHECK_FALSE(is_legal(s, TargetUnit{0}));
    CHECK_THROWS_AS(apply(s, TargetUnit{0}), IllegalAction);
    CHECK_THROWS_AS(apply(s, ChooseFirst{}), IllegalAction);
  }
}

TEST_CASE("golden three-decision opening") {
  const std::string golden =
      R"({"actor":0,"kind":"dice_rolled","ordinal":0,"payload":[0,4,0,-1]})"
      "\n"
      R"({"actor":1,"kind":"dice_rolled","ordinal":1,"payload":[0,1,0,-1]})"
      "\n"
      R"({"actor":0,"kind":"move_made","ordinal":2,"payload":[0,4,-1,-1,0,0]})"
      "\n";
  for (int run = 0; run < 2; ++run) {
    Transition t = start_game(default_rosters(builtin_registry()), 7);
    EventLog log = t.events;
    for (int id : {1, 9, 51}) apply_in_place(t.state, id_to_action(id), &log);
    CHECK(testing::events_text(log) == golden);
    CHECK(pending_decision(t.state).kind == DecisionKind::deploy_unit);
    CHECK(pending_decision(t.state).actor == 1);
  }
}

namespace {

struct Step {
  GameState before;
  Action action;
  EventLog events;
};

std::vector<Step> random_steps(std::uint64_t seed) {
  std::vector<Step> out;
  GameState s = make_scenario(ScenarioKind::full_game, seed);
  std::mt19937_64 rng(seed);
  while (!s.terminal) {
    const auto d = pending_decision(s);
    std::uniform_int_distribution<std::size_t> pick(0, d.options.size() - 1);
    Step st{s, d.options[pick(rng)], {}};
    apply_in_place(s, st.action, &st.events);
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace

TEST_CASE("phase order and single activation over random games") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CAPTURE(seed);
    const auto steps = random_steps(seed);
    std::vector<EventRecord> phases;
    for (const auto& st : steps) {
      for (const auto& e : st.events) {
        if (e.kind == EventKind::phase_started) phases.push_back(e);
      }
    }
    // Whole turns in order command..fight, same round and player.
    bool ended_early = false;
    for (std::size_t i = 0; i < phases.size(); ++i) {
      const int expected = static_cast<int>(i % 5);
      if (phases[i].payload[0] != expected) {
        ended_early = true;
        break;
      }
      if (expected > 0) {
        CHECK(phases[i].payload[1] == phases[i - 1].payload[1]);
        CHECK(phases[i].payload[2] == phases[i - 1].payload[2]);
      }
    }
    CHECK_FALSE(ended_early);

    // Per turn: no unit moves twice, no unit is picked to shoot twice.
    std::set<int> moved;
    std::set<int> shot;
    for (const auto& st : steps) {
      for (const auto& e : st.events) {
        if (e.kind == EventKind::phase_started && e.payload[0] == 0) {
          moved.clear();
          shot.clear();
        }
      }
      for (const auto& e : st.events) {
        if (e.kind == EventKind::move_made && e.payload[1] != 4) {
          CHECK(moved.insert(e.payload[0]).second);
        }
      }
      if (st.before.phase == Phase::shooting && std::holds_alternative<SelectUnit>(st.action)) {
        CHECK(shot.insert(std::get<SelectUnit>(st.action).unit).second);
      }
    }
  }
}

TEST_CASE("legality closure") {
  for (std::uint64_t seed = 100; seed < 106; ++seed) {
    const auto states = testing::random_game_states(seed);
    for (const auto& s : states) {
      const auto d = pending_decision(s);
      CHECK_FALSE(d.options.empty());
      const std::size_t stride = std::max<std::size_t>(1, d.options.size() / 8);
      for (std::size_t i = 0; i < d.options.size(); i += stride) {
        REQUIRE(is_legal(s, d.options[i]));
        const Transition t = apply(s, d.options[i]);
        REQUIRE(validate_state(t.state).empty());
        REQUIRE(validate_sequence_stack(t.state).empty());
      }
    }
  }
}

TEST_CASE("every fuzzed game terminates inside the budget") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = testing::random_game(seed);
    REQUIRE(g.state.terminal.has_value());
    CHECK(g.state.decision_count <= kDecisionBudget);
    CHECK(g.state.round <= kMaxRounds);
    CHECK_FALSE(g.state.terminal->budget_exhausted);
  }
}

TEST_CASE("the decision budget ends the game in a draw") {
  GameState s = make_scenario(ScenarioKind::single_turn, 0);
  s.decision_count = kDecisionBudget - 1;
  EventLog log;
  apply_in_place(s, pending_decision(s).options.front(), &log);
  REQUIRE(s.terminal.has_value());
  CHECK(s.terminal->budget_exhausted);
  CHECK(s.terminal->winner == kDraw);
}
