#include <doctest.h>

#include "fourhammer/encodings.hpp"
#include "fourhammer/protocol.hpp"
#include "fourhammer/server.hpp"
#include "fourhammer/wire.hpp"
#include "support.hpp"
#include "wire_client.hpp"

using namespace fourhammer;
using nlohmann::json;

namespace {

json reply(Session& s, int client, const json& m) { return s.handle(client, m).reply; }

}  // namespace

TEST_CASE("base64") {
  const std::vector<std::uint8_t> bytes{0, 1, 2, 250, 251, 252, 253};
  CHECK(base64_decode(base64_encode(bytes)) == bytes);
  CHECK(base64_encode({'4', 'H', 'M', 'R'}) == "NEhNUg==");
  CHECK_THROWS_AS(base64_decode("!!!!"), DecodeError);
}

TEST_CASE("seats") {
  Session s(ScenarioKind::full_game, 7, builtin_registry());
  CHECK(reply(s, 1, {{"cmd", "seat"}, {"seat", "p0"}}) == json{{"ok", true}, {"seat", "p0"}});
  CHECK(reply(s, 2, {{"cmd", "seat"}, {"seat", "p0"}}) == json{{"ok", false}, {"error", "seat_taken"}});
  CHECK(reply(s, 1, {{"cmd", "seat"}, {"seat", "p0"}})["ok"] == true);
  CHECK(reply(s, 2, {{"cmd", "seat"}, {"seat", "p1"}})["ok"] == true);
  CHECK(s.seat_holder(0) == 1);
  CHECK(s.seat_holder(1) == 2);
  s.disconnect(1);
  CHECK_FALSE(s.seat_holder(0).has_value());
  CHECK(reply(s, 3, {{"cmd", "seat"}, {"seat", "p0"}})["ok"] == true);
  CHECK(reply(s, 3, {{"cmd", "seat"}, {"seat", "spectator"}})["ok"] == true);
  CHECK_FALSE(s.seat_holder(0).has_value());
  CHECK(reply(s, 3, {{"cmd", "seat"}, {"seat", "p2"}})["error"] == "malformed");
}

TEST_CASE("errors keep the session usable") {
  Session s(ScenarioKind::full_game, 7, builtin_registry());
  CHECK(s.handle(1, std::string_view("not json")).reply["error"] == "malformed");
  CHECK(reply(s, 1, json::array())["error"] == "malformed");
  CHECK(reply(s, 1, {{"cmd", "dance"}})["error"] == "unknown_cmd");
  CHECK(reply(s, 1, {{"cmd", "state"}, {"format", "xml"}})["error"] == "malformed");
  CHECK(reply(s, 1, {{"cmd", "reset"}, {"scenario", "chess"}})["error"] == "malformed");
  CHECK(reply(s, 1, {{"cmd", "apply"}})["error"] == "malformed");
  CHECK(reply(s, 1, {{"cmd", "actions"}})["ok"] == true);
}

TEST_CASE("apply checks seat and legality without changing state") {
  Session s(ScenarioKind::full_game, 7, builtin_registry());
  const GameState before = s.state();
  // Seed 7: player 0 won the roll-off.
  CHECK(reply(s, 1, {{"cmd", "apply"}, {"id", 1}})["error"] == "not_your_turn");
  reply(s, 1, {{"cmd", "seat"}, {"seat", "p1"}});
  CHECK(reply(s, 1, {{"cmd", "apply"}, {"id", 1}})["error"] == "not_your_turn");
  reply(s, 2, {{"cmd", "seat"}, {"seat", "p0"}});
  CHECK(reply(s, 2, {{"cmd", "apply"}, {"id", 0}})["error"] == "illegal_action");
  CHECK(reply(s, 2, {{"cmd", "apply"}, {"id", 5000}})["error"] == "illegal_action");
  CHECK(s.state() == before);

  const auto out = s.handle(2, json{{"cmd", "apply"}, {"action", {{"type", "ChooseFirst"}}}});
  CHECK(out.reply["ok"] == true);
  CHECK(out.reply["id"] == 1);
  REQUIRE_FALSE(out.broadcasts.empty());
  CHECK(out.broadcasts.back()["type"] == "decision");
  CHECK(out.broadcasts.back()["decision"]["kind"] == "deploy_unit");
}

TEST_CASE("actions mirror the pending decision") {
  Session s(ScenarioKind::single_shooting_maximize, 0, builtin_registry());
  const json r = reply(s, 1, {{"cmd", "actions"}});
  CHECK(r["decision"]["kind"] == "select_shoot_unit");
  CHECK(r["decision"]["actor"] == 0);
  REQUIRE(r["decision"]["options"].size() == 2);
  CHECK(r["decision"]["options"][0]["id"] == 9);
  CHECK(r["decision"]["options"][1]["id"] == 10);
  CHECK(r["decision"]["options"][1]["text"] == "shoot with unit 1 (Redemptor Dreadnought)");
  int bits = 0;
  for (const auto& b : r["mask"]) bits += b.get<int>();
  CHECK(bits == 2);
}

TEST_CASE("state formats") {
  Session s(ScenarioKind::full_game, 7, builtin_registry());
  const json tensor = reply(s, 1, {{"cmd", "state"}, {"format", "tensor"}});
  CHECK(tensor["state"].size() == 268);
  const json text = reply(s, 1, {{"cmd", "state"}, {"format", "text"}});
  CHECK(text["state"].get<std::string>() == encode_text(s.state()));
  const json j = reply(s, 1, {{"cmd", "state"}, {"format", "json"}});
  CHECK(state_from_json(j["state"]) == s.state());
}

TEST_CASE("save, load and tampering") {
  Session s(ScenarioKind::single_turn, 3, builtin_registry());
  const std::string data = reply(s, 1, {{"cmd", "save"}})["data"];
  CHECK(decode_binary(base64_decode(data)) == s.state());

  Session other(ScenarioKind::full_game, 0, builtin_registry());
  const auto out = other.handle(1, json{{"cmd", "load"}, {"data", data}});
  CHECK(out.reply["ok"] == true);
  CHECK(other.state() == s.state());
  CHECK(out.broadcasts.front()["type"] == "loaded");

  GameState bad = s.state();
  bad.players[0].command_points = 99;
  const json r = reply(other, 1, {{"cmd", "load"}, {"data", base64_encode(encode_binary(bad))}});
  CHECK(r["error"] == "invalid_state");
  CHECK(r["detail"].get<std::string>().find("bound violation") != std::string::npos);
  CHECK(other.state() == s.state());
  CHECK(reply(other, 1, {{"cmd", "load"}, {"data", "@@"}})["error"] == "invalid_state");
}

TEST_CASE("event replay is gap-free") {
  Session s(ScenarioKind::single_turn, 4, builtin_registry());
  reply(s, 1, {{"cmd", "seat"}, {"seat", "p0"}});
  reply(s, 1, {{"cmd", "seat"}, {"seat", "p1"}});
  std::vector<json> streamed;
  int guard = 0;
  while (!s.state().terminal && guard++ < 1000) {
    const json d = reply(s, 1, {{"cmd", "actions"}});
    const auto out = s.handle(1, json{{"cmd", "apply"}, {"id", d["decision"]["options"][0]["id"]}});
    REQUIRE(out.reply["ok"] == true);
    for (const auto& b : out.broadcasts) {
      if (b["type"] == "event") streamed.push_back(b["event"]);
    }
  }
  REQUIRE(s.state().terminal.has_value());
  const json all = reply(s, 1, {{"cmd", "events"}, {"since", 0}});
  const auto& log = s.events();
  REQUIRE(all["events"].size() == log.size());
  for (std::size_t i = 0; i < log.size(); ++i) CHECK(all["events"][i]["ordinal"] == i);
  const std::uint64_t since = log.size() / 2;
  const json tail = reply(s, 1, {{"cmd", "events"}, {"since", since}});
  CHECK(tail["events"].size() == log.size() - since);
  // Everything after the opening was broadcast in order.
  REQUIRE_FALSE(streamed.empty());
  for (std::size_t i = 1; i < streamed.size(); ++i) {
    CHECK(streamed[i]["ordinal"].get<int>() == streamed[i - 1]["ordinal"].get<int>() + 1);
  }
  const json over = reply(s, 1, {{"cmd", "actions"}});
  CHECK(over["decision"]["terminal"] == true);
  CHECK(reply(s, 1, {{"cmd", "apply"}, {"id", 0}})["error"] == "illegal_action");
}

TEST_CASE("reset") {
  Session s(ScenarioKind::full_game, 7, builtin_registry());
  const auto out = s.handle(1, json{{"cmd", "reset"}, {"scenario", "single_shooting_maximize"}, {"seed", 3}});
  CHECK(out.reply == json{{"ok", true}, {"scenario", "single_shooting_maximize"}, {"seed", 3}});
  CHECK(out.broadcasts.front()["type"] == "reset");
  CHECK(s.state() == make_scenario(ScenarioKind::single_shooting_maximize, 3));
}

TEST_CASE("server over TCP and WebSocket") {
  ServerOptions o;
  o.port = 0;
  o.scenario = ScenarioKind::single_shooting_maximize;
  o.seed = 5;
  o.registry = builtin_registry();
  Server server(std::move(o));
  server.start();
  REQUIRE(server.ws_port() == server.tcp_port() + 1);

  testing::TcpClient a("127.0.0.1", server.tcp_port());
  testing::TcpClient b("127.0.0.1", server.tcp_port());
  testing::WsClient w("127.0.0.1", server.ws_port());
  CHECK(a.call({{"cmd", "seat"}, {"seat", "p0"}}) == json{{"ok", true}, {"seat", "p0"}});
  CHECK(b.call({{"cmd", "seat"}, {"seat", "p0"}})["error"] == "seat_taken");
  CHECK(w.call({{"cmd", "seat"}, {"seat", "p0"}})["error"] == "seat_taken");
  b.send_raw("{oops");
  CHECK(b.await_reply()["error"] == "malformed");
  CHECK(b.call({{"cmd", "apply"}, {"id", 10}})["error"] == "not_your_turn");
  const json tensor = w.call({{"cmd", "state"}, {"format", "tensor"}});
  CHECK(tensor["state"].size() == 268);
  CHECK(a.call({{"cmd", "apply"}, {"id", 10}})["ok"] == true);

  // B and the WebSocket client see the events and the terminal result.
  const json done = b.call({{"cmd", "actions"}});
  CHECK(done["decision"]["terminal"] == true);
  bool saw_result = false;
  for (const auto& m : b.broadcasts) {
    if (m["type"] == "decision" && m["decision"].contains("terminal")) saw_result = true;
  }
  CHECK(saw_result);
  const json wdone = w.call({{"cmd", "actions"}});
  CHECK(wdone["decision"]["terminal"] == true);

  GameState local = make_scenario(ScenarioKind::single_shooting_maximize, 5);
  apply_in_place(local, SelectUnit{1});
  const std::string data = a.call({{"cmd", "save"}})["data"];
  CHECK(base64_decode(data) == encode_binary(local));
  server.stop();
}
