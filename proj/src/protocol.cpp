#include "fourhammer/protocol.hpp"

#include <boost/beast/core/detail/base64.hpp>

#include "fourhammer/encodings.hpp"
#include "fourhammer/wire.hpp"

namespace fourhammer {

using nlohmann::json;
namespace b64 = boost::beast::detail::base64;

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out(b64::encoded_size(bytes.size()), '\0');
  out.resize(b64::encode(out.data(), bytes.data(), bytes.size()));
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  std::vector<std::uint8_t> out(b64::decoded_size(text.size()));
  const auto [written, read] = b64::decode(out.data(), text.data(), text.size());
  std::size_t rest = read;
  while (rest < text.size() && text[rest] == '=') ++rest;
  if (rest != text.size()) throw DecodeError("invalid base64 at offset " + std::to_string(read));
  out.resize(written);
  return out;
}

namespace {

json error(const std::string& code, const std::string& detail = {}) {
  json j = {{"ok", false}, {"error", code}};
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

const char* seat_name(int seat) { return seat == 0 ? "p0" : "p1"; }

}  // namespace

Session::Session(ScenarioKind scenario, std::uint64_t seed, Registry registry)
    : registry_(std::move(registry)), scenario_(scenario) {
  Outcome ignored;
  restart(scenario, seed, ignored);
}

void Session::restart(ScenarioKind scenario, std::uint64_t seed, Outcome& out) {
  auto start = start_scenario(scenario, seed, registry_);
  scenario_ = scenario;
  state_ = std::move(start.state);
  log_.clear();
  out.broadcasts.push_back(
      {{"type", "reset"}, {"scenario", to_string(scenario)}, {"seed", seed}});
  announce(start.events, out);
  log_ = std::move(start.events);
}

void Session::announce(const EventLog& events, Outcome& out) const {
  for (const auto& e : events) out.broadcasts.push_back({{"type", "event"}, {"event", event_to_json(e)}});
  out.broadcasts.push_back({{"type", "decision"}, {"decision", decision_to_json(state_)}});
}

void Session::disconnect(int client) {
  for (auto& s : seats_) {
    if (s == client) s.reset();
  }
}

Session::Outcome Session::handle(int client, std::string_view line) {
  json message;
  try {
    message = json::parse(line);
  } catch (const json::exception& e) {
    return {error("malformed", e.what()), {}};
  }
  return handle(client, message);
}

Session::Outcome Session::handle(int client, const json& m) {
  Outcome out;
  if (!m.is_object() || !m.contains("cmd") || !m["cmd"].is_string()) {
    out.reply = error("malformed", "expected an object with a string \"cmd\"");
    return out;
  }
  const std::string cmd = m["cmd"].get<std::string>();
  try {
    if (cmd == "reset") {
      const ScenarioKind kind =
          m.contains("scenario") ? parse_scenario(m.at("scenario").get<std::string>()) : scenario_;
      const auto seed = m.value("seed", std::uint64_t{0});
      restart(kind, seed, out);
      out.reply = {{"ok", true}, {"scenario", to_string(kind)}, {"seed", seed}};
    } else if (cmd == "seat") {
      const std::string seat = m.at("seat").get<std::string>();
      if (seat == "spectator") {
        disconnect(client);
        out.reply = {{"ok", true}, {"seat", "spectator"}};
      } else if (seat == "p0" || seat == "p1") {
        auto& holder = seats_[seat == "p0" ? 0 : 1];
        if (holder && *holder != client) {
          out.reply = error("seat_taken");
        } else {
          holder = client;
          out.reply = {{"ok", true}, {"seat", seat}};
        }
      } else {
        out.reply = error("malformed", "seat must be p0, p1 or spectator");
      }
    } else if (cmd == "state") {
      const std::string format = m.value("format", std::string("json"));
      if (format == "text") {
        out.reply = {{"ok", true}, {"format", format}, {"state", encode_text(state_)}};
      } else if (format == "json") {
        out.reply = {{"ok", true}, {"format", format}, {"state", state_to_json(state_)}};
      } else if (format == "tensor") {
        out.reply = {{"ok", true}, {"format", format}, {"state", encode_tensor(state_)}};
      } else {
        out.reply = error("malformed", "format must be text, json or tensor");
      }
    } else if (cmd == "actions") {
      out.reply = {{"ok", true}, {"decision", decision_to_json(state_)}};
      if (!state_.terminal) out.reply["mask"] = legal_mask(state_);
    } else if (cmd == "apply") {
      Action a;
      if (m.contains("id")) {
        const int id = m.at("id").get<int>();
        if (id < 0 || id >= kActionCount) {
          out.reply = error("illegal_action", "action id " + std::to_string(id) + " out of range");
          return out;
        }
        a = id_to_action(id);
      } else if (m.contains("action")) {
        a = action_from_json(m.at("action"));
      } else {
        out.reply = error("malformed", "apply needs \"id\" or \"action\"");
        return out;
      }
      if (state_.terminal) {
        out.reply = error("illegal_action", "game is over");
        return out;
      }
      const int actor = pending_decision(state_).actor;
      if (seats_[static_cast<std::size_t>(actor)] != client) {
        out.reply = error("not_your_turn", std::string("decision belongs to ") + seat_name(actor));
        return out;
      }
      if (!is_legal(state_, a)) {
        out.reply = error("illegal_action");
        return out;
      }
      EventLog events;
      apply_in_place(state_, a, &events);
      out.reply = {{"ok", true}, {"id", action_to_id(a)}, {"decision_count", state_.decision_count}};
      announce(events, out);
      log_.insert(log_.end(), events.begin(), events.end());
    } else if (cmd == "save") {
      out.reply = {{"ok", true}, {"data", base64_encode(encode_binary(state_))}};
    } else if (cmd == "load") {
      GameState loaded;
      try {
        loaded = decode_binary(base64_decode(m.at("data").get<std::string>()));
      } catch (const DecodeError& e) {
        out.reply = error("invalid_state", e.what());
        return out;
      }
      state_ = std::move(loaded);
      scenario_ = state_.scenario;
      log_.clear();
      out.reply = {{"ok", true}, {"decision_count", state_.decision_count}};
      out.broadcasts.push_back({{"type", "loaded"}, {"next_ordinal", state_.next_event_ordinal}});
      announce({}, out);
    } else if (cmd == "events") {
      const auto since = m.value("since", std::uint64_t{0});
      json events = json::array();
      for (const auto& e : log_) {
        if (e.ordinal >= since) events.push_back(event_to_json(e));
      }
      out.reply = {{"ok", true}, {"events", events}};
    } else {
      out.reply = error("unknown_cmd", cmd);
    }
  } catch (const json::exception& e) {
    out.reply = error("malformed", e.what());
  } catch (const DecodeError& e) {
    out.reply = error("malformed", e.what());
  } catch (const Error& e) {
    out.reply = error("malformed", e.what());
  }
  return out;
}

}  // namespace fourhammer
