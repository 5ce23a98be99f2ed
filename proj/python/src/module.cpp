#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fourhammer/encodings.hpp"
#include "fourhammer/scenarios.hpp"
#include "fourhammer/wire.hpp"

namespace py = pybind11;
using namespace fourhammer;

namespace {

/// Mutable game handle for Python; each step applies one action id.
class Game {
 public:
  Game(const std::string& scenario, std::uint64_t seed, const std::string& stats_path) {
    registry_ = stats_path.empty() ? builtin_registry() : load_registry_file(stats_path);
    auto start = start_scenario(parse_scenario(scenario), seed, registry_);
    state_ = std::move(start.state);
    events_ = std::move(start.events);
  }

  explicit Game(GameState s) : state_(std::move(s)) {}

  bool terminal() const { return state_.terminal.has_value(); }

  py::dict decision() const { return to_python(decision_to_json(state_)); }

  std::vector<int> legal_ids() const {
    std::vector<int> ids;
    for (const auto& a : pending_decision(state_).options) ids.push_back(action_to_id(a));
    return ids;
  }

  py::bytes mask() const {
    const auto m = legal_mask(state_);
    return {reinterpret_cast<const char*>(m.data()), m.size()};
  }

  std::vector<float> tensor() const { return encode_tensor(state_); }
  std::string text() const { return encode_text(state_); }
  std::string json() const { return encode_json(state_); }

  py::bytes save() const {
    const auto b = encode_binary(state_);
    return {reinterpret_cast<const char*>(b.data()), b.size()};
  }

  /// Applies one action id and returns the new events as dicts.
  py::list step(int id) {
    if (id < 0 || id >= kActionCount) throw IllegalAction("action id out of range");
    EventLog fresh;
    apply_in_place(state_, id_to_action(id), &fresh);
    events_.insert(events_.end(), fresh.begin(), fresh.end());
    py::list out;
    for (const auto& e : fresh) out.append(to_python(event_to_json(e)));
    return out;
  }

  double reward_of(int player) const { return reward(state_, player); }
  int decision_count() const { return state_.decision_count; }
  std::size_t event_count() const { return events_.size(); }

 private:
  static py::object json_module() { return py::module_::import("json"); }
  static py::dict to_python(const nlohmann::json& j) {
    return json_module().attr("loads")(j.dump());
  }

  Registry registry_;
  GameState state_;
  EventLog events_;
};

}  // namespace

PYBIND11_MODULE(_fourhammer, m) {
  m.doc() = "Combat Patrol rules engine";

  // Translators run newest first, so the base class goes first.
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<IllegalAction>(m, "IllegalAction", base.ptr());
  py::register_exception<GameAlreadyOver>(m, "GameAlreadyOver", base.ptr());
  py::register_exception<DecodeError>(m, "DecodeError", base.ptr());

  m.attr("ACTION_COUNT") = kActionCount;
  m.attr("TENSOR_LENGTH") = kTensorLength;
  m.attr("SCENARIOS") =
      std::vector<std::string>{"full_game", "single_turn", "single_shooting_maximize"};

  py::class_<Game>(m, "Game")
      .def(py::init<const std::string&, std::uint64_t, const std::string&>(),
           py::arg("scenario") = "full_game", py::arg("seed") = 0, py::arg("stats") = "")
      .def_property_readonly("terminal", &Game::terminal)
      .def_property_readonly("decision_count", &Game::decision_count)
      .def_property_readonly("event_count", &Game::event_count)
      .def("decision", &Game::decision, "Pending decision, or the result once terminal")
      .def("legal_ids", &Game::legal_ids)
      .def("mask", &Game::mask, "One byte per action id")
      .def("tensor", &Game::tensor)
      .def("text", &Game::text)
      .def("json", &Game::json)
      .def("save", &Game::save, "Binary encoding")
      .def("step", &Game::step, py::arg("id"))
      .def("reward", &Game::reward_of, py::arg("player"))
      .def_static(
          "load",
          [](py::bytes data) {
            const std::string raw = data;
            const std::vector<std::uint8_t> bytes(raw.begin(), raw.end());
            return Game(decode_binary(bytes));
          },
          py::arg("data"));

  m.def(
      "describe_action",
      [](int id) { return action_to_json(id_to_action(id)).dump(); },
      py::arg("id"), "Structured form of an action id as a JSON string");
  m.def(
      "validate_stats",
      [](const std::string& text) { return validate_registry(parse_datasheet_file(text)); },
      py::arg("text"));
}
