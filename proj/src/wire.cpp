#include "fourhammer/wire.hpp"

#include "fourhammer/encodings.hpp"
#include "fourhammer/rules.hpp"
#include "fourhammer/scenarios.hpp"

namespace fourhammer {

using nlohmann::json;

namespace {

template <class E>
E enum_from(const json& j, int count, const char* what) {
  const std::string name = j.get<std::string>();
  for (int i = 0; i < count; ++i) {
    if (name == to_string(static_cast<E>(i))) return static_cast<E>(i);
  }
  throw DecodeError(std::string("unknown ") + what + " \"" + name + "\"");
}

ScenarioKind scenario_from(const json& j) {
  try {
    return parse_scenario(j.get<std::string>());
  } catch (const json::exception&) {
    throw;
  } catch (const Error& e) {
    throw DecodeError(e.what());
  }
}

json datasheet_to_json(const Datasheet& d) {
  json weapons = json::array();
  for (const auto& w : d.weapons) {
    weapons.push_back({{"name", w.name},
                       {"kind", w.kind == WeaponKind::ranged ? "ranged" : "melee"},
                       {"range", w.range_squares},
                       {"A", w.attacks},
                       {"skill", w.skill},
                       {"S", w.strength},
                       {"AP", w.armor_penetration},
                       {"D", w.damage}});
  }
  return {{"name", d.name},
          {"faction", d.faction},
          {"models", d.models},
          {"M", d.move},
          {"T", d.toughness},
          {"Sv", d.save},
          {"Inv", d.invulnerable_save ? json(*d.invulnerable_save) : json(nullptr)},
          {"W", d.wounds_per_model},
          {"Ld", d.leadership},
          {"OC", d.objective_control},
          {"weapons", weapons}};
}

Datasheet datasheet_from_json(const json& j) {
  Datasheet d;
  d.name = j.at("name").get<std::string>();
  d.faction = j.at("faction").get<std::string>();
  d.models = j.at("models").get<int>();
  d.move = j.at("M").get<int>();
  d.toughness = j.at("T").get<int>();
  d.save = j.at("Sv").get<int>();
  if (!j.at("Inv").is_null()) d.invulnerable_save = j.at("Inv").get<int>();
  d.wounds_per_model = j.at("W").get<int>();
  d.leadership = j.at("Ld").get<int>();
  d.objective_control = j.at("OC").get<int>();
  const json& weapons = j.at("weapons");
  if (!weapons.is_array() || weapons.size() > static_cast<std::size_t>(bounds::max_weapons)) {
    throw DecodeError("datasheet " + d.name + ": weapons must be a list of at most " +
                      std::to_string(bounds::max_weapons));
  }
  for (const auto& wj : weapons) {
    WeaponProfile w;
    w.name = wj.at("name").get<std::string>();
    const std::string kind = wj.at("kind").get<std::string>();
    if (kind != "ranged" && kind != "melee") throw DecodeError("unknown weapon kind " + kind);
    w.kind = kind == "ranged" ? WeaponKind::ranged : WeaponKind::melee;
    w.range_squares = wj.at("range").get<int>();
    w.attacks = wj.at("A").get<int>();
    w.skill = wj.at("skill").get<int>();
    w.strength = wj.at("S").get<int>();
    w.armor_penetration = wj.at("AP").get<int>();
    w.damage = wj.at("D").get<int>();
    d.weapons.push_back(std::move(w));
  }
  return d;
}

}  // namespace

json event_to_json(const EventRecord& e) {
  return {{"ordinal", e.ordinal},
          {"kind", to_string(e.kind)},
          {"actor", e.actor == kNoActor ? json(nullptr) : json(e.actor)},
          {"payload", e.payload}};
}

EventRecord event_from_json(const json& j) {
  try {
    EventRecord e;
    e.ordinal = j.at("ordinal").get<std::uint64_t>();
    e.kind = enum_from<EventKind>(j.at("kind"), kEventKindCount, "event kind");
    e.actor = j.at("actor").is_null() ? kNoActor : j.at("actor").get<int>();
    e.payload = j.at("payload").get<std::vector<std::int32_t>>();
    return e;
  } catch (const json::exception& ex) {
    throw DecodeError(std::string("malformed event: ") + ex.what());
  }
}

json action_to_json(const Action& a) {
  json j;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Pass>) j = {{"type", "Pass"}};
        if constexpr (std::is_same_v<T, ChooseFirst>) j = {{"type", "ChooseFirst"}};
        if constexpr (std::is_same_v<T, ChooseSecond>) j = {{"type", "ChooseSecond"}};
        if constexpr (std::is_same_v<T, RerollAccept>) j = {{"type", "RerollAccept"}};
        if constexpr (std::is_same_v<T, RerollDecline>) j = {{"type", "RerollDecline"}};
        if constexpr (std::is_same_v<T, ChooseMoveKind>) {
          j = {{"type", "MoveKind"}, {"kind", to_string(v.kind)}};
        }
        if constexpr (std::is_same_v<T, SelectUnit>) j = {{"type", "SelectUnit"}, {"unit", v.unit}};
        if constexpr (std::is_same_v<T, TargetUnit>) j = {{"type", "TargetUnit"}, {"unit", v.unit}};
        if constexpr (std::is_same_v<T, AllocateModel>) {
          j = {{"type", "AllocateModel"}, {"model", v.model}};
        }
        if constexpr (std::is_same_v<T, TargetSquare>) {
          j = {{"type", "TargetSquare"}, {"x", v.square.x}, {"y", v.square.y}};
        }
      },
      a);
  return j;
}

Action action_from_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "Pass") return Pass{};
    if (type == "ChooseFirst") return ChooseFirst{};
    if (type == "ChooseSecond") return ChooseSecond{};
    if (type == "RerollAccept") return RerollAccept{};
    if (type == "RerollDecline") return RerollDecline{};
    if (type == "MoveKind") return ChooseMoveKind{enum_from<MoveKind>(j.at("kind"), 4, "move kind")};
    if (type == "SelectUnit") return SelectUnit{j.at("unit").get<int>()};
    if (type == "TargetUnit") return TargetUnit{j.at("unit").get<int>()};
    if (type == "AllocateModel") return AllocateModel{j.at("model").get<int>()};
    if (type == "TargetSquare") return TargetSquare{{j.at("x").get<int>(), j.at("y").get<int>()}};
    throw DecodeError("unknown action type \"" + type + "\"");
  } catch (const json::exception& ex) {
    throw DecodeError(std::string("malformed action: ") + ex.what());
  }
}

json result_to_json(const GameResult& r) {
  return {{"terminal", true},
          {"winner", r.winner == kDraw ? json("draw") : json(r.winner)},
          {"vp", r.vp},
          {"budget_exhausted", r.budget_exhausted}};
}

json decision_to_json(const GameState& s) {
  auto d = current_decision(s);
  if (auto* r = std::get_if<GameResult>(&d)) return result_to_json(*r);
  const auto& req = std::get<DecisionRequest>(d);
  json options = json::array();
  for (const auto& a : req.options) {
    options.push_back({{"id", action_to_id(a)}, {"text", describe(a, req.kind, s)}});
  }
  return {{"kind", to_string(req.kind)}, {"actor", req.actor}, {"options", options}};
}

json state_to_json(const GameState& s) {
  json players = json::array();
  for (const auto& p : s.players) {
    players.push_back({{"faction", p.faction},
                       {"command_points", p.command_points},
                       {"victory_points", p.victory_points},
                       {"stratagem_used_this_phase", p.stratagem_used_this_phase}});
  }
  json units = json::array();
  for (const auto& u : s.units) {
    json models = json::array();
    for (const auto& m : u.models) {
      models.push_back({{"x", m.position.x}, {"y", m.position.y}, {"wounds", m.wounds_remaining}});
    }
    json flags = json::array();
    for (int f = 0; f < kUnitFlagCount; ++f) {
      if (u.flags.has(static_cast<UnitFlag>(f))) flags.push_back(to_string(static_cast<UnitFlag>(f)));
    }
    units.push_back({{"unit_id", u.unit_id},
                     {"datasheet", u.datasheet},
                     {"owner", u.owner},
                     {"deployed", u.deployed},
                     {"models", models},
                     {"flags", flags}});
  }
  json objectives = json::array();
  for (const auto& o : s.objectives) {
    objectives.push_back({{"x", o.position.x}, {"y", o.position.y}, {"radius", o.control_radius}});
  }
  json stack = json::array();
  for (const auto& f : s.sequence_stack) {
    stack.push_back({{"sequence", to_string(f.sequence)}, {"step", f.step}, {"locals", f.locals}});
  }
  json sheets = json::array();
  for (const auto& d : s.datasheets) sheets.push_back(datasheet_to_json(d));
  json terminal = nullptr;
  if (s.terminal) {
    terminal = {{"winner", s.terminal->winner},
                {"vp", s.terminal->vp},
                {"budget_exhausted", s.terminal->budget_exhausted}};
  }
  return {{"format", "fourhammer-state"},
          {"version", kJsonVersion},
          {"round", s.round},
          {"phase", to_string(s.phase)},
          {"active_player", s.active_player},
          {"first_player", s.first_player},
          {"players", players},
          {"units", units},
          {"objectives", objectives},
          {"sequence_stack", stack},
          {"rng", {{"state", std::to_string(s.rng.state)}, {"draws", std::to_string(s.rng.draws)}}},
          {"decision_count", s.decision_count},
          {"terminal", terminal},
          {"scenario", to_string(s.scenario)},
          {"auto_resolve", s.auto_resolve},
          {"datasheets", sheets},
          {"next_event_ordinal", s.next_event_ordinal}};
}

namespace {

std::uint64_t u64_from_string(const json& j, const char* what) {
  const std::string text = j.get<std::string>();
  if (text.empty() || text.size() > 20 ||
      text.find_first_not_of("0123456789") != std::string::npos) {
    throw DecodeError(std::string(what) + " must be a decimal string");
  }
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    return v;
  } catch (const std::exception&) {
    throw DecodeError(std::string(what) + " out of range");
  }
}

template <class C>
const json& bounded_array(const json& j, const char* key, C max) {
  const json& a = j.at(key);
  if (!a.is_array()) throw DecodeError(std::string(key) + " must be a list");
  if (a.size() > static_cast<std::size_t>(max)) {
    throw DecodeError(std::string(key) + " has " + std::to_string(a.size()) +
                      " entries, at most " + std::to_string(max) + " allowed");
  }
  return a;
}

}  // namespace

GameState state_from_json(const json& j) {
  GameState s;
  try {
    if (!j.is_object()) throw DecodeError("malformed document: expected an object");
    if (j.at("format").get<std::string>() != "fourhammer-state") {
      throw DecodeError("malformed document: not a fourhammer state");
    }
    const int version = j.at("version").get<int>();
    if (version != kJsonVersion) {
      throw DecodeError("unsupported version " + std::to_string(version));
    }
    s.round = j.at("round").get<int>();
    s.phase = enum_from<Phase>(j.at("phase"), kPhaseCount, "phase");
    s.active_player = j.at("active_player").get<int>();
    s.first_player = j.at("first_player").get<int>();
    const json& players = j.at("players");
    if (!players.is_array() || players.size() != 2) throw DecodeError("players must list 2 entries");
    for (std::size_t p = 0; p < 2; ++p) {
      s.players[p].faction = players[p].at("faction").get<std::string>();
      s.players[p].command_points = players[p].at("command_points").get<int>();
      s.players[p].victory_points = players[p].at("victory_points").get<int>();
      s.players[p].stratagem_used_this_phase =
          players[p].at("stratagem_used_this_phase").get<bool>();
    }
    for (const auto& uj : bounded_array(j, "units", kMaxUnits)) {
      UnitState u;
      u.unit_id = uj.at("unit_id").get<int>();
      u.datasheet = uj.at("datasheet").get<int>();
      u.owner = uj.at("owner").get<int>();
      u.deployed = uj.at("deployed").get<bool>();
      for (const auto& mj : bounded_array(uj, "models", bounds::models.max)) {
        u.models.push_back({{mj.at("x").get<int>(), mj.at("y").get<int>()},
                            mj.at("wounds").get<int>()});
      }
      for (const auto& fj : bounded_array(uj, "flags", kUnitFlagCount)) {
        u.flags.set(enum_from<UnitFlag>(fj, kUnitFlagCount, "flag"));
      }
      s.units.push_back(std::move(u));
    }
    const json& objectives = j.at("objectives");
    if (!objectives.is_array() || objectives.size() != s.objectives.size()) {
      throw DecodeError("objectives must list 4 markers");
    }
    for (std::size_t i = 0; i < s.objectives.size(); ++i) {
      s.objectives[i].position = {objectives[i].at("x").get<int>(), objectives[i].at("y").get<int>()};
      s.objectives[i].control_radius = objectives[i].at("radius").get<int>();
    }
    for (const auto& fj : bounded_array(j, "sequence_stack", kMaxStackDepth)) {
      SequenceFrame f;
      f.sequence = enum_from<Sequence>(fj.at("sequence"), kSequenceCount, "sequence");
      f.step = fj.at("step").get<int>();
      const auto locals = fj.at("locals").get<std::vector<std::int32_t>>();
      if (locals.size() != f.locals.size()) {
        throw DecodeError("frame locals must have " + std::to_string(kFrameLocals) + " entries");
      }
      std::copy(locals.begin(), locals.end(), f.locals.begin());
      s.sequence_stack.push_back(f);
    }
    s.rng.state = u64_from_string(j.at("rng").at("state"), "rng state");
    s.rng.draws = u64_from_string(j.at("rng").at("draws"), "rng draws");
    s.decision_count = j.at("decision_count").get<int>();
    if (!j.at("terminal").is_null()) {
      const json& t = j.at("terminal");
      GameResult r;
      r.winner = t.at("winner").get<int>();
      r.vp = t.at("vp").get<std::array<int, 2>>();
      r.budget_exhausted = t.at("budget_exhausted").get<bool>();
      s.terminal = r;
    }
    s.scenario = scenario_from(j.at("scenario"));
    s.auto_resolve = j.at("auto_resolve").get<bool>();
    for (const auto& dj : bounded_array(j, "datasheets", kMaxUnits)) {
      s.datasheets.push_back(datasheet_from_json(dj));
    }
    s.next_event_ordinal = j.at("next_event_ordinal").get<std::uint64_t>();
  } catch (const json::exception& ex) {
    throw DecodeError(std::string("malformed document: ") + ex.what());
  }
  check_decoded(s);
  return s;
}

}  // namespace fourhammer
