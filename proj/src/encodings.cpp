#include "fourhammer/encodings.hpp"

#include <cstring>
#include <sstream>

#include "fourhammer/rules.hpp"
#include "fourhammer/wire.hpp"

namespace fourhammer {

std::vector<std::uint8_t> legal_mask(const GameState& s) {
  const DecisionRequest req = pending_decision(s);
  std::vector<std::uint8_t> mask(kActionCount, 0);
  for (const auto& a : req.options) mask[static_cast<std::size_t>(action_to_id(a))] = 1;
  return mask;
}

namespace {

// The three setup decisions share slot 0.
int decision_slot(DecisionKind k) {
  const int i = static_cast<int>(k);
  return i <= static_cast<int>(DecisionKind::deploy_position) ? 0 : i - 2;
}

constexpr UnitFlag kTensorFlags[] = {UnitFlag::moved,  UnitFlag::advanced,
                                     UnitFlag::fell_back, UnitFlag::shot,
                                     UnitFlag::charged_this_turn, UnitFlag::fought,
                                     UnitFlag::battle_shocked};

}  // namespace

std::vector<float> encode_tensor(const GameState& s) {
  std::vector<float> t(kTensorLength, 0.0F);
  t[0] = static_cast<float>(s.round) / kMaxRounds;
  t[1 + static_cast<int>(s.phase)] = 1.0F;
  t[7] = static_cast<float>(s.active_player);
  if (!s.terminal) t[8 + decision_slot(pending_decision(s).kind)] = 1.0F;
  t[20] = static_cast<float>(s.players[0].command_points) / kMaxCommandPoints;
  t[21] = static_cast<float>(s.players[1].command_points) / kMaxCommandPoints;
  t[22] = static_cast<float>(s.players[0].victory_points) / kMaxVictoryPoints;
  t[23] = static_cast<float>(s.players[1].victory_points) / kMaxVictoryPoints;

  for (const auto& u : s.units) {
    if (!u.alive()) continue;
    float* slot = &t[kTensorGlobal + u.unit_id * kTensorPerUnit];
    const Datasheet& sheet = s.sheet(u);
    slot[0] = 1.0F;
    slot[1] = static_cast<float>(u.owner);
    slot[2] = static_cast<float>(u.unit_id % kMaxUnitsPerSide) / kMaxUnitsPerSide;
    slot[3] = static_cast<float>(u.alive_models()) / bounds::models.max;
    slot[4] = static_cast<float>(u.wounds_remaining()) / static_cast<float>(sheet.total_wounds());
    if (u.deployed) {
      const GridPos a = u.models[static_cast<std::size_t>(u.anchor())].position;
      slot[5] = static_cast<float>(a.x) / (kBoardWidth - 1);
      slot[6] = static_cast<float>(a.y) / (kBoardHeight - 1);
    }
    for (int f = 0; f < 7; ++f) slot[7 + f] = u.flags.has(kTensorFlags[f]) ? 1.0F : 0.0F;
  }

  for (int i = 0; i < 4; ++i) {
    float* slot = &t[kTensorGlobal + kMaxUnits * kTensorPerUnit + i * kTensorPerObjective];
    const ObjectiveMarker& o = s.objectives[static_cast<std::size_t>(i)];
    slot[0] = static_cast<float>(o.position.x) / (kBoardWidth - 1);
    slot[1] = static_cast<float>(o.position.y) / (kBoardHeight - 1);
    switch (objective_control(s, i)) {
      case Control::p0: slot[2] = 1.0F; break;
      case Control::p1: slot[3] = 1.0F; break;
      case Control::contested: slot[4] = 1.0F; break;
      case Control::none: break;
    }
  }
  return t;
}

namespace {

std::string pos(GridPos p) { return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")"; }

std::string roll_context(const GameState& s, const PendingRoll& r) {
  std::ostringstream out;
  out << to_string(r.purpose) << " roll ";
  if (r.purpose == RollPurpose::charge || r.purpose == RollPurpose::battle_shock) {
    out << r.die1 << " + " << r.die2 << " = " << r.total;
  } else {
    out << r.total;
  }
  if (r.subject_unit >= 0) out << " for unit " << r.subject_unit;
  if (r.purpose == RollPurpose::charge) out << ", needed " << r.needed;
  if (r.purpose == RollPurpose::battle_shock) out << ", leadership " << r.needed;
  out << "; re-roll costs 1 CP (player " << r.actor << " has "
      << s.players[static_cast<std::size_t>(r.actor)].command_points << " CP)";
  return out.str();
}

}  // namespace

std::string encode_text(const GameState& s) {
  std::ostringstream out;
  out << "GAME\n";
  out << "round: " << s.round << " of " << kMaxRounds << "\n";
  out << "phase: " << to_string(s.phase) << "\n";
  out << "active player: " << s.active_player << "\n";
  out << "first player: " << s.first_player << "\n";
  out << "decisions made: " << s.decision_count << "\n";
  out << "dice rolled: " << s.rng.draws << "\n";
  for (int p = 0; p < 2; ++p) {
    const PlayerState& ps = s.players[static_cast<std::size_t>(p)];
    out << "player " << p << ": faction " << ps.faction << ", CP " << ps.command_points << ", VP "
        << ps.victory_points << (ps.stratagem_used_this_phase ? ", re-roll used this phase" : "")
        << "\n";
  }
  out << "sequence:";
  for (const auto& f : s.sequence_stack) out << " " << to_string(f.sequence) << "@" << f.step;
  out << "\n\nOBJECTIVES\n";
  for (int i = 0; i < 4; ++i) {
    out << "objective " << i << " at " << pos(s.objectives[static_cast<std::size_t>(i)].position)
        << ": " << to_string(objective_control(s, i)) << "\n";
  }
  out << "\nUNITS\n";
  for (const auto& u : s.units) {
    const Datasheet& sheet = s.sheet(u);
    out << "unit " << u.unit_id << " (player " << u.owner << ") " << sheet.name << ": ";
    if (!u.alive()) {
      out << "destroyed\n";
      continue;
    }
    out << u.alive_models() << "/" << u.models.size() << " models, " << u.wounds_remaining() << "/"
        << sheet.total_wounds() << " wounds";
    if (!u.deployed) {
      out << ", not deployed\n";
      continue;
    }
    std::string flags;
    for (int f = 0; f < kUnitFlagCount; ++f) {
      if (u.flags.has(static_cast<UnitFlag>(f))) {
        flags += (flags.empty() ? "" : ", ") + std::string(to_string(static_cast<UnitFlag>(f)));
      }
    }
    out << (flags.empty() ? "" : "; flags: " + flags) << "\n";
    for (std::size_t i = 0; i < u.models.size(); ++i) {
      const ModelState& m = u.models[i];
      if (m.alive()) out << "  model " << i << " at " << pos(m.position) << ", " << m.wounds_remaining << "W\n";
    }
  }
  if (s.terminal) {
    out << "\nRESULT\n";
    out << "winner: " << (s.terminal->winner == kDraw ? "draw" : "player " + std::to_string(s.terminal->winner))
        << "\n";
    out << "VP: " << s.terminal->vp[0] << " - " << s.terminal->vp[1] << "\n";
    if (s.terminal->budget_exhausted) out << "decision budget exhausted\n";
    return out.str();
  }
  const DecisionRequest req = pending_decision(s);
  out << "\nPENDING DECISION\n";
  out << "kind: " << to_string(req.kind) << "\n";
  out << "actor: player " << req.actor << "\n";
  if (auto roll = pending_roll(s)) {
    out << "context: " << roll_context(s, *roll) << "\n";
  } else if (const int subject = decision_subject_unit(s); subject >= 0) {
    out << "context: unit " << subject << "\n";
  }
  out << "options:\n";
  for (const auto& a : req.options) {
    out << action_to_id(a) << ": " << describe(a, req.kind, s) << "\n";
  }
  return out.str();
}

void check_decoded(const GameState& s) {
  auto issues = validate_state(s);
  if (issues.empty()) issues = validate_sequence_stack(s);
  if (!issues.empty()) throw DecodeError("bound violation: " + issues.front());
  if (!s.terminal) {
    try {
      if (pending_decision(s).options.empty()) throw DecodeError("pending decision has no options");
    } catch (const DecodeError&) {
      throw;
    } catch (const Error& e) {
      throw DecodeError(std::string("inconsistent sequence state: ") + e.what());
    }
  }
}

std::string encode_json(const GameState& s) { return state_to_json(s).dump(); }

GameState decode_json(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw DecodeError("malformed document: empty input");
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw DecodeError(std::string("malformed document: ") + ex.what());
  }
  return state_from_json(j);
}

// ------------------------------------------------------------ binary

namespace {

class Writer {
 public:
  void u8(std::uint32_t v) { out_.push_back(static_cast<std::uint8_t>(v)); }
  void u16(std::uint32_t v) {
    for (int i = 0; i < 2; ++i) u8((v >> (8 * i)) & 0xFF);
  }
  void i32(std::int32_t v) {
    const auto u = static_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) u8((u >> (8 * i)) & 0xFF);
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint32_t>((v >> (8 * i)) & 0xFF));
  }
  void str(const std::string& s) {
    u16(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  std::uint32_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u16() {
    std::uint32_t v = u8();
    return v | (u8() << 8);
  }
  std::int32_t i32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_++]) << (8 * i);
    return static_cast<std::int32_t>(v);
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
    return v;
  }
  bool boolean() {
    const auto v = u8();
    if (v > 1) throw DecodeError("boolean byte " + std::to_string(v) + " is not 0 or 1");
    return v == 1;
  }
  std::string str() {
    const std::size_t n = u16();
    need(n);
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::size_t count(std::size_t max, const char* what) {
    const std::size_t n = u8();
    if (n > max) {
      throw DecodeError(std::string(what) + " count " + std::to_string(n) + " exceeds " +
                        std::to_string(max));
    }
    return n;
  }
  template <class E>
  E enumeration(int count, const char* what) {
    const auto v = u8();
    if (static_cast<int>(v) >= count) {
      throw DecodeError(std::string(what) + " code " + std::to_string(v) + " out of range");
    }
    return static_cast<E>(v);
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw DecodeError("truncated input");
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void write_datasheet(Writer& w, const Datasheet& d) {
  w.str(d.name);
  w.str(d.faction);
  for (int v : {d.models, d.move, d.toughness, d.save, d.invulnerable_save.value_or(0),
                d.wounds_per_model, d.leadership, d.objective_control}) {
    w.i32(v);
  }
  w.u8(static_cast<std::uint32_t>(d.weapons.size()));
  for (const auto& wp : d.weapons) {
    w.str(wp.name);
    w.u8(static_cast<std::uint32_t>(wp.kind));
    for (int v : {wp.range_squares, wp.attacks, wp.skill, wp.strength, wp.armor_penetration,
                  wp.damage}) {
      w.i32(v);
    }
  }
}

Datasheet read_datasheet(Reader& r) {
  Datasheet d;
  d.name = r.str();
  d.faction = r.str();
  d.models = r.i32();
  d.move = r.i32();
  d.toughness = r.i32();
  d.save = r.i32();
  if (const int inv = r.i32(); inv != 0) d.invulnerable_save = inv;
  d.wounds_per_model = r.i32();
  d.leadership = r.i32();
  d.objective_control = r.i32();
  const std::size_t n = r.count(bounds::max_weapons, "weapon");
  for (std::size_t i = 0; i < n; ++i) {
    WeaponProfile w;
    w.name = r.str();
    w.kind = r.enumeration<WeaponKind>(2, "weapon kind");
    w.range_squares = r.i32();
    w.attacks = r.i32();
    w.skill = r.i32();
    w.strength = r.i32();
    w.armor_penetration = r.i32();
    w.damage = r.i32();
    d.weapons.push_back(std::move(w));
  }
  return d;
}

}  // namespace

std::vector<std::uint8_t> encode_binary(const GameState& s) {
  Writer w;
  for (char c : kBinaryMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u16(kBinaryVersion);
  w.i32(s.round);
  w.u8(static_cast<std::uint32_t>(s.phase));
  w.u8(static_cast<std::uint32_t>(s.active_player));
  w.u8(static_cast<std::uint32_t>(s.first_player));
  for (const auto& p : s.players) {
    w.str(p.faction);
    w.i32(p.command_points);
    w.i32(p.victory_points);
    w.u8(p.stratagem_used_this_phase ? 1 : 0);
  }
  w.u8(static_cast<std::uint32_t>(s.units.size()));
  for (const auto& u : s.units) {
    w.u8(static_cast<std::uint32_t>(u.unit_id));
    w.u8(static_cast<std::uint32_t>(u.datasheet));
    w.u8(static_cast<std::uint32_t>(u.owner));
    w.u8(u.deployed ? 1 : 0);
    w.u8(static_cast<std::uint32_t>(u.models.size()));
    for (const auto& m : u.models) {
      w.i32(m.position.x);
      w.i32(m.position.y);
      w.i32(m.wounds_remaining);
    }
    w.u8(u.flags.bits());
  }
  for (const auto& o : s.objectives) {
    w.i32(o.position.x);
    w.i32(o.position.y);
    w.i32(o.control_radius);
  }
  w.u8(static_cast<std::uint32_t>(s.sequence_stack.size()));
  for (const auto& f : s.sequence_stack) {
    w.u8(static_cast<std::uint32_t>(f.sequence));
    w.i32(f.step);
    for (auto l : f.locals) w.i32(l);
  }
  w.u64(s.rng.state);
  w.u64(s.rng.draws);
  w.i32(s.decision_count);
  w.u8(s.terminal ? 1 : 0);
  if (s.terminal) {
    w.i32(s.terminal->winner);
    w.i32(s.terminal->vp[0]);
    w.i32(s.terminal->vp[1]);
    w.u8(s.terminal->budget_exhausted ? 1 : 0);
  }
  w.u8(static_cast<std::uint32_t>(s.scenario));
  w.u8(s.auto_resolve ? 1 : 0);
  w.u8(static_cast<std::uint32_t>(s.datasheets.size()));
  for (const auto& d : s.datasheets) write_datasheet(w, d);
  w.u64(s.next_event_ordinal);
  return w.take();
}

GameState decode_binary(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw DecodeError("truncated input");
  if (std::memcmp(bytes.data(), kBinaryMagic, 4) != 0) throw DecodeError("bad magic");
  Reader r(bytes.subspan(4));
  const auto version = r.u16();
  if (version != kBinaryVersion) throw DecodeError("unsupported version " + std::to_string(version));
  GameState s;
  s.round = r.i32();
  s.phase = r.enumeration<Phase>(kPhaseCount, "phase");
  s.active_player = static_cast<int>(r.u8());
  s.first_player = static_cast<int>(r.u8());
  for (auto& p : s.players) {
    p.faction = r.str();
    p.command_points = r.i32();
    p.victory_points = r.i32();
    p.stratagem_used_this_phase = r.boolean();
  }
  const std::size_t units = r.count(kMaxUnits, "unit");
  for (std::size_t i = 0; i < units; ++i) {
    UnitState u;
    u.unit_id = static_cast<int>(r.u8());
    u.datasheet = static_cast<int>(r.u8());
    u.owner = static_cast<int>(r.u8());
    u.deployed = r.boolean();
    const std::size_t models = r.count(bounds::models.max, "model");
    for (std::size_t m = 0; m < models; ++m) {
      ModelState ms;
      ms.position.x = r.i32();
      ms.position.y = r.i32();
      ms.wounds_remaining = r.i32();
      u.models.push_back(ms);
    }
    u.flags = FlagSet::from_bits(static_cast<std::uint8_t>(r.u8()));
    s.units.push_back(std::move(u));
  }
  for (auto& o : s.objectives) {
    o.position.x = r.i32();
    o.position.y = r.i32();
    o.control_radius = r.i32();
  }
  const std::size_t frames = r.count(kMaxStackDepth, "frame");
  for (std::size_t i = 0; i < frames; ++i) {
    SequenceFrame f;
    f.sequence = r.enumeration<Sequence>(kSequenceCount, "sequence");
    f.step = r.i32();
    for (auto& l : f.locals) l = r.i32();
    s.sequence_stack.push_back(f);
  }
  s.rng.state = r.u64();
  s.rng.draws = r.u64();
  s.decision_count = r.i32();
  if (r.boolean()) {
    GameResult g;
    g.winner = r.i32();
    g.vp[0] = r.i32();
    g.vp[1] = r.i32();
    g.budget_exhausted = r.boolean();
    s.terminal = g;
  }
  s.scenario = r.enumeration<ScenarioKind>(3, "scenario");
  s.auto_resolve = r.boolean();
  const std::size_t sheets = r.count(kMaxUnits, "datasheet");
  for (std::size_t i = 0; i < sheets; ++i) s.datasheets.push_back(read_datasheet(r));
  s.next_event_ordinal = r.u64();
  if (!r.done()) throw DecodeError("trailing bytes after state");
  check_decoded(s);
  return s;
}

}  // namespace fourhammer
