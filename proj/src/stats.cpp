#include "fourhammer/stats.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "builtin_rosters.inc"

namespace fourhammer {

ParseError::ParseError(int line, int column, const std::string& message)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            message),
      line_(line),
      column_(column),
      detail_(message) {}

bool Datasheet::has_ranged() const {
  return std::any_of(weapons.begin(), weapons.end(),
                     [](const WeaponProfile& w) { return w.kind == WeaponKind::ranged; });
}

bool Datasheet::has_melee() const {
  return std::any_of(weapons.begin(), weapons.end(),
                     [](const WeaponProfile& w) { return w.kind == WeaponKind::melee; });
}

Registry::Registry(std::vector<Datasheet> sheets) {
  for (auto& sheet : sheets) {
    if (sheets_.count(sheet.name) != 0) {
      throw Error("duplicate unit name: " + sheet.name);
    }
    factions_.insert(sheet.faction);
    std::string key = sheet.name;
    sheets_.emplace(std::move(key), std::move(sheet));
  }
}

const Datasheet* Registry::find(std::string_view name) const {
  auto it = sheets_.find(name);
  return it == sheets_.end() ? nullptr : &it->second;
}

const Datasheet& Registry::at(std::string_view name) const {
  const Datasheet* sheet = find(name);
  if (sheet == nullptr) {
    throw Error("unknown datasheet: " + std::string(name));
  }
  return *sheet;
}

std::vector<Datasheet> Registry::faction(std::string_view faction) const {
  std::vector<Datasheet> out;
  for (const auto& [name, sheet] : sheets_) {
    if (sheet.faction == faction) out.push_back(sheet);
  }
  return out;
}

namespace {

struct Token {
  std::string text;
  bool quoted = false;
  int line = 0;
  int column = 0;
};

std::vector<std::vector<Token>> tokenize(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      char c = line[i];
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
      } else if (c == '#') {
        break;
      } else if (c == '"') {
        std::size_t close = line.find('"', i + 1);
        if (close == std::string_view::npos) {
          throw ParseError(line_no, static_cast<int>(i) + 1, "unterminated string");
        }
        tokens.push_back({std::string(line.substr(i + 1, close - i - 1)), true, line_no,
                          static_cast<int>(i) + 1});
        i = close + 1;
      } else {
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
               line[i] != '#') {
          ++i;
        }
        tokens.push_back({std::string(line.substr(start, i - start)), false, line_no,
                          static_cast<int>(start) + 1});
      }
    }
    if (!tokens.empty()) lines.push_back(std::move(tokens));
    pos = end + 1;
  }
  return lines;
}

std::string range_message(const FieldBounds& b) {
  return "value out of range: " + std::string(b.key) + " must be " + std::to_string(b.min) +
         ".." + std::to_string(b.max);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lines_(tokenize(text)) {}

  std::vector<Datasheet> parse() {
    std::vector<Datasheet> out;
    std::set<std::string> seen;
    while (index_ < lines_.size()) {
      const auto& head = lines_[index_];
      if (head[0].text != "unit" || head[0].quoted) {
        throw ParseError(head[0].line, head[0].column, "unknown keyword '" + head[0].text + "'");
      }
      Datasheet sheet = parse_block();
      if (!seen.insert(sheet.name).second) {
        throw ParseError(head[0].line, head[0].column, "duplicate unit name: " + sheet.name);
      }
      out.push_back(std::move(sheet));
    }
    return out;
  }

 private:
  [[noreturn]] static void fail(const Token& at, const std::string& message) {
    throw ParseError(at.line, at.column, message);
  }

  static void expect_count(const std::vector<Token>& line, std::size_t n) {
    if (line.size() < n) {
      const Token& last = line.back();
      throw ParseError(last.line, last.column + static_cast<int>(last.text.size()),
                       "unexpected end of line after '" + last.text + "'");
    }
  }

  static int integer(const Token& tok, const FieldBounds& b, bool allow_negative_ap = false) {
    if (tok.quoted) fail(tok, "expected integer for " + std::string(b.key));
    int value = 0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      fail(tok, "expected integer for " + std::string(b.key) + ", got '" + tok.text + "'");
    }
    if (allow_negative_ap && value < 0) value = -value;
    if (value < b.min || value > b.max) fail(tok, range_message(b));
    return value;
  }

  Datasheet parse_block() {
    const auto& head = lines_[index_];
    expect_count(head, 4);
    if (!head[1].quoted) fail(head[1], "expected quoted unit name");
    if (head[2].text != "faction" || head[2].quoted) {
      fail(head[2], "expected 'faction', got '" + head[2].text + "'");
    }
    if (head.size() > 4) fail(head[4], "unexpected token '" + head[4].text + "'");
    Datasheet sheet;
    sheet.name = head[1].text;
    sheet.faction = head[3].text;
    const Token block_start = head[0];
    ++index_;

    bool have_models = false;
    bool have_profile = false;
    while (true) {
      if (index_ >= lines_.size()) fail(block_start, "unit block is missing 'end'");
      const auto& line = lines_[index_];
      const Token& key = line[0];
      if (key.quoted) fail(key, "unknown keyword '" + key.text + "'");
      if (key.text == "end") {
        if (line.size() > 1) fail(line[1], "unexpected token '" + line[1].text + "'");
        ++index_;
        break;
      }
      if (key.text == "models") {
        expect_count(line, 2);
        if (line.size() > 2) fail(line[2], "unexpected token '" + line[2].text + "'");
        sheet.models = integer(line[1], bounds::models);
        have_models = true;
      } else if (key.text == "profile") {
        parse_profile(line, sheet);
        have_profile = true;
      } else if (key.text == "weapon") {
        if (static_cast<int>(sheet.weapons.size()) >= bounds::max_weapons) {
          fail(key, "too many weapons (max " + std::to_string(bounds::max_weapons) + ")");
        }
        sheet.weapons.push_back(parse_weapon(line));
      } else {
        fail(key, "unknown keyword '" + key.text + "'");
      }
      ++index_;
    }
    if (!have_models) fail(block_start, "unit '" + sheet.name + "' is missing 'models'");
    if (!have_profile) fail(block_start, "unit '" + sheet.name + "' is missing 'profile'");
    if (sheet.weapons.empty()) fail(block_start, "unit '" + sheet.name + "' has no weapons");
    return sheet;
  }

  static void parse_profile(const std::vector<Token>& line, Datasheet& sheet) {
    std::set<std::string> seen;
    for (std::size_t i = 1; i < line.size(); i += 2) {
      const Token& key = line[i];
      expect_count(line, i + 2);
      const Token& val = line[i + 1];
      if (!seen.insert(key.text).second) fail(key, "duplicate key '" + key.text + "'");
      if (key.text == "M") {
        sheet.move = integer(val, bounds::move);
      } else if (key.text == "T") {
        sheet.toughness = integer(val, bounds::toughness);
      } else if (key.text == "Sv") {
        sheet.save = integer(val, bounds::save);
      } else if (key.text == "Inv") {
        sheet.invulnerable_save = integer(val, bounds::invulnerable);
      } else if (key.text == "W") {
        sheet.wounds_per_model = integer(val, bounds::wounds);
      } else if (key.text == "Ld") {
        sheet.leadership = integer(val, bounds::leadership);
      } else if (key.text == "OC") {
        sheet.objective_control = integer(val, bounds::objective_control);
      } else {
        fail(key, "unknown keyword '" + key.text + "'");
      }
    }
    for (const char* required : {"M", "T", "Sv", "W", "Ld", "OC"}) {
      if (seen.count(required) == 0) {
        fail(line[0], std::string("profile is missing '") + required + "'");
      }
    }
  }

  static WeaponProfile parse_weapon(const std::vector<Token>& line) {
    expect_count(line, 3);
    if (!line[1].quoted) fail(line[1], "expected quoted weapon name");
    WeaponProfile w;
    w.name = line[1].text;
    const Token& kind = line[2];
    if (kind.text == "ranged") {
      w.kind = WeaponKind::ranged;
    } else if (kind.text == "melee") {
      w.kind = WeaponKind::melee;
    } else {
      fail(kind, "expected 'ranged' or 'melee', got '" + kind.text + "'");
    }
    const std::string skill_key = w.kind == WeaponKind::ranged ? "BS" : "WS";
    std::set<std::string> seen;
    for (std::size_t i = 3; i < line.size(); i += 2) {
      const Token& key = line[i];
      expect_count(line, i + 2);
      const Token& val = line[i + 1];
      if (!seen.insert(key.text).second) fail(key, "duplicate key '" + key.text + "'");
      if (key.text == "range" && w.kind == WeaponKind::ranged) {
        w.range_squares = integer(val, bounds::range);
      } else if (key.text == "A") {
        w.attacks = integer(val, bounds::attacks);
      } else if (key.text == skill_key) {
        w.skill = integer(val, FieldBounds{skill_key, bounds::skill.min, bounds::skill.max});
      } else if (key.text == "S") {
        w.strength = integer(val, bounds::strength);
      } else if (key.text == "AP") {
        w.armor_penetration = integer(val, bounds::armor_penetration, true);
      } else if (key.text == "D") {
        w.damage = integer(val, bounds::damage);
      } else {
        fail(key, "unknown keyword '" + key.text + "'");
      }
    }
    std::vector<std::string> required{"A", skill_key, "S", "AP", "D"};
    if (w.kind == WeaponKind::ranged) required.insert(required.begin(), "range");
    for (const auto& r : required) {
      if (seen.count(r) == 0) fail(line[0], "weapon '" + w.name + "' is missing '" + r + "'");
    }
    if (w.kind == WeaponKind::melee) w.range_squares = 1;
    return w;
  }

  std::vector<std::vector<Token>> lines_;
  std::size_t index_ = 0;
};

void check(std::vector<std::string>& out, const std::string& unit, int value,
           const FieldBounds& b) {
  if (value < b.min || value > b.max) {
    out.push_back(unit + ": " + std::string(b.key) + " must be " + std::to_string(b.min) + ".." +
                  std::to_string(b.max));
  }
}

}  // namespace

Registry parse_datasheet_file(std::string_view text) { return Registry(Parser(text).parse()); }

Registry load_registry_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read stats file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_datasheet_file(buf.str());
}

std::string render_datasheet_file(const Registry& registry) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, s] : registry.datasheets()) {
    if (!first) out << '\n';
    first = false;
    out << "unit \"" << s.name << "\" faction " << s.faction << '\n';
    out << "  models " << s.models << '\n';
    out << "  profile M " << s.move << " T " << s.toughness << " Sv " << s.save;
    if (s.invulnerable_save) out << " Inv " << *s.invulnerable_save;
    out << " W " << s.wounds_per_model << " Ld " << s.leadership << " OC "
        << s.objective_control << '\n';
    for (const auto& w : s.weapons) {
      out << "  weapon \"" << w.name << "\" ";
      if (w.kind == WeaponKind::ranged) {
        out << "ranged range " << w.range_squares << " A " << w.attacks << " BS " << w.skill;
      } else {
        out << "melee A " << w.attacks << " WS " << w.skill;
      }
      out << " S " << w.strength << " AP " << w.armor_penetration << " D " << w.damage << '\n';
    }
    out << "end\n";
  }
  return out.str();
}

std::vector<std::string> validate_datasheet(const Datasheet& s) {
  std::vector<std::string> out;
  const std::string& u = s.name;
  check(out, u, s.models, bounds::models);
  check(out, u, s.move, bounds::move);
  check(out, u, s.toughness, bounds::toughness);
  check(out, u, s.save, bounds::save);
  if (s.invulnerable_save) check(out, u, *s.invulnerable_save, bounds::invulnerable);
  check(out, u, s.wounds_per_model, bounds::wounds);
  check(out, u, s.leadership, bounds::leadership);
  check(out, u, s.objective_control, bounds::objective_control);
  if (s.name.empty()) out.push_back("<unnamed>: name must be non-empty");
  if (s.weapons.empty()) out.push_back(u + ": weapons must be non-empty");
  if (static_cast<int>(s.weapons.size()) > bounds::max_weapons) {
    out.push_back(u + ": at most " + std::to_string(bounds::max_weapons) + " weapons");
  }
  if (!s.has_melee()) out.push_back(u + ": no melee weapon");
  for (const auto& w : s.weapons) {
    const std::string wu = u + " / " + w.name;
    check(out, wu, w.attacks, bounds::attacks);
    check(out, wu, w.skill, bounds::skill);
    check(out, wu, w.strength, bounds::strength);
    check(out, wu, w.armor_penetration, bounds::armor_penetration);
    check(out, wu, w.damage, bounds::damage);
    if (w.kind == WeaponKind::ranged) {
      check(out, wu, w.range_squares, bounds::range);
    } else if (w.range_squares != 1) {
      out.push_back(wu + ": melee range must be 1");
    }
  }
  return out;
}

std::vector<std::string> validate_registry(const Registry& registry) {
  std::vector<std::string> out;
  for (const auto& [name, sheet] : registry.datasheets()) {
    auto v = validate_datasheet(sheet);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

const Registry& builtin_registry() {
  static const Registry registry = parse_datasheet_file(kBuiltinRosterText);
  return registry;
}

std::vector<Datasheet> roster(const Registry& registry, std::string_view faction) {
  if (registry.factions().count(faction) == 0) {
    throw Error("unknown faction: " + std::string(faction));
  }
  return registry.faction(faction);
}

std::vector<Datasheet> builtin_roster(std::string_view faction) {
  return roster(builtin_registry(), faction);
}

}  // namespace fourhammer
