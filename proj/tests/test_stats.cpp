#include <doctest.h>

#include <algorithm>
#include <random>

#include "fourhammer/stats.hpp"

using namespace fourhammer;

namespace {

const char* kTestSquad = R"(unit "Test Squad" faction RED
  models 5
  profile M 6 T 4 Sv 3 W 2 Ld 7 OC 2
  weapon "Rifle" ranged range 24 A 2 BS 3 S 4 AP 1 D 1
  weapon "Fists" melee A 3 WS 3 S 4 AP 0 D 1
end
)";

std::string with_line(const std::string& profile) {
  return "unit \"X\" faction RED\n  models 1\n  " + profile +
         "\n  weapon \"Fists\" melee A 1 WS 4 S 4 AP 0 D 1\nend\n";
}

}  // namespace

TEST_CASE("a single block parses into one datasheet with two weapons") {
  const Registry r = parse_datasheet_file(kTestSquad);
  REQUIRE(r.size() == 1);
  const Datasheet& d = r.at("Test Squad");
  CHECK(d.faction == "RED");
  CHECK(d.models == 5);
  CHECK(d.move == 6);
  CHECK(d.toughness == 4);
  CHECK(d.save == 3);
  CHECK_FALSE(d.invulnerable_save.has_value());
  CHECK(d.wounds_per_model == 2);
  CHECK(d.leadership == 7);
  CHECK(d.objective_control == 2);
  REQUIRE(d.weapons.size() == 2);
  CHECK(d.weapons[0] == WeaponProfile{"Rifle", WeaponKind::ranged, 24, 2, 3, 4, 1, 1});
  CHECK(d.weapons[1] == WeaponProfile{"Fists", WeaponKind::melee, 1, 3, 3, 4, 0, 1});
  CHECK(validate_registry(r).empty());
}

TEST_CASE("empty and comment-only files give an empty registry") {
  CHECK(parse_datasheet_file("").empty());
  CHECK(parse_datasheet_file("# nothing here\n\n   \n").empty());
}

TEST_CASE("out-of-range values are rejected with the bound") {
  try {
    parse_datasheet_file(with_line("profile M 6 T 4 Sv 7 W 2 Ld 7 OC 2"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.detail() == "value out of range: Sv must be 2..6");
    CHECK(e.line() == 3);
  }
}

TEST_CASE("syntax errors carry line and column") {
  SUBCASE("unknown keyword") {
    try {
      parse_datasheet_file("unit \"X\" faction RED\n  modles 1\nend\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 3);
      CHECK(e.detail() == "unknown keyword 'modles'");
      CHECK(std::string(e.what()) == "line 2, column 3: unknown keyword 'modles'");
    }
  }
  SUBCASE("unterminated string") {
    CHECK_THROWS_WITH_AS(parse_datasheet_file("unit \"X faction RED\n"),
                         "line 1, column 6: unterminated string", ParseError);
  }
  SUBCASE("missing end") {
    CHECK_THROWS_AS(parse_datasheet_file("unit \"X\" faction RED\n  models 1\n"), ParseError);
  }
  SUBCASE("duplicate unit") {
    std::string twice = std::string(kTestSquad) + kTestSquad;
    CHECK_THROWS_AS(parse_datasheet_file(twice), ParseError);
  }
}

TEST_CASE("every field is checked against its bounds") {
  struct Case {
    std::string line;
    std::string message;
  };
  const std::vector<Case> cases{
      {"profile M 0 T 4 Sv 3 W 2 Ld 7 OC 2", "value out of range: M must be 1..20"},
      {"profile M 6 T 15 Sv 3 W 2 Ld 7 OC 2", "value out of range: T must be 1..14"},
      {"profile M 6 T 4 Sv 3 Inv 1 W 2 Ld 7 OC 2", "value out of range: Inv must be 2..6"},
      {"profile M 6 T 4 Sv 3 W 31 Ld 7 OC 2", "value out of range: W must be 1..30"},
      {"profile M 6 T 4 Sv 3 W 2 Ld 13 OC 2", "value out of range: Ld must be 2..12"},
      {"profile M 6 T 4 Sv 3 W 2 Ld 7 OC 11", "value out of range: OC must be 0..10"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.line);
    try {
      parse_datasheet_file(with_line(c.line));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.detail() == c.message);
    }
  }
}

TEST_CASE("render then parse is a fixpoint") {
  const Registry& builtin = builtin_registry();
  const std::string text = render_datasheet_file(builtin);
  const Registry again = parse_datasheet_file(text);
  CHECK(again == builtin);
  CHECK(render_datasheet_file(again) == text);
  CHECK(parse_datasheet_file(render_datasheet_file(parse_datasheet_file(kTestSquad))) ==
        parse_datasheet_file(kTestSquad));
}

TEST_CASE("block order does not change the registry") {
  const std::string text = render_datasheet_file(builtin_registry());
  std::vector<std::string> blocks;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find("end\n", start) + 4;
    blocks.push_back(text.substr(start, end - start));
    start = end;
    while (start < text.size() && text[start] == '\n') ++start;
  }
  REQUIRE(blocks.size() == builtin_registry().size());
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(blocks.begin(), blocks.end(), rng);
    std::string shuffled;
    for (const auto& b : blocks) shuffled += b + "\n";
    CHECK(parse_datasheet_file(shuffled) == builtin_registry());
  }
}

TEST_CASE("mutating any number out of range is caught by parser and validator") {
  // Walk every integer field of a rendered builtin sheet, push it past each
  // bound and check both layers report it.
  const Datasheet base = builtin_registry().at("Redemptor Dreadnought");
  struct Field {
    const char* key;
    int* (*get)(Datasheet&);
    FieldBounds b;
  };
  const std::vector<Field> fields{
      {"models", [](Datasheet& d) { return &d.models; }, bounds::models},
      {"M", [](Datasheet& d) { return &d.move; }, bounds::move},
      {"T", [](Datasheet& d) { return &d.toughness; }, bounds::toughness},
      {"Sv", [](Datasheet& d) { return &d.save; }, bounds::save},
      {"W", [](Datasheet& d) { return &d.wounds_per_model; }, bounds::wounds},
      {"Ld", [](Datasheet& d) { return &d.leadership; }, bounds::leadership},
      {"OC", [](Datasheet& d) { return &d.objective_control; }, bounds::objective_control},
      {"A", [](Datasheet& d) { return &d.weapons[0].attacks; }, bounds::attacks},
      {"S", [](Datasheet& d) { return &d.weapons[0].strength; }, bounds::strength},
      {"D", [](Datasheet& d) { return &d.weapons[0].damage; }, bounds::damage},
      {"range", [](Datasheet& d) { return &d.weapons[0].range_squares; }, bounds::range},
  };
  for (const auto& f : fields) {
    for (int bad : {f.b.min - 1, f.b.max + 1}) {
      CAPTURE(f.key);
      CAPTURE(bad);
      Datasheet d = base;
      *f.get(d) = bad;
      CHECK(validate_datasheet(d).size() == 1);
      const std::string text = render_datasheet_file(Registry({d}));
      CHECK_THROWS_AS(parse_datasheet_file(text), ParseError);
    }
  }
}

TEST_CASE("validate_registry names the unit") {
  Datasheet d = parse_datasheet_file(kTestSquad).at("Test Squad");
  SUBCASE("no melee weapon") {
    d.weapons.pop_back();
    const auto v = validate_registry(Registry({d}));
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "Test Squad: no melee weapon");
  }
  SUBCASE("eleven models") {
    d.models = 11;
    const auto v = validate_registry(Registry({d}));
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "Test Squad: models must be 1..10");
  }
}

TEST_CASE("shipped fixture rosters") {
  CHECK(builtin_roster("AST").size() == 4);
  CHECK(builtin_roster("HIV").size() == 4);
  CHECK_THROWS_WITH_AS(builtin_roster("XYZ"), "unknown faction: XYZ", Error);
  CHECK(validate_registry(builtin_registry()).empty());
  for (const auto& d : builtin_roster("HIV")) CHECK(d.faction == "HIV");
}

TEST_CASE("registry lookups") {
  const Registry& r = builtin_registry();
  CHECK(r.find("Carnifex") != nullptr);
  CHECK(r.find("Nobody") == nullptr);
  CHECK_THROWS_WITH_AS(r.at("Nobody"), "unknown datasheet: Nobody", Error);
  CHECK(r.factions().size() == 2);
  CHECK_THROWS_AS(load_registry_file("/nonexistent/rosters.stats"), Error);
}
