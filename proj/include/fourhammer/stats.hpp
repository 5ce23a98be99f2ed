#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fourhammer {

/// Base class for every error the engine reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stats file syntax or range error with a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message);

  int line() const { return line_; }
  int column() const { return column_; }
  /// Message without the location prefix.
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

enum class WeaponKind : std::uint8_t { ranged, melee };

struct WeaponProfile {
  std::string name;
  WeaponKind kind = WeaponKind::ranged;
  int range_squares = 1;  // melee weapons always carry 1
  int attacks = 1;
  int skill = 4;  // BS or WS target number
  int strength = 4;
  int armor_penetration = 0;  // non-negative save penalty
  int damage = 1;

  bool operator==(const WeaponProfile&) const = default;
};

struct Datasheet {
  std::string name;
  std::string faction;
  int models = 1;
  int move = 6;
  int toughness = 4;
  int save = 4;
  std::optional<int> invulnerable_save;
  int wounds_per_model = 1;
  int leadership = 7;
  int objective_control = 1;
  std::vector<WeaponProfile> weapons;

  bool has_ranged() const;
  bool has_melee() const;
  int total_wounds() const { return models * wounds_per_model; }

  bool operator==(const Datasheet&) const = default;
};

/// Inclusive bounds for every numeric stats field. Shared by the parser,
/// validate_registry and the state decoders.
struct FieldBounds {
  std::string_view key;
  int min;
  int max;
};

namespace bounds {
inline constexpr FieldBounds models{"models", 1, 10};
inline constexpr FieldBounds move{"M", 1, 20};
inline constexpr FieldBounds toughness{"T", 1, 14};
inline constexpr FieldBounds save{"Sv", 2, 6};
inline constexpr FieldBounds invulnerable{"Inv", 2, 6};
inline constexpr FieldBounds wounds{"W", 1, 30};
inline constexpr FieldBounds leadership{"Ld", 2, 12};
inline constexpr FieldBounds objective_control{"OC", 0, 10};
inline constexpr FieldBounds range{"range", 1, 48};
inline constexpr FieldBounds attacks{"A", 1, 20};
inline constexpr FieldBounds skill{"BS/WS", 2, 6};
inline constexpr FieldBounds strength{"S", 1, 20};
inline constexpr FieldBounds armor_penetration{"AP", 0, 6};
inline constexpr FieldBounds damage{"D", 1, 12};
inline constexpr int max_weapons = 8;
}  // namespace bounds

/// Immutable name-keyed collection of datasheets.
class Registry {
 public:
  Registry() = default;
  /// Throws Error on duplicate names.
  explicit Registry(std::vector<Datasheet> sheets);

  const Datasheet* find(std::string_view name) const;
  const Datasheet& at(std::string_view name) const;
  /// Datasheets of one faction, ordered by name.
  std::vector<Datasheet> faction(std::string_view faction) const;

  const std::map<std::string, Datasheet, std::less<>>& datasheets() const { return sheets_; }
  const std::set<std::string, std::less<>>& factions() const { return factions_; }
  std::size_t size() const { return sheets_.size(); }
  bool empty() const { return sheets_.empty(); }

  bool operator==(const Registry&) const = default;

 private:
  std::map<std::string, Datasheet, std::less<>> sheets_;
  std::set<std::string, std::less<>> factions_;
};

Registry parse_datasheet_file(std::string_view text);
Registry load_registry_file(const std::filesystem::path& path);

/// Canonical text form; parse_datasheet_file(render_datasheet_file(r)) == r.
std::string render_datasheet_file(const Registry& registry);

/// One entry per broken invariant, each naming the datasheet and field.
std::vector<std::string> validate_datasheet(const Datasheet& sheet);
std::vector<std::string> validate_registry(const Registry& registry);

/// Registry parsed from the shipped data/rosters.stats.
const Registry& builtin_registry();
/// Four datasheets of a shipped fixture faction ("AST" or "HIV").
std::vector<Datasheet> builtin_roster(std::string_view faction);
/// Roster of a faction from any registry; throws Error if it is unknown.
std::vector<Datasheet> roster(const Registry& registry, std::string_view faction);

}  // namespace fourhammer
