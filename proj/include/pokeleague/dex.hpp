#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace pokeleague {

enum class Type : std::uint8_t {
  Normal,
  Fire,
  Water,
  Electric,
  Grass,
  Ice,
  Fighting,
  Poison,
  Ground,
  Flying,
  Psychic,
  Bug,
  Rock,
  Ghost,
  Dragon,
  Dark,
  Steel,
  Fairy,
};
inline constexpr std::size_t kTypeCount = 18;

std::string_view to_string(Type t);
std::optional<Type> parse_type(std::string_view name);
std::array<Type, kTypeCount> all_types();

enum class MoveCategory : std::uint8_t { Physical, Special, Status };
enum class StatusKind : std::uint8_t { None, Burn, Poison, Paralysis, Sleep, Freeze };
enum class Weather : std::uint8_t { None, Rain, Sun, Sand };

std::string_view to_string(MoveCategory c);
std::string_view to_string(StatusKind s);
std::string_view to_string(Weather w);
std::optional<MoveCategory> parse_category(std::string_view name);
std::optional<StatusKind> parse_status(std::string_view name);
std::optional<Weather> parse_weather(std::string_view name);

/// 18x18 attacker-by-defender multiplier matrix.
class TypeChart {
 public:
  TypeChart();

  double cell(Type attacking, Type defending) const {
    return cells_[static_cast<std::size_t>(attacking)][static_cast<std::size_t>(defending)];
  }
  void set(Type attacking, Type defending, double m) {
    cells_[static_cast<std::size_t>(attacking)][static_cast<std::size_t>(defending)] = m;
  }

  friend bool operator==(const TypeChart&, const TypeChart&) = default;

 private:
  std::array<std::array<double, kTypeCount>, kTypeCount> cells_;
};

/// Product of the per-type cells; defending holds one or two distinct types.
double type_multiplier(const TypeChart& chart, Type attacking, std::span<const Type> defending);

struct SecondaryEffect {
  StatusKind status = StatusKind::None;
  double chance = 0.0;
  friend bool operator==(const SecondaryEffect&, const SecondaryEffect&) = default;
};

struct MoveDef {
  std::string name;
  Type type = Type::Normal;
  MoveCategory category = MoveCategory::Physical;
  int power = 0;
  std::optional<int> accuracy;  // nullopt: always hits
  int priority = 0;
  std::optional<SecondaryEffect> effect;

  bool damaging() const { return category != MoveCategory::Status; }
  friend bool operator==(const MoveDef&, const MoveDef&) = default;
};

struct BaseStats {
  int hp = 1, atk = 1, def = 1, spa = 1, spd = 1, spe = 1;
  int total() const { return hp + atk + def + spa + spd + spe; }
  friend bool operator==(const BaseStats&, const BaseStats&) = default;
};

using MoveId = std::size_t;
using SpeciesId = std::size_t;

struct Species {
  int dex_id = 0;
  std::string name;
  std::vector<Type> types;
  BaseStats base;
  std::array<MoveId, 4> moves{};
  std::optional<Weather> auto_weather;

  bool has_type(Type t) const;
  friend bool operator==(const Species&, const Species&) = default;
};

struct DexIssue {
  enum class Kind { MalformedFile, UnknownReference, InvariantViolation };
  Kind kind;
  std::string entry;
  std::string message;
};
std::string_view to_string(DexIssue::Kind k);

/// Validation failure; carries every problem found, not just the first.
class DexError : public std::runtime_error {
 public:
  explicit DexError(std::vector<DexIssue> issues);
  const std::vector<DexIssue>& issues() const { return issues_; }

 private:
  std::vector<DexIssue> issues_;
};

class DexIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable game data. Species and moves are addressed by their table index.
class Dex {
 public:
  Dex(TypeChart chart, std::vector<MoveDef> moves, std::vector<Species> species,
      std::vector<SpeciesId> pool);

  const TypeChart& chart() const { return chart_; }
  std::span<const MoveDef> moves() const { return moves_; }
  std::span<const Species> species() const { return species_; }
  std::span<const SpeciesId> pool() const { return pool_; }

  const MoveDef& move(MoveId id) const { return moves_.at(id); }
  const Species& species(SpeciesId id) const { return species_.at(id); }
  const MoveDef& move_of(SpeciesId s, std::size_t slot) const { return move(species(s).moves.at(slot)); }

  std::optional<SpeciesId> find_species(std::string_view name) const;
  std::optional<MoveId> find_move(std::string_view name) const;

  /// Hash of the canonical JSON form; stable across formatting differences.
  std::uint64_t content_hash() const { return hash_; }

 private:
  TypeChart chart_;
  std::vector<MoveDef> moves_;
  std::vector<Species> species_;
  std::vector<SpeciesId> pool_;
  std::unordered_map<std::string, SpeciesId> species_by_name_;
  std::unordered_map<std::string, MoveId> moves_by_name_;
  std::uint64_t hash_ = 0;
};

Dex parse_dex(std::string_view json_text);
Dex load_dex(const std::filesystem::path& path);

nlohmann::json to_json(const Dex& dex);

/// Bundled dex path baked in at build time.
std::filesystem::path default_dex_path();

}  // namespace pokeleague
