#pragma once

#include <array>
#include <bitset>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pokeleague/dex.hpp"
#include "pokeleague/rng.hpp"

namespace pokeleague {

inline constexpr int kLevel = 50;
inline constexpr std::size_t kTeamSize = 6;
inline constexpr int kDefaultTurnCap = 500;

enum class Side : std::uint8_t { A = 0, B = 1 };
constexpr std::size_t index(Side s) { return static_cast<std::size_t>(s); }
constexpr Side opponent(Side s) { return s == Side::A ? Side::B : Side::A; }
inline constexpr std::array<Side, 2> kSides = {Side::A, Side::B};

struct Stats {
  int atk = 0, def = 0, spa = 0, spd = 0, spe = 0;
  friend bool operator==(const Stats&, const Stats&) = default;
};

struct BattlerState {
  SpeciesId species = 0;
  int max_hp = 1;
  int current_hp = 1;
  Stats stats;
  StatusKind status = StatusKind::None;
  int sleep_turns = 0;  // meaningful only while asleep

  bool fainted() const { return current_hp == 0; }
  friend bool operator==(const BattlerState&, const BattlerState&) = default;
};

/// Level-50 battler at full HP: max_hp = base + 60, other stats = base + 5.
BattlerState compute_stats(const Dex& dex, SpeciesId species);

struct SideState {
  std::array<BattlerState, kTeamSize> team;
  std::size_t active = 0;
  std::bitset<kTeamSize> revealed;

  const BattlerState& active_battler() const { return team[active]; }
  BattlerState& active_battler() { return team[active]; }
  bool needs_replacement() const { return active_battler().fainted(); }
  std::size_t fainted_count() const;
  friend bool operator==(const SideState&, const SideState&) = default;
};

struct WeatherState {
  Weather kind = Weather::None;
  std::optional<int> turns_left = 0;  // nullopt: lasts until replaced
  friend bool operator==(const WeatherState&, const WeatherState&) = default;
};

enum class EndReason : std::uint8_t { AllFainted, TurnCapTieBreak, Forfeit };
std::string_view to_string(EndReason r);
std::optional<EndReason> parse_end_reason(std::string_view s);

struct BattleState {
  std::array<SideState, 2> sides;
  WeatherState weather;
  int turn = 1;
  int turn_cap = kDefaultTurnCap;
  Rng rng;
  std::optional<Side> winner;
  std::optional<EndReason> end_reason;

  const SideState& side(Side s) const { return sides[index(s)]; }
  SideState& side(Side s) { return sides[index(s)]; }
  bool ended() const { return winner.has_value(); }
  friend bool operator==(const BattleState&, const BattleState&) = default;
};

struct Action {
  enum class Kind : std::uint8_t { Attack, Switch };
  Kind kind = Kind::Attack;
  std::size_t index = 0;  // move slot for Attack, team slot for Switch

  static constexpr Action attack(std::size_t move) { return {Kind::Attack, move}; }
  static constexpr Action switch_to(std::size_t slot) { return {Kind::Switch, slot}; }
  bool is_attack() const { return kind == Kind::Attack; }
  bool is_switch() const { return kind == Kind::Switch; }

  // Canonical order: attacks by index, then switches by index.
  friend auto operator<=>(const Action&, const Action&) = default;
};
std::string describe(const Action& a);

enum class EventKind : std::uint8_t {
  SwitchIn,
  MoveUsed,
  CantMove,
  Missed,
  NoEffect,
  Damage,
  StatusInflicted,
  StatusCured,
  StatusDamage,
  WeatherStarted,
  WeatherEnded,
  WeatherDamage,
  Fainted,
  BattleEnded,
};
std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);

/// One resolved step. Fields beyond kind/side are populated per kind; amount is
/// always the HP actually removed.
struct Event {
  EventKind kind = EventKind::SwitchIn;
  Side side = Side::A;  // acting or affected side; winner for BattleEnded
  std::size_t slot = 0;
  std::string detail;  // move name, reason or end reason
  int amount = 0;
  double effectiveness = 1.0;
  bool crit = false;
  bool stab = false;
  StatusKind status = StatusKind::None;
  Weather weather = Weather::None;

  friend bool operator==(const Event&, const Event&) = default;
};

struct TurnResult {
  BattleState state;
  std::vector<Event> events;
};

class BattleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};
class BattleAlreadyEnded : public BattleError {
 public:
  BattleAlreadyEnded() : BattleError("battle already ended") {}
};
class IllegalAction : public BattleError {
 public:
  IllegalAction(Side side, Action action);
  Side side;
  Action action;
};
class NotADamagingMove : public BattleError {
 public:
  explicit NotADamagingMove(const std::string& move) : BattleError("not a damaging move: " + move) {}
};

using Team = std::array<SpeciesId, kTeamSize>;

/// Fresh battle with slot 0 of each team sent out. The lead switch-ins and
/// any auto-weather they trigger are returned as events.
TurnResult start_battle(const Dex& dex, const std::array<Team, 2>& teams, std::uint64_t seed,
                        int turn_cap = kDefaultTurnCap);

/// Legal actions for a side in canonical order. Throws BattleAlreadyEnded.
std::vector<Action> legal_actions(const BattleState& state, Side side);
bool is_legal(const BattleState& state, Side side, const Action& action);

struct DamageContext {
  Weather weather = Weather::None;
  bool crit = false;
  int roll = 100;  // 85..100
};

struct DamageResult {
  int damage = 0;
  double effectiveness = 1.0;
  bool stab = false;
};

DamageResult compute_damage(const Dex& dex, const BattlerState& attacker, const BattlerState& defender,
                            const MoveDef& move, const DamageContext& ctx);

/// Speed after paralysis.
int effective_speed(const BattlerState& b);

/// Resolves one simultaneous turn. The RNG stream lives inside the state, so
/// the result is a pure function of (state, actions).
TurnResult resolve_turn(const Dex& dex, const BattleState& state, Action action_a, Action action_b);

/// Ends the battle in favour of the other side.
TurnResult forfeit(const BattleState& state, Side loser);

int hp_percent(const BattlerState& b);

struct OwnBattlerView {
  SpeciesId species = 0;
  std::size_t slot = 0;
  int hp = 0;
  int max_hp = 0;
  int hp_percent = 0;
  StatusKind status = StatusKind::None;
  Stats stats;
  bool active = false;
  bool fainted = false;
};

struct OpponentView {
  SpeciesId active_species = 0;
  int hp_percent = 0;
  StatusKind status = StatusKind::None;
  bool fainted = false;
  std::vector<SpeciesId> revealed;  // slot order, includes the active
};

/// What one side is allowed to see.
struct BattleView {
  Side side = Side::A;
  int turn = 1;
  WeatherState weather;
  std::size_t active = 0;
  bool forced_replacement = false;
  std::array<OwnBattlerView, kTeamSize> team;
  OpponentView opponent;
  std::vector<std::string> last_turn;  // optional summary of the previous turn
};

BattleView view_for(const BattleState& state, Side side);

/// One-line human-readable rendering of an event.
std::string describe(const Dex& dex, const BattleState& state, const Event& e);

}  // namespace pokeleague
