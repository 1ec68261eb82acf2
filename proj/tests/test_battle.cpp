#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "pokeleague/battle.hpp"
#include "pokeleague/serialize.hpp"
#include "support.hpp"

using namespace pokeleague;
using testing_support::dex;
using testing_support::species;
using testing_support::team_of;

namespace {

const std::vector<std::string> kTeamA = {"Jolteon", "Swampert", "Metagross", "Gengar", "Salamence", "Blissey"};
const std::vector<std::string> kTeamB = {"Gyarados", "Tyranitar", "Skarmory", "Zapdos", "Celebi", "Snorlax"};

BattleState fresh(std::uint64_t seed = 1, std::vector<std::string> a = kTeamA, std::vector<std::string> b = kTeamB) {
  return start_battle(dex(), {team_of(a), team_of(b)}, seed).state;
}

// A synthetic move so damage arithmetic can be checked without dex data.
MoveDef move(Type type, int power, MoveCategory cat = MoveCategory::Special) {
  MoveDef m;
  m.name = "Test";
  m.type = type;
  m.category = cat;
  m.power = power;
  m.accuracy = 100;
  return m;
}

BattlerState battler(const std::string& name, int atk_like, int def_like) {
  auto b = compute_stats(dex(), species(name));
  b.stats.atk = b.stats.spa = atk_like;
  b.stats.def = b.stats.spd = def_like;
  return b;
}

std::size_t slot_of(SpeciesId s, const std::string& move_name) {
  for (std::size_t i = 0; i < 4; ++i)
    if (dex().move_of(s, i).name == move_name) return i;
  FAIL("move not found: " << move_name);
  return 0;
}

}  // namespace

TEST_CASE("compute_stats follows the level-50 rule") {
  const auto b = compute_stats(dex(), species("Blissey"));
  const auto& base = dex().species(species("Blissey")).base;
  CHECK(b.max_hp == base.hp + 60);
  CHECK(b.current_hp == b.max_hp);
  CHECK(b.stats.spe == base.spe + 5);
  CHECK(b.stats.atk == base.atk + 5);
}

TEST_CASE("worked damage example: 95 power, A 120, D 80, STAB, x2 -> 192") {
  // Jolteon is Electric; Grass/Poison Venusaur resists Electric, so use a
  // single-type Water defender (x2) for the STAB Electric hit.
  const auto attacker = battler("Jolteon", 120, 1);
  const auto defender = battler("Suicune", 1, 80);
  const auto r = compute_damage(dex(), attacker, defender, move(Type::Electric, 95), {Weather::None, false, 100});
  CHECK(r.stab);
  CHECK(r.effectiveness == 2.0);
  CHECK(r.damage == 192);
}

TEST_CASE("damage edge cases") {
  SUBCASE("immunity annihilates") {
    const auto r = compute_damage(dex(), battler("Jolteon", 200, 1), battler("Gliscor", 1, 50),
                                  move(Type::Electric, 120), {});
    CHECK(r.effectiveness == 0.0);
    CHECK(r.damage == 0);
  }
  SUBCASE("minimum clamp is 1") {
    const auto r = compute_damage(dex(), battler("Snorlax", 1, 1), battler("Skarmory", 1, 255),
                                  move(Type::Grass, 1, MoveCategory::Physical), {Weather::None, false, 85});
    CHECK(r.damage == 1);
  }
  SUBCASE("status moves are rejected") {
    auto m = move(Type::Electric, 0, MoveCategory::Status);
    CHECK_THROWS_AS(compute_damage(dex(), battler("Jolteon", 1, 1), battler("Gyarados", 1, 1), m, {}),
                    NotADamagingMove);
  }
  SUBCASE("weather and crit order") {
    const auto a = battler("Suicune", 100, 1);
    const auto d = battler("Snorlax", 1, 100);
    const int plain = compute_damage(dex(), a, d, move(Type::Water, 100), {}).damage;
    const int rain = compute_damage(dex(), a, d, move(Type::Water, 100), {Weather::Rain, false, 100}).damage;
    const int sun = compute_damage(dex(), a, d, move(Type::Water, 100), {Weather::Sun, false, 100}).damage;
    const int crit = compute_damage(dex(), a, d, move(Type::Water, 100), {Weather::None, true, 100}).damage;
    CHECK(rain == plain * 3 / 2);
    CHECK(sun == plain / 2);
    CHECK(crit == plain * 2);
  }
  SUBCASE("burn halves physical attack only") {
    auto a = battler("Snorlax", 150, 1);
    const auto d = battler("Blissey", 1, 100);
    const int healthy = compute_damage(dex(), a, d, move(Type::Normal, 80, MoveCategory::Physical), {}).damage;
    const int special = compute_damage(dex(), a, d, move(Type::Normal, 80), {}).damage;
    a.status = StatusKind::Burn;
    CHECK(compute_damage(dex(), a, d, move(Type::Normal, 80, MoveCategory::Physical), {}).damage < healthy);
    CHECK(compute_damage(dex(), a, d, move(Type::Normal, 80), {}).damage == special);
  }
}

TEST_CASE("damage is monotone in power and attack, antitone in defense") {
  for (int roll : {85, 93, 100}) {
    for (bool crit : {false, true}) {
      DamageContext ctx{Weather::None, crit, roll};
      int prev = 0;
      for (int power = 1; power <= 150; power += 7) {
        const int d = compute_damage(dex(), battler("Zapdos", 120, 1), battler("Snorlax", 1, 90),
                                     move(Type::Electric, power), ctx).damage;
        CHECK(d >= prev);
        prev = d;
      }
      prev = 0;
      for (int atk = 6; atk <= 260; atk += 11) {
        const int d = compute_damage(dex(), battler("Zapdos", atk, 1), battler("Snorlax", 1, 90),
                                     move(Type::Electric, 90), ctx).damage;
        CHECK(d >= prev);
        prev = d;
      }
      prev = 1 << 30;
      for (int def = 6; def <= 260; def += 11) {
        const int d = compute_damage(dex(), battler("Zapdos", 120, 1), battler("Snorlax", 1, def),
                                     move(Type::Electric, 90), ctx).damage;
        CHECK(d <= prev);
        prev = d;
      }
    }
  }
}

TEST_CASE("legal actions") {
  auto s = fresh();
  SUBCASE("fresh battle has 4 attacks and 5 switches in canonical order") {
    const auto legal = legal_actions(s, Side::A);
    REQUIRE(legal.size() == 9);
    CHECK(std::is_sorted(legal.begin(), legal.end()));
    CHECK(legal.front() == Action::attack(0));
    CHECK(legal.back() == Action::switch_to(5));
  }
  SUBCASE("forced replacement offers only switches") {
    auto& team = s.side(Side::A).team;
    team[0].current_hp = 0;
    for (std::size_t i = 1; i < 4; ++i) team[i].current_hp = 0;
    const auto legal = legal_actions(s, Side::A);
    CHECK(legal == std::vector<Action>{Action::switch_to(4), Action::switch_to(5)});
  }
  SUBCASE("last battler standing can only attack") {
    for (std::size_t i = 1; i < 6; ++i) s.side(Side::B).team[i].current_hp = 0;
    CHECK(legal_actions(s, Side::B).size() == 4);
  }
  SUBCASE("ended battle") {
    s.winner = Side::A;
    CHECK_THROWS_AS(legal_actions(s, Side::A), BattleAlreadyEnded);
    CHECK_THROWS_AS(resolve_turn(dex(), s, Action::attack(0), Action::attack(0)), BattleAlreadyEnded);
  }
  SUBCASE("illegal action is a harness error") {
    CHECK_THROWS_AS(resolve_turn(dex(), s, Action::switch_to(0), Action::attack(0)), IllegalAction);
    CHECK_THROWS_AS(resolve_turn(dex(), s, Action::attack(0), Action::attack(4)), IllegalAction);
  }
}

TEST_CASE("both sides switching resolves without damage") {
  const auto s = fresh();
  const auto r = resolve_turn(dex(), s, Action::switch_to(1), Action::switch_to(3));
  CHECK(r.state.turn == s.turn + 1);
  const auto switches = std::count_if(r.events.begin(), r.events.end(),
                                      [](const Event& e) { return e.kind == EventKind::SwitchIn; });
  CHECK(switches == 2);
  CHECK(std::none_of(r.events.begin(), r.events.end(), [](const Event& e) { return e.kind == EventKind::Damage; }));
  CHECK(r.state.side(Side::A).active == 1);
  CHECK(r.state.side(Side::B).active == 3);
  CHECK(r.state.side(Side::B).revealed.test(3));
}

TEST_CASE("priority beats speed, speed orders the rest") {
  const std::size_t quick = slot_of(species("Jolteon"), "Quick Attack");
  const std::size_t bolt = slot_of(species("Jolteon"), "Thunderbolt");
  auto first_mover = [](const TurnResult& r) {
    const auto it = std::find_if(r.events.begin(), r.events.end(),
                                 [](const Event& e) { return e.kind == EventKind::MoveUsed; });
    REQUIRE(it != r.events.end());
    return it->side;
  };
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto s = fresh(seed, {"Snorlax", "Swampert", "Metagross", "Gengar", "Salamence", "Blissey"},
                   {"Jolteon", "Tyranitar", "Skarmory", "Zapdos", "Celebi", "Gyarados"});
    s.side(Side::B).active_battler().stats.spe = 1;
    CHECK(first_mover(resolve_turn(dex(), s, Action::attack(0), Action::attack(quick))) == Side::B);
    CHECK(first_mover(resolve_turn(dex(), s, Action::attack(0), Action::attack(bolt))) == Side::A);
  }
}

TEST_CASE("resolve_turn is a pure function of state and actions") {
  const auto s = fresh(99);
  const auto r1 = resolve_turn(dex(), s, Action::attack(1), Action::attack(0));
  const auto r2 = resolve_turn(dex(), s, Action::attack(1), Action::attack(0));
  CHECK(to_json(dex(), r1.state).dump() == to_json(dex(), r2.state).dump());
  CHECK(to_json(r1.events).dump() == to_json(r2.events).dump());
  CHECK(r1.state == r2.state);
}

TEST_CASE("view hides the opponent's bench and floors HP percent") {
  auto s = fresh();
  auto& opp = s.side(Side::B).active_battler();
  opp.max_hp = 160;
  opp.current_hp = 72;
  const auto v = view_for(s, Side::A);
  CHECK(v.opponent.hp_percent == 45);
  CHECK(v.opponent.revealed.size() == 1);
  CHECK(v.opponent.revealed[0] == species("Gyarados"));
  CHECK(v.team.size() == 6);
  CHECK(v.team[0].active);
}

TEST_CASE("auto-weather starts on switch-in and stays") {
  auto s = fresh(3, kTeamA, {"Tyranitar", "Gyarados", "Skarmory", "Zapdos", "Celebi", "Snorlax"});
  CHECK(s.weather.kind == Weather::Sand);
  CHECK_FALSE(s.weather.turns_left.has_value());
  const auto r = resolve_turn(dex(), s, Action::switch_to(1), Action::switch_to(2));
  CHECK(r.state.weather.kind == Weather::Sand);
  // Swampert is Water/Ground and takes no sand damage; Skarmory is Steel.
  CHECK(std::none_of(r.events.begin(), r.events.end(),
                     [](const Event& e) { return e.kind == EventKind::WeatherDamage; }));
  const auto r2 = resolve_turn(dex(), r.state, Action::switch_to(0), Action::switch_to(3));
  const auto sand_hits = std::count_if(r2.events.begin(), r2.events.end(),
                                       [](const Event& e) { return e.kind == EventKind::WeatherDamage; });
  CHECK(sand_hits == 2);  // Jolteon and Zapdos
  const auto& j = r2.state.side(Side::A).team[0];
  CHECK(j.max_hp - j.current_hp == j.max_hp / 16);
}

TEST_CASE("status gates") {
  SUBCASE("sleep skips and counts down, then wakes") {
    auto s = fresh(5);
    s.side(Side::A).active_battler().status = StatusKind::Sleep;
    s.side(Side::A).active_battler().sleep_turns = 1;
    auto r = resolve_turn(dex(), s, Action::attack(1), Action::switch_to(1));
    CHECK(std::any_of(r.events.begin(), r.events.end(),
                      [](const Event& e) { return e.kind == EventKind::CantMove && e.detail == "asleep"; }));
    CHECK(r.state.side(Side::A).active_battler().sleep_turns == 0);
    r = resolve_turn(dex(), r.state, Action::attack(1), Action::switch_to(0));
    CHECK(std::any_of(r.events.begin(), r.events.end(),
                      [](const Event& e) { return e.kind == EventKind::StatusCured; }));
    CHECK(std::any_of(r.events.begin(), r.events.end(),
                      [](const Event& e) { return e.kind == EventKind::MoveUsed && e.side == Side::A; }));
  }
  SUBCASE("burn and poison chip an eighth") {
    // Both actives already have a status, so the status moves do nothing.
    auto s = fresh(5);
    s.side(Side::A).active_battler().status = StatusKind::Burn;
    s.side(Side::B).active_battler().status = StatusKind::Poison;
    const std::size_t a_wave = slot_of(species("Jolteon"), "Thunder Wave");
    const std::size_t b_wave = slot_of(species("Gyarados"), "Thunder Wave");
    const auto r = resolve_turn(dex(), s, Action::attack(a_wave), Action::attack(b_wave));
    const auto& a = r.state.side(Side::A).team[0];
    const auto& b = r.state.side(Side::B).team[0];
    CHECK(a.max_hp - a.current_hp == a.max_hp / 8);
    CHECK(b.max_hp - b.current_hp == b.max_hp / 8);
  }
  SUBCASE("paralysis quarters speed") {
    auto b = compute_stats(dex(), species("Jolteon"));
    const int full = effective_speed(b);
    b.status = StatusKind::Paralysis;
    CHECK(effective_speed(b) == full / 4);
  }
}

TEST_CASE("status move on a statused target has no effect") {
  auto s = fresh(8);
  s.side(Side::B).active_battler().status = StatusKind::Burn;
  const std::size_t twave = slot_of(species("Jolteon"), "Thunder Wave");
  int no_effect = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    s.rng = Rng(seed);
    const auto r = resolve_turn(dex(), s, Action::attack(twave), Action::attack(0));
    for (const auto& e : r.events) {
      CHECK_FALSE((e.kind == EventKind::StatusInflicted && e.side == Side::B));
      no_effect += e.kind == EventKind::NoEffect;
    }
  }
  CHECK(no_effect > 0);
}

TEST_CASE("simultaneous wipe goes to the side that fainted later") {
  auto s = fresh(11, {"Jolteon", "Swampert", "Metagross", "Gengar", "Salamence", "Blissey"},
                 {"Jolteon", "Tyranitar", "Skarmory", "Zapdos", "Celebi", "Snorlax"});
  for (Side side : kSides) {
    auto& st = s.side(side);
    for (std::size_t i = 1; i < 6; ++i) st.team[i].current_hp = 0;
    st.team[0].current_hp = 1;
    st.team[0].status = StatusKind::Burn;
  }
  const std::size_t twave = slot_of(species("Jolteon"), "Thunder Wave");
  const auto r = resolve_turn(dex(), s, Action::attack(twave), Action::attack(twave));
  REQUIRE(r.state.ended());
  // End-of-turn burn resolves side A before side B, so B's faint is later.
  CHECK(r.state.winner == Side::B);
  CHECK(r.state.end_reason == EndReason::AllFainted);
}

TEST_CASE("turn cap tie-break uses remaining HP fraction") {
  auto s = fresh(12);
  s.turn_cap = 1;
  for (auto& b : s.side(Side::A).team) b.current_hp = b.max_hp * 40 / 100;
  for (auto& b : s.side(Side::B).team) b.current_hp = b.max_hp * 10 / 100;
  const auto r = resolve_turn(dex(), s, Action::switch_to(1), Action::switch_to(1));
  REQUIRE(r.state.ended());
  CHECK(r.state.end_reason == EndReason::TurnCapTieBreak);
  CHECK(r.state.winner == Side::A);
}

TEST_CASE("forfeit ends the battle for the other side") {
  const auto s = fresh();
  const auto r = forfeit(s, Side::A);
  CHECK(r.state.winner == Side::B);
  CHECK(r.state.end_reason == EndReason::Forfeit);
  REQUIRE(r.events.size() == 1);
  CHECK(r.events[0].kind == EventKind::BattleEnded);
}

TEST_CASE("random play conserves HP and keeps invariants") {
  int turns = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto state = fresh(seed);
    Rng chooser(seed * 7919);
    std::array<std::array<long long, 6>, 2> damage{};
    while (!state.ended()) {
      const auto la = legal_actions(state, Side::A);
      const auto lb = legal_actions(state, Side::B);
      REQUIRE_FALSE(la.empty());
      REQUIRE_FALSE(lb.empty());
      const auto r = resolve_turn(dex(), state, la[chooser.below(la.size())], lb[chooser.below(lb.size())]);
      for (const auto& e : r.events)
        if (e.kind == EventKind::Damage || e.kind == EventKind::StatusDamage || e.kind == EventKind::WeatherDamage)
          damage[index(e.side)][e.slot] += e.amount;
      for (Side side : kSides)
        for (const auto& b : r.state.side(side).team) {
          CHECK(b.current_hp >= 0);
          CHECK(b.current_hp <= b.max_hp);
        }
      CHECK(r.state.turn == state.turn + 1);
      state = r.state;
      ++turns;
    }
    for (Side side : kSides)
      for (std::size_t i = 0; i < 6; ++i) {
        const auto& b = state.side(side).team[i];
        CHECK(damage[index(side)][i] == b.max_hp - b.current_hp);
      }
  }
  CHECK(turns > 0);
}
