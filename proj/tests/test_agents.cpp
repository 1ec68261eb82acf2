#include <doctest.h>

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "pokeleague/agents.hpp"
#include "support.hpp"

using namespace pokeleague;
using testing_support::dex;
using testing_support::species;
using testing_support::team_of;

namespace {

// Independent statement of the greedy draft: walk species from highest base
// stat total down (lower index first on ties) and keep the first six with a
// primary type not seen yet.
std::vector<std::size_t> reference_greedy(const PoolView& pool) {
  std::vector<std::pair<int, std::size_t>> ranked;
  for (std::size_t i = 0; i < pool.species.size(); ++i)
    ranked.emplace_back(-dex().species(pool.species[i]).base.total(), i);
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::size_t> out;
  std::set<Type> seen;
  for (const auto& [neg_total, i] : ranked) {
    const Type primary = dex().species(pool.species[i]).types[0];
    if (seen.count(primary)) continue;
    seen.insert(primary);
    out.push_back(i);
    if (out.size() == 6) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

BattleState battle(std::vector<std::string> a, std::vector<std::string> b, std::uint64_t seed = 1) {
  return start_battle(dex(), {team_of(a), team_of(b)}, seed).state;
}

const std::vector<std::string> kA = {"Jolteon", "Swampert", "Metagross", "Gengar", "Salamence", "Blissey"};
const std::vector<std::string> kB = {"Gyarados", "Tyranitar", "Skarmory", "Zapdos", "Celebi", "Snorlax"};

}  // namespace

TEST_CASE("greedy draft matches the reference procedure") {
  const auto pool = default_pool(dex());
  const auto pick = greedy_team(pool);
  const auto expected = reference_greedy(pool);
  REQUIRE(expected.size() == 6);
  CHECK(std::vector<std::size_t>(pick.indices.begin(), pick.indices.end()) == expected);

  std::set<Type> primaries;
  for (auto i : pick.indices) primaries.insert(dex().species(pool.species[i]).types[0]);
  CHECK(primaries.size() == 6);
}

TEST_CASE("a pool of exactly six is taken whole") {
  PoolView pool = default_pool(dex());
  pool.species.resize(6);
  GreedyAgent g("g", dex());
  RandomAgent r("r", dex(), 3);
  for (Agent* a : std::initializer_list<Agent*>{&g, &r}) {
    auto t = a->select_team(pool).team().indices;
    std::sort(t.begin(), t.end());
    CHECK(t == std::array<std::size_t, 6>{0, 1, 2, 3, 4, 5});
  }
}

TEST_CASE("random agent is a pure function of seed and inputs") {
  const auto pool = default_pool(dex());
  RandomAgent a("r", dex(), 7), b("r", dex(), 7), c("r", dex(), 8);
  const auto t1 = a.select_team(pool).team();
  CHECK(t1 == a.select_team(pool).team());
  CHECK(t1 == b.select_team(pool).team());
  const std::set<std::size_t> distinct(t1.indices.begin(), t1.indices.end());
  CHECK(distinct.size() == 6);
  CHECK(*distinct.rbegin() < pool.species.size());

  const auto s = battle(kA, kB);
  const auto view = view_for(s, Side::A);
  const auto legal = legal_actions(s, Side::A);
  const auto act = a.choose_action(view, legal).action();
  for (int i = 0; i < 5; ++i) CHECK(a.choose_action(view, legal).action() == act);
  CHECK(b.choose_action(view, legal).action() == act);

  // different agent seeds should not agree on every view
  int differ = 0;
  for (int turn = 1; turn <= 20; ++turn) {
    auto v = view;
    v.turn = turn;
    differ += a.choose_action(v, legal).action() != c.choose_action(v, legal).action();
  }
  CHECK(differ > 0);
}

TEST_CASE("random agent with a single legal action takes it") {
  auto s = battle(kA, kB);
  auto& team = s.side(Side::A).team;
  for (std::size_t i = 0; i < 5; ++i) team[i].current_hp = 0;
  const auto legal = legal_actions(s, Side::A);
  REQUIRE(legal.size() == 1);
  RandomAgent r("r", dex(), 1);
  CHECK(r.choose_action(view_for(s, Side::A), legal).action() == Action::switch_to(5));
}

TEST_CASE("greedy picks Thunderbolt for Jolteon against Gyarados") {
  const auto s = battle(kA, kB);
  GreedyAgent g("g", dex());
  const auto legal = legal_actions(s, Side::A);
  CHECK(g.choose_action(view_for(s, Side::A), legal).action() == Action::attack(1));
}

TEST_CASE("greedy attack is the argmax of expected damage") {
  GreedyAgent g("g", dex());
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto s = battle(kA, kB, seed);
    Rng r(seed);
    // wander a few random turns so the position varies
    for (int t = 0; t < 6 && !s.ended(); ++t) {
      const auto la = legal_actions(s, Side::A);
      const auto lb = legal_actions(s, Side::B);
      s = resolve_turn(dex(), s, la[r.below(la.size())], lb[r.below(lb.size())]).state;
    }
    if (s.ended() || s.side(Side::A).needs_replacement()) continue;
    const auto legal = legal_actions(s, Side::A);
    const auto chosen = g.choose_action(view_for(s, Side::A), legal).action();
    const auto& atk = s.side(Side::A).active_battler();
    const auto& def = s.side(Side::B).active_battler();
    int best = 0;
    for (const auto& a : legal)
      if (a.is_attack()) best = std::max(best, expected_damage(dex(), atk, def, a.index, s.weather.kind));
    if (best > 0) {
      REQUIRE(chosen.is_attack());
      CHECK(expected_damage(dex(), atk, def, chosen.index, s.weather.kind) == best);
    }
  }
}

TEST_CASE("greedy switches when nothing can hurt the opponent") {
  // An all-Electric Jolteon facing Groudon has no damaging option.
  auto j = nlohmann::json::parse(testing_support::read_file(default_dex_path()));
  for (auto& sp : j["species"])
    if (sp["name"] == "Jolteon") sp["moves"] = {"Thunderbolt", "Thunder", "Thunder Wave", "Thunder Punch"};
  const Dex local = parse_dex(j.dump());
  auto ids = [&](std::vector<std::string> names) {
    Team t{};
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = *local.find_species(names[i]);
    return t;
  };
  const auto s = start_battle(local,
                              {ids({"Jolteon", "Metagross", "Swampert", "Gengar", "Salamence", "Blissey"}),
                               ids({"Groudon", "Tyranitar", "Skarmory", "Zapdos", "Celebi", "Snorlax"})},
                              1)
                     .state;
  GreedyAgent g("g", local);
  const auto legal = legal_actions(s, Side::A);
  const auto& atk = s.side(Side::A).active_battler();
  const auto& def = s.side(Side::B).active_battler();
  for (std::size_t m = 0; m < 4; ++m) REQUIRE(expected_damage(local, atk, def, m, s.weather.kind) == 0);

  const auto chosen = g.choose_action(view_for(s, Side::A), legal).action();
  REQUIRE(chosen.is_switch());
  // Swampert (slot 2) and Blissey (slot 5) both reach 2x with Ice Beam / Surf.
  CHECK(best_multiplier(local, s.side(Side::A).team[chosen.index].species, def.species) == 2.0);
  CHECK(chosen.index == 2);
}

TEST_CASE("every agent returns legal actions over whole battles") {
  GreedyAgent g("g", dex());
  RandomAgent r("r", dex(), 5);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto s = battle(kA, kB, seed);
    while (!s.ended()) {
      const auto la = legal_actions(s, Side::A);
      const auto lb = legal_actions(s, Side::B);
      const auto a = g.choose_action(view_for(s, Side::A), la).action();
      const auto b = r.choose_action(view_for(s, Side::B), lb).action();
      REQUIRE(std::find(la.begin(), la.end(), a) != la.end());
      REQUIRE(std::find(lb.begin(), lb.end(), b) != lb.end());
      s = resolve_turn(dex(), s, a, b).state;
    }
  }
}

TEST_CASE("fallbacks") {
  CHECK(fallback_team().indices == std::array<std::size_t, 6>{0, 1, 2, 3, 4, 5});
  const std::vector<Action> legal = {Action::switch_to(2), Action::attack(3), Action::switch_to(1)};
  CHECK(fallback_action(legal) == Action::attack(3));
}
