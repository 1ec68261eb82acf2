// Acceptance gate: runs every end-to-end criterion and prints one PASS/FAIL
// line per criterion. Exit status is non-zero if any criterion fails.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pokeleague/agents.hpp"
#include "pokeleague/analytics.hpp"
#include "pokeleague/league.hpp"
#include "pokeleague/llm_gateway.hpp"
#include "pokeleague/serialize.hpp"
#include "pokeleague/storage.hpp"
#include "support.hpp"

using namespace pokeleague;
using testing_support::dex;
using json = nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

// ---------------------------------------------------------------------------

Outcome type_chart() {
  std::istringstream in(testing_support::read_file(testing_support::data_dir() / "type_chart_oracle.txt"));
  int cells = 0, wrong = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name;
    ls >> name;
    const auto atk = parse_type(name);
    if (!atk) return fail("oracle row " + name + " is not a type");
    for (std::size_t col = 0; col < kTypeCount; ++col) {
      std::string code;
      ls >> code;
      const double expected = code == "+" ? 2.0 : code == "-" ? 0.5 : code == "0" ? 0.0 : 1.0;
      const Type def[] = {static_cast<Type>(col)};
      ++cells;
      wrong += type_multiplier(dex().chart(), *atk, def) != expected;
    }
  }
  const auto& chart = dex().chart();
  const Type water_flying[] = {Type::Water, Type::Flying};
  const Type ghost[] = {Type::Ghost};
  const Type ground[] = {Type::Ground};
  const bool spots = type_multiplier(chart, Type::Electric, water_flying) == 4.0 &&
                     type_multiplier(chart, Type::Normal, ghost) == 0.0 &&
                     type_multiplier(chart, Type::Electric, ground) == 0.0;
  std::ostringstream d;
  d << cells << " cells, " << wrong << " mismatched, spot checks " << (spots ? "ok" : "wrong");
  return {cells == 324 && wrong == 0 && spots, d.str()};
}

Outcome damage_example() {
  auto atk = compute_stats(dex(), testing_support::species("Jolteon"));
  auto def = compute_stats(dex(), testing_support::species("Suicune"));
  atk.stats.spa = 120;
  def.stats.spd = 80;
  const auto& tb = dex().move(*dex().find_move("Thunderbolt"));
  const auto r = compute_damage(dex(), atk, def, tb, DamageContext{Weather::None, false, 100});
  std::ostringstream d;
  d << "power " << tb.power << ", stab " << r.stab << ", effectiveness " << r.effectiveness << " -> " << r.damage;
  return {tb.power == 95 && r.stab && r.effectiveness == 2.0 && r.damage == 192, d.str()};
}

void strip_clock(json& j) {
  if (j.is_object()) {
    j.erase("timestamp_ms");
    j.erase("latency_ms");
    for (auto& [k, v] : j.items()) strip_clock(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_clock(v);
  }
}

std::vector<json> normalized(const std::filesystem::path& p) {
  auto records = read_log(p);
  for (auto& r : records) strip_clock(r);
  return records;
}

// Greedy decisions from the determinism corpus, reused by the metric criterion.
std::vector<DecisionAnalysis> g_greedy_decisions;

Outcome determinism(const std::filesystem::path& work) {
  LeagueConfig first, second;
  first.output_dir = work / "first";
  second.output_dir = work / "second";
  first.tournament_id = second.tournament_id = "determinism";
  int replayed = 0, diverged = 0;
  long long turns = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const auto id = "seed-" + std::to_string(seed);
    std::array<MatchResult, 2> results;
    for (int pass = 0; pass < 2; ++pass) {
      GreedyAgent g("greedy", dex());
      RandomAgent r("random", dex(), derive_seed(seed, "random"));
      MatchContext ctx{&dex(), pass == 0 ? &first : &second, id, default_pool(dex())};
      results[pass] = run_match(ctx, g, r, seed);
    }
    const auto& log = results[0].logs.at(0);
    const auto records = read_log(log);
    try {
      const auto rep = replay(records, dex());
      replayed += rep.winner == results[0].winner;
    } catch (const StorageError& e) {
      return fail(id + ": " + e.what());
    }
    if (to_json(dex(), results[0]).dump() != to_json(dex(), results[1]).dump() ||
        normalized(log) != normalized(results[1].logs.at(0)))
      ++diverged;
    turns += results[0].turns;
    for (const auto& row : summarize_log(records).decisions)
      if (row.agent_id == "greedy" && row.analysis) g_greedy_decisions.push_back(*row.analysis);
  }
  std::ostringstream d;
  d << replayed << "/1000 replays matched, " << diverged << " re-runs diverged, " << turns << " turns";
  return {replayed == 1000 && diverged == 0, d.str()};
}

Outcome bracket() {
  std::vector<Entrant> entrants;
  for (int i = 0; i < 8; ++i) {
    Entrant e;
    e.id = (i % 2 ? "random-" : "greedy-") + std::to_string(i);
    e.agent = make_scripted_agent(i % 2 ? "random" : "greedy", e.id, dex(), derive_seed(17, e.id));
    entrants.push_back(std::move(e));
  }
  LeagueConfig config;
  config.write_logs = false;
  const auto r = run_tournament(entrants, dex(), config, 17);
  int champions = 0, quarter_ok = 0, quarters = 0;
  for (const auto& s : r.standings) {
    if (s.placement == "Champion") champions += s.wins == 3 && s.losses == 0;
    if (s.placement == "Quarter-finalist") {
      ++quarters;
      quarter_ok += s.wins == 0 && s.losses == 1;
    }
  }
  const auto table = render_standings(r);
  std::ostringstream d;
  d << r.match_count() << " matches, champion " << r.champion << " 3-0, " << quarter_ok << "/" << quarters
    << " quarter-finalists 0-1";
  return {r.match_count() == 7 && champions == 1 && quarters == 4 && quarter_ok == 4 &&
              table.find("Champion") != std::string::npos,
          d.str()};
}

Outcome protocol() {
  const std::vector<Action> legal = {Action::attack(0), Action::attack(1), Action::attack(2), Action::attack(3),
                                     Action::switch_to(1)};
  const auto team = parse_team_response(testing_support::kSampleTeamResponse, 30);
  if (!std::holds_alternative<ParsedTeam>(team)) return fail("published team JSON did not parse");
  if (std::get<ParsedTeam>(team).team.indices != std::array<std::size_t, 6>{0, 3, 5, 8, 11, 14})
    return fail("published team JSON parsed to the wrong indices");
  const auto& raw = testing_support::kSampleActionResponse;
  int ok = 0;
  for (const std::string& text : {raw, "```json\n" + raw + "\n```", "My move this turn:\n" + raw + "\nThat is all."}) {
    const auto act = parse_action_response(text, legal);
    ok += std::holds_alternative<ParsedAction>(act) && std::get<ParsedAction>(act).action == Action::attack(1);
  }
  return {ok == 3, "team {0,3,5,8,11,14}; attack move_index 1 in " + std::to_string(ok) + "/3 wrappings"};
}

Outcome metrics() {
  const auto records = read_log(testing_support::data_dir() / "ten_attacks.jsonl");
  std::vector<DecisionAnalysis> ten;
  for (const auto& row : summarize_log(records).decisions)
    if (row.analysis) ten.push_back(*row.analysis);
  const auto fixture = move_efficiency(ten);
  if (g_greedy_decisions.empty()) return fail("no greedy decisions collected");
  const auto greedy = move_efficiency(g_greedy_decisions);
  const auto freq = pick_frequency(testing_support::published_teams());
  std::ostringstream d;
  d << "fixture effective " << fixture.effective_move_rate << ", greedy optimal " << greedy.optimal_move_rate
    << " over " << greedy.attacks << " attacks, Metagross " << freq.at("Metagross") << ", Swampert "
    << freq.at("Swampert");
  return {ten.size() == 10 && fixture.effective_move_rate == 0.7 && greedy.optimal_move_rate == 1.0 &&
              freq.at("Metagross") == 5 && freq.at("Swampert") == 7,
          d.str()};
}

Outcome baseline_separation() {
  LeagueConfig config;
  config.write_logs = false;
  const auto pool = default_pool(dex());
  int greedy_wins = 0;
  constexpr int kMatches = 400;
  for (int i = 1; i <= kMatches; ++i) {
    const auto seed = static_cast<std::uint64_t>(i);
    // same six species on both sides, drawn from the pool per seed
    std::vector<std::size_t> idx(pool.species.size());
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(derive_seed(seed, "mirror-team"));
    for (std::size_t k = idx.size(); k > 1; --k) std::swap(idx[k - 1], idx[rng.below(k)]);
    Team team{};
    for (std::size_t k = 0; k < kTeamSize; ++k) team[k] = pool.species[idx[k]];

    GreedyAgent g("greedy", dex());
    RandomAgent r("random", dex(), derive_seed(seed, "random"));
    const bool greedy_a = i % 2 == 1;
    MatchContext ctx{&dex(), &config, "mirror-" + std::to_string(i), pool};
    const auto res = play_battle(ctx, greedy_a ? std::array<Agent*, 2>{&g, &r} : std::array<Agent*, 2>{&r, &g},
                                 {team, team}, seed, std::nullopt);
    greedy_wins += (res.winner == Side::A) == greedy_a;
  }
  const double rate = static_cast<double>(greedy_wins) / kMatches;
  std::ostringstream d;
  d << "greedy won " << greedy_wins << "/" << kMatches << " (" << std::fixed << std::setprecision(1) << rate * 100
    << "%, threshold 60%)";
  return {rate >= 0.6, d.str()};
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

Outcome offline_tournament(const std::filesystem::path& work) {
  auto spec = load_tournament_spec(std::filesystem::path(POKELEAGUE_CONFIG_DIR) / "mock_tournament.json");
  spec.league.output_dir = work / "mock";
  auto entrants = make_entrants(spec, dex());
  for (const auto& e : entrants)
    if (e.profile.value("provider", std::string()).rfind("mock:", 0) != 0) return fail(e.id + " is not a mock agent");
  const auto r = run_tournament(entrants, dex(), spec.league, spec.master_seed);
  write_tournament_outputs(dex(), r, spec.league);
  const auto dir = tournament_dir(spec.league);
  const auto standings = testing_support::read_file(dir / "standings.txt");
  if (standings.find("Champion") == std::string::npos) return fail("standings table has no champion");

  std::size_t logs = 0;
  for (const auto& p : find_logs(dir)) {
    replay(p, dex());
    ++logs;
  }
  const auto report = build_report(load_log_dir(dir));
  bool rates_ok = true;
  for (const auto& a : report.agents) {
    rates_ok &= in_unit(a.win_rate) && in_unit(a.switches.switch_rate) && in_unit(a.team_diversity);
    if (a.efficiency) rates_ok &= in_unit(a.efficiency->effective_move_rate) && in_unit(a.efficiency->optimal_move_rate);
    for (const auto& [name, n] : a.pick_frequency) rates_ok &= n <= a.matches;
  }
  std::ostringstream d;
  d << r.match_count() << " matches, " << logs << " logs replayed, champion " << r.champion << ", "
    << report.agents.size() << " agents in report";
  return {r.match_count() == 7 && logs == 7 && report.agents.size() == 8 && rates_ok, d.str()};
}

Outcome engine_properties() {
  const auto pool = default_pool(dex());
  long long turns = 0;
  int battles = 0;
  std::string violation;
  for (std::uint64_t seed = 1; turns < 10000; ++seed) {
    Rng pick(derive_seed(seed, "property"));
    std::array<Team, 2> teams{};
    for (auto& t : teams)
      for (auto& s : t) s = pool.species[pick.below(pool.species.size())];
    auto state = start_battle(dex(), teams, seed).state;
    std::array<std::array<long long, kTeamSize>, 2> damage{};
    ++battles;
    while (!state.ended()) {
      const auto la = legal_actions(state, Side::A);
      const auto lb = legal_actions(state, Side::B);
      if (la.empty() || lb.empty()) return fail("empty legal set at seed " + std::to_string(seed));
      const auto r = resolve_turn(dex(), state, la[pick.below(la.size())], lb[pick.below(lb.size())]);
      for (const auto& e : r.events)
        if (e.kind == EventKind::Damage || e.kind == EventKind::StatusDamage || e.kind == EventKind::WeatherDamage)
          damage[index(e.side)][e.slot] += e.amount;
      for (Side s : kSides)
        for (const auto& b : r.state.side(s).team)
          if (b.current_hp < 0 || b.current_hp > b.max_hp) return fail("HP out of range at seed " + std::to_string(seed));
      state = r.state;
      ++turns;
    }
    for (Side s : kSides)
      for (std::size_t i = 0; i < kTeamSize; ++i) {
        const auto& b = state.side(s).team[i];
        if (damage[index(s)][i] != b.max_hp - b.current_hp)
          return fail("HP loss does not match damage events at seed " + std::to_string(seed));
      }
  }
  return {true, std::to_string(turns) + " turns over " + std::to_string(battles) + " battles"};
}

}  // namespace

int main() {
  testing_support::TempDir work("pokeleague-acceptance");
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"type chart oracle", type_chart},
      {"damage worked example", damage_example},
      {"determinism and replay", [&] { return determinism(work.path()); }},
      {"bracket invariants", bracket},
      {"protocol golden parses", protocol},
      {"metric fixtures", metrics},
      {"baseline separation", baseline_separation},
      {"offline end-to-end", [&] { return offline_tournament(work.path()); }},
      {"engine properties", engine_properties},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].name << " [" << std::fixed
              << std::setprecision(2) << secs << " s] " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
