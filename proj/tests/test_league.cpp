#include <doctest.h>

#include <map>

#include <nlohmann/json.hpp>

#include "pokeleague/analytics.hpp"
#include "pokeleague/league.hpp"
#include "pokeleague/llm_gateway.hpp"
#include "pokeleague/storage.hpp"
#include "support.hpp"

using namespace pokeleague;
using testing_support::dex;
using json = nlohmann::json;

namespace {

const std::filesystem::path kConfigs = POKELEAGUE_CONFIG_DIR;

std::vector<Entrant> scripted(std::size_t n, std::uint64_t seed = 1) {
  std::vector<Entrant> out;
  for (std::size_t i = 0; i < n; ++i) {
    Entrant e;
    e.id = (i % 4 == 0 ? "greedy-" : "random-") + std::to_string(i);
    e.agent = make_scripted_agent(i % 4 == 0 ? "greedy" : "random", e.id, dex(), derive_seed(seed, e.id));
    out.push_back(std::move(e));
  }
  return out;
}

LeagueConfig quiet_config() {
  LeagueConfig c;
  c.write_logs = false;
  return c;
}

// Always fails to decide.
class BrokenAgent final : public Agent {
 public:
  explicit BrokenAgent(std::string id) : id_(std::move(id)) {}
  const std::string& id() const override { return id_; }
  AgentDecision select_team(const PoolView&) override { throw AgentFailure("no answer", {}, {"no answer"}); }
  AgentDecision choose_action(const BattleView&, std::span<const Action>) override {
    throw AgentFailure("no answer", {}, {"no answer"});
  }

 private:
  std::string id_;
};

}  // namespace

TEST_CASE("eight entrants: seven matches and the published standings shape") {
  auto entrants = scripted(8);
  const auto config = quiet_config();
  const auto r = run_tournament(entrants, dex(), config, 42);
  CHECK(r.match_count() == 7);
  REQUIRE(r.rounds.size() == 3);
  CHECK(r.rounds[0].size() == 4);
  CHECK(r.rounds[1].size() == 2);
  CHECK(r.rounds[2].size() == 1);

  REQUIRE(r.standings.size() == 8);
  const auto& champ = r.standings[0];
  CHECK(champ.agent_id == r.champion);
  CHECK(champ.wins == 3);
  CHECK(champ.losses == 0);
  CHECK(champ.placement == "Champion");
  CHECK(r.standings[1].placement == "Runner-up");
  CHECK(r.standings[1].wins == 2);
  CHECK(r.standings[1].losses == 1);
  int semis = 0, quarters = 0;
  for (const auto& s : r.standings) {
    if (s.placement == "Semi-finalist") {
      ++semis;
      CHECK(s.wins == 1);
      CHECK(s.losses == 1);
    }
    if (s.placement == "Quarter-finalist") {
      ++quarters;
      CHECK(s.wins == 0);
      CHECK(s.losses == 1);
    }
  }
  CHECK(semis == 2);
  CHECK(quarters == 4);

  const auto table = render_standings(r);
  CHECK(table.find("Model") != std::string::npos);
  CHECK(table.find("3-0") != std::string::npos);
  CHECK(table.find("Champion") != std::string::npos);
}

TEST_CASE("bracket pairs winners in order") {
  auto entrants = scripted(8);
  const auto r = run_tournament(entrants, dex(), quiet_config(), 42);
  for (std::size_t round = 1; round < r.rounds.size(); ++round)
    for (std::size_t m = 0; m < r.rounds[round].size(); ++m) {
      const auto& match = r.rounds[round][m];
      CHECK(match.agents[0] == r.rounds[round - 1][2 * m].winner_id);
      CHECK(match.agents[1] == r.rounds[round - 1][2 * m + 1].winner_id);
    }
  CHECK(r.rounds[0][2].match_id == "R1-M3");
}

TEST_CASE("two entrants play a single final") {
  auto entrants = scripted(2);
  const auto r = run_tournament(entrants, dex(), quiet_config(), 1);
  CHECK(r.match_count() == 1);
  CHECK(r.standings[0].placement == "Champion");
  CHECK(r.standings[1].placement == "Runner-up");
}

TEST_CASE("bad brackets are configuration errors") {
  for (std::size_t n : {0, 1, 3, 6}) {
    auto entrants = scripted(n);
    CHECK_THROWS_AS(run_tournament(entrants, dex(), quiet_config(), 1), ConfigError);
  }
  auto dup = scripted(2);
  dup[1].id = dup[0].id;
  CHECK_THROWS_AS(run_tournament(dup, dex(), quiet_config(), 1), ConfigError);
  auto even = quiet_config();
  even.best_of = 2;
  auto two = scripted(2);
  CHECK_THROWS_AS(run_tournament(two, dex(), even, 1), ConfigError);
}

TEST_CASE("placement labels") {
  CHECK(placement_label(1) == "Champion");
  CHECK(placement_label(2) == "Runner-up");
  CHECK(placement_label(4) == "Semi-finalist");
  CHECK(placement_label(8) == "Quarter-finalist");
  CHECK(placement_label(16) == "Round of 16");
}

TEST_CASE("tournaments are deterministic and parallel rounds match serial ones") {
  auto e1 = scripted(8);
  auto e2 = scripted(8);
  auto serial = quiet_config();
  auto parallel = quiet_config();
  parallel.jobs = 4;
  const auto a = run_tournament(e1, dex(), serial, 99);
  const auto b = run_tournament(e2, dex(), parallel, 99);
  CHECK(to_json(dex(), a).dump() == to_json(dex(), b).dump());
  auto e3 = scripted(8);
  const auto c = run_tournament(e3, dex(), serial, 100);
  CHECK(to_json(dex(), a).dump() != to_json(dex(), c).dump());
}

TEST_CASE("logs and bracket files are written") {
  testing_support::TempDir dir;
  auto entrants = scripted(4);
  LeagueConfig config;
  config.output_dir = dir.path();
  config.tournament_id = "t";
  const auto r = run_tournament(entrants, dex(), config, 5);
  write_tournament_outputs(dex(), r, config);
  const auto root = dir.path() / "t";
  CHECK(std::filesystem::exists(root / "R1-M1.jsonl"));
  CHECK(std::filesystem::exists(root / "R1-M2.jsonl"));
  CHECK(std::filesystem::exists(root / "R2-M1.jsonl"));
  CHECK(std::filesystem::exists(root / "standings.txt"));
  const auto bracket = json::parse(testing_support::read_file(root / "bracket.json"));
  CHECK(bracket["champion"] == r.champion);
  for (const auto& p : find_logs(root)) {
    const auto rep = replay(p, dex());
    const auto summary = summarize_log(read_log(p));
    REQUIRE(summary.winner);
    CHECK(rep.winner == *summary.winner);
    CHECK(summary.tournament_id == "t");
  }
}

TEST_CASE("a failing agent falls back and keeps playing") {
  LeagueConfig config = quiet_config();
  GreedyAgent g("greedy", dex());
  BrokenAgent broken("broken");
  MatchContext ctx{&dex(), &config, "fb", default_pool(dex())};
  const auto d = draft_team(ctx, broken, Side::B);
  CHECK(d.fallback);
  CHECK_FALSE(d.forfeit);
  CHECK(d.indices == fallback_team().indices);
  CHECK(d.record["fallback_used"] == true);
  CHECK(d.record.contains("failure"));

  const auto m = run_match(ctx, g, broken, 3);
  CHECK(m.games[0].end_reason != EndReason::Forfeit);
  CHECK(m.games[0].fallbacks[1] == m.games[0].turns);
  CHECK(m.games[0].fallbacks[0] == 0);
}

TEST_CASE("disqualification turns a failure into a forfeit") {
  LeagueConfig config = quiet_config();
  config.disqualify_on_failure = true;
  GreedyAgent g("greedy", dex());
  BrokenAgent broken("broken");
  MatchContext ctx{&dex(), &config, "dq", default_pool(dex())};
  const auto m = run_match(ctx, broken, g, 3);
  CHECK(m.winner == Side::B);
  CHECK(m.winner_id == "greedy");
  CHECK(m.end_reason == EndReason::Forfeit);
}

TEST_CASE("best of three") {
  LeagueConfig config = quiet_config();
  config.best_of = 3;
  GreedyAgent g("greedy", dex());
  RandomAgent r("random", dex(), 4);
  MatchContext ctx{&dex(), &config, "bo3", default_pool(dex())};
  const auto m = run_match(ctx, g, r, 8);
  CHECK(m.games.size() >= 2);
  CHECK(m.games.size() <= 3);
  int wins[2] = {0, 0};
  for (const auto& game : m.games) ++wins[index(game.winner)];
  CHECK(wins[index(m.winner)] == 2);
  CHECK(m.games[0].seed == 8);
  if (m.games.size() > 1) CHECK(m.games[1].seed != 8);
}

TEST_CASE("draft once reuses each entrant's team") {
  auto entrants = scripted(4);
  auto config = quiet_config();
  config.draft_once = true;
  const auto r = run_tournament(entrants, dex(), config, 3);
  std::map<std::string, Team> seen;
  for (const auto& round : r.rounds)
    for (const auto& m : round)
      for (Side s : kSides) {
        const auto& id = m.agents[index(s)];
        auto [it, fresh] = seen.emplace(id, m.teams[index(s)]);
        if (!fresh) CHECK(it->second == m.teams[index(s)]);
      }
}

TEST_CASE("tournament config files") {
  SUBCASE("scripted example") {
    auto spec = load_tournament_spec(kConfigs / "scripted_tournament.json");
    CHECK(spec.master_seed == 7);
    CHECK(spec.league.tournament_id == "scripted-cup");
    CHECK(spec.league.output_dir == kConfigs / "../runs");
    const auto entrants = make_entrants(spec, dex());
    CHECK(entrants.size() == 8);
    CHECK(entrants[0].profile["kind"] == "greedy");
  }
  SUBCASE("LLM example resolves providers without calling them") {
    auto spec = load_tournament_spec(kConfigs / "llm_tournament.json");
    const auto entrants = make_entrants(spec, dex());
    CHECK(entrants.size() == 4);
    CHECK(entrants[1].profile["params"]["model"] == "gpt-4o");
    CHECK(spec.league.provider_params["o4-mini"]["model"] == "o4-mini");
    CHECK_FALSE(spec.league.provider_params.dump().find("script") != std::string::npos);
  }
  SUBCASE("errors") {
    const json six = {{"entrants", json::array({{{"id", "a"}, {"kind", "greedy"}},
                                                {{"id", "b"}, {"kind", "greedy"}},
                                                {{"id", "c"}, {"kind", "greedy"}},
                                                {{"id", "d"}, {"kind", "greedy"}},
                                                {{"id", "e"}, {"kind", "greedy"}},
                                                {{"id", "f"}, {"kind", "greedy"}}})}};
    CHECK_THROWS_AS(parse_tournament_spec(six, {}), ConfigError);
    const json dup = {{"entrants", json::array({{{"id", "a"}, {"kind", "greedy"}}, {{"id", "a"}, {"kind", "random"}}})}};
    CHECK_THROWS_AS(parse_tournament_spec(dup, {}), ConfigError);
    const json unknown = {{"entrants", json::array({{{"id", "a"}, {"kind", "oracle"}}, {{"id", "b"}, {"kind", "random"}}})}};
    auto spec = parse_tournament_spec(unknown, {});
    CHECK_THROWS_AS(make_entrants(spec, dex()), ConfigError);
    const json no_provider = {{"entrants", json::array({{{"id", "a"}, {"provider", "nope"}}, {{"id", "b"}, {"kind", "random"}}})}};
    spec = parse_tournament_spec(no_provider, {});
    CHECK_THROWS_AS(make_entrants(spec, dex()), ConfigError);
    CHECK_THROWS_AS(parse_tournament_spec(json::array(), {}), ConfigError);
    CHECK_THROWS_AS(parse_tournament_spec({{"best_of", 2}, {"entrants", dup["entrants"]}}, {}), ConfigError);
  }
}

TEST_CASE("mock LLM tournament runs offline") {
  testing_support::TempDir dir;
  auto spec = load_tournament_spec(kConfigs / "mock_tournament.json");
  spec.league.output_dir = dir.path();
  auto entrants = make_entrants(spec, dex());
  const auto r = run_tournament(entrants, dex(), spec.league, spec.master_seed);
  CHECK(r.match_count() == 7);
  write_tournament_outputs(dex(), r, spec.league);

  const auto logs = find_logs(dir.path() / "mock-cup");
  CHECK(logs.size() == 7);
  bool saw_repair = false, saw_sample_team = false;
  for (const auto& p : logs) {
    const auto records = read_log(p);
    CHECK_NOTHROW(replay(records, dex()));
    for (const auto& rec : records) {
      if (rec["kind"] != "decision") continue;
      if (!rec["repair_errors"].empty()) saw_repair = true;
      if (rec["phase"] == "TeamSelect" && rec["decision"]["team"] == json::array({0, 3, 5, 8, 11, 14})) saw_sample_team = true;
      // raw responses are stored verbatim
      for (const auto& x : rec["exchanges"]) CHECK(x.contains("response"));
    }
  }
  CHECK(saw_repair);
  CHECK(saw_sample_team);

  const auto report = build_report(load_log_dir(dir.path()));
  CHECK(report.agents.size() == 8);
}
