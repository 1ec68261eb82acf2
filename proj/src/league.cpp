#include "pokeleague/league.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "pokeleague/analytics.hpp"
#include "pokeleague/serialize.hpp"
#include "pokeleague/storage.hpp"

namespace pokeleague {

using json = nlohmann::json;

namespace {

long long now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

json exchanges_json(const std::vector<RawExchange>& xs) {
  json arr = json::array();
  for (const auto& x : xs) arr.push_back(to_json(x));
  return arr;
}

json decision_record(const MatchContext& ctx, int turn, Side side, const Agent& agent, DecisionPhase phase) {
  return {{"kind", "decision"},
          {"match_id", ctx.match_id},
          {"turn", turn},
          {"side", index(side)},
          {"agent_id", agent.id()},
          {"phase", to_string(phase)},
          {"timestamp_ms", now_ms()}};
}

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

struct Decided {
  Action action;
  json record;
  bool fallback = false;
  bool forfeit = false;
};

Decided decide(const MatchContext& ctx, Agent& agent, const BattleState& state, Side side,
               const std::vector<std::string>& last_turn) {
  const auto& dex = *ctx.dex;
  BattleView view = view_for(state, side);
  if (ctx.config->include_history) view.last_turn = last_turn;
  const auto legal = legal_actions(state, side);
  const auto phase = view.forced_replacement ? DecisionPhase::ForcedReplace : DecisionPhase::Battle;

  Decided d;
  d.record = decision_record(ctx, state.turn, side, agent, phase);
  json legal_json = json::array();
  for (const auto& a : legal) legal_json.push_back(to_json(a));
  d.record["legal"] = std::move(legal_json);

  std::string failure;
  std::vector<RawExchange> exchanges;
  std::vector<std::string> errors;
  try {
    AgentDecision decision = agent.choose_action(view, legal);
    exchanges = std::move(decision.exchanges);
    errors = std::move(decision.repair_errors);
    if (!std::holds_alternative<Action>(decision.choice)) {
      failure = "agent returned a team pick during battle";
    } else if (std::find(legal.begin(), legal.end(), decision.action()) == legal.end()) {
      failure = "agent returned illegal action " + describe(decision.action());
    } else {
      d.action = decision.action();
      d.record["reasoning"] = decision.reasoning;
    }
  } catch (const AgentFailure& e) {
    failure = e.what();
    exchanges = e.exchanges;
    errors = e.errors;
  } catch (const std::runtime_error& e) {
    failure = e.what();
  }

  if (!failure.empty()) {
    errors.push_back(failure);
    d.record["failure"] = failure;
    d.record["reasoning"] = "";
    if (ctx.config->disqualify_on_failure) {
      d.forfeit = true;
    } else {
      d.fallback = true;
      d.action = fallback_action(legal);
    }
  }
  d.record["fallback_used"] = d.fallback;
  d.record["exchanges"] = exchanges_json(exchanges);
  d.record["repair_errors"] = errors;
  if (!d.forfeit) {
    d.record["decision"] = to_json(d.action);
    d.record["analysis"] = to_json(analyze_decision(dex, state, side, d.action));
  } else {
    d.record["decision"] = nullptr;
  }
  return d;
}

json team_names(const Dex& dex, const Team& t) {
  json arr = json::array();
  for (SpeciesId s : t) arr.push_back(dex.species(s).name);
  return arr;
}

std::vector<std::string> describe_events(const Dex& dex, const BattleState& state, const std::vector<Event>& ev) {
  std::vector<std::string> out;
  out.reserve(ev.size());
  for (const auto& e : ev) out.push_back(describe(dex, state, e));
  return out;
}

json events_record(const MatchContext& ctx, int turn, const std::vector<Event>& events, std::uint64_t post) {
  return {{"kind", "events"},
          {"match_id", ctx.match_id},
          {"turn", turn},
          {"events", to_json(events)},
          {"post_digest", to_hex(post)}};
}

}  // namespace

void validate(const LeagueConfig& cfg) {
  if (cfg.best_of < 1 || cfg.best_of % 2 == 0) throw ConfigError("best_of must be a positive odd number");
  if (cfg.turn_cap < 1) throw ConfigError("turn_cap must be >= 1");
  if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
  if (cfg.tournament_id.empty()) throw ConfigError("tournament_id must not be empty");
  if (!cfg.pool.empty() && cfg.pool.size() < kTeamSize) throw ConfigError("pool must contain at least 6 species");
  if (std::set<SpeciesId>(cfg.pool.begin(), cfg.pool.end()).size() != cfg.pool.size())
    throw ConfigError("pool lists a species twice");
}

json to_json(const LeagueConfig& c) {
  return {{"best_of", c.best_of},
          {"turn_cap", c.turn_cap},
          {"disqualify_on_failure", c.disqualify_on_failure},
          {"draft_once", c.draft_once},
          {"jobs", c.jobs},
          {"include_history", c.include_history},
          {"tournament_id", c.tournament_id},
          {"seeding", "config order"}};
}

Draft draft_team(const MatchContext& ctx, Agent& agent, Side side) {
  const auto& dex = *ctx.dex;
  Draft d;
  d.record = decision_record(ctx, 0, side, agent, DecisionPhase::TeamSelect);

  std::string failure;
  std::vector<RawExchange> exchanges;
  std::vector<std::string> errors;
  try {
    AgentDecision decision = agent.select_team(ctx.pool);
    exchanges = std::move(decision.exchanges);
    errors = std::move(decision.repair_errors);
    if (!std::holds_alternative<TeamPick>(decision.choice)) {
      failure = "agent returned an action during team selection";
    } else {
      const auto& idx = decision.team().indices;
      const std::set<std::size_t> distinct(idx.begin(), idx.end());
      const bool in_range =
          std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return i < ctx.pool.species.size(); });
      if (distinct.size() != kTeamSize || !in_range) {
        failure = "agent returned an invalid team";
      } else {
        d.indices = idx;
        d.record["reasoning"] = decision.reasoning;
      }
    }
  } catch (const AgentFailure& e) {
    failure = e.what();
    exchanges = e.exchanges;
    errors = e.errors;
  } catch (const std::runtime_error& e) {
    failure = e.what();
  }

  if (!failure.empty()) {
    errors.push_back(failure);
    d.record["failure"] = failure;
    d.record["reasoning"] = "";
    d.indices = fallback_team().indices;
    d.forfeit = ctx.config->disqualify_on_failure;
    d.fallback = !d.forfeit;
  }
  for (std::size_t i = 0; i < kTeamSize; ++i) d.team[i] = ctx.pool.species[d.indices[i]];
  d.record["fallback_used"] = d.fallback;
  d.record["exchanges"] = exchanges_json(exchanges);
  d.record["repair_errors"] = errors;
  d.record["decision"] = {{"team", d.indices}, {"species", team_names(dex, d.team)}};
  return d;
}

GameResult play_battle(const MatchContext& ctx, std::array<Agent*, 2> agents, const std::array<Team, 2>& teams,
                       std::uint64_t seed, std::optional<std::filesystem::path> log_path,
                       const std::vector<json>& drafts, std::optional<Side> draft_forfeit) {
  const Dex& dex = *ctx.dex;
  const LeagueConfig& cfg = *ctx.config;

  std::unique_ptr<MatchLog> log;
  if (log_path) {
    log = std::make_unique<MatchLog>(*log_path);
    json pool = json::array();
    for (SpeciesId s : ctx.pool.species) pool.push_back(dex.species(s).name);
    log->append({{"kind", "meta"},
                 {"type", "header"},
                 {"match_id", ctx.match_id},
                 {"tournament_id", cfg.tournament_id},
                 {"seed", to_hex(seed)},
                 {"dex_hash", to_hex(dex.content_hash())},
                 {"agents", {agents[0]->id(), agents[1]->id()}},
                 {"pool", pool},
                 {"config", to_json(cfg)},
                 {"providers", cfg.provider_params},
                 {"turn_cap", cfg.turn_cap},
                 {"timestamp_ms", now_ms()}});
    for (const auto& d : drafts) log->append(d);
  }

  GameResult result;
  result.seed = seed;
  result.teams = teams;
  result.log_path = log_path;

  TurnResult tr = start_battle(dex, teams, seed, cfg.turn_cap);
  if (log) {
    auto rec = events_record(ctx, 0, tr.events, state_digest(dex, tr.state));
    rec["teams"] = {team_names(dex, teams[0]), team_names(dex, teams[1])};
    log->append(std::move(rec));
  }
  BattleState state = std::move(tr.state);
  std::vector<std::string> last_turn;

  auto log_turn = [&](const BattleState& pre, const TurnResult& next, json extra) {
    if (!log) return;
    auto rec = events_record(ctx, pre.turn, next.events, state_digest(dex, next.state));
    rec["pre_digest"] = to_hex(state_digest(dex, pre));
    rec.update(extra);
    log->append(std::move(rec));
  };

  if (draft_forfeit) {
    TurnResult next = forfeit(state, *draft_forfeit);
    log_turn(state, next, {{"forfeit", index(*draft_forfeit)}});
    state = std::move(next.state);
  }

  while (!state.ended()) {
    std::array<Decided, 2> d;
    for (Side s : kSides) d[index(s)] = decide(ctx, *agents[index(s)], state, s, last_turn);
    for (Side s : kSides) {
      result.fallbacks[index(s)] += d[index(s)].fallback;
      if (log) log->append(d[index(s)].record);
    }

    std::optional<Side> loser;
    for (Side s : kSides)
      if (!loser && d[index(s)].forfeit) loser = s;
    if (loser) {
      TurnResult next = forfeit(state, *loser);
      log_turn(state, next, {{"forfeit", index(*loser)}});
      state = std::move(next.state);
      break;
    }

    TurnResult next = resolve_turn(dex, state, d[0].action, d[1].action);
    log_turn(state, next, {{"actions", {to_json(d[0].action), to_json(d[1].action)}}});
    if (cfg.include_history) last_turn = describe_events(dex, next.state, next.events);
    state = std::move(next.state);
  }

  result.winner = *state.winner;
  result.end_reason = *state.end_reason;
  result.turns = state.turn - 1;
  if (log) {
    log->append({{"kind", "meta"},
                 {"type", "result"},
                 {"match_id", ctx.match_id},
                 {"winner", index(result.winner)},
                 {"winner_agent", agents[index(result.winner)]->id()},
                 {"end_reason", to_string(result.end_reason)},
                 {"turns", result.turns},
                 {"final_digest", to_hex(state_digest(dex, state))}});
    log->close();
  }
  return result;
}

std::filesystem::path tournament_dir(const LeagueConfig& config) { return config.output_dir / config.tournament_id; }

MatchResult run_match(const MatchContext& ctx, Agent& a, Agent& b, std::uint64_t seed,
                      const std::array<std::optional<Draft>, 2>& preset) {
  if (&a == &b || a.id() == b.id()) throw ConfigError("a match needs two distinct agents");
  const LeagueConfig& cfg = *ctx.config;
  std::array<Agent*, 2> agents{&a, &b};

  std::array<Draft, 2> drafts;
  for (Side s : kSides) {
    if (preset[index(s)]) {
      drafts[index(s)] = *preset[index(s)];
      drafts[index(s)].record["side"] = index(s);
      drafts[index(s)].record["match_id"] = ctx.match_id;
    } else {
      drafts[index(s)] = draft_team(ctx, *agents[index(s)], s);
    }
  }
  std::optional<Side> draft_forfeit;
  for (Side s : kSides)
    if (!draft_forfeit && drafts[index(s)].forfeit) draft_forfeit = s;

  MatchResult m;
  m.match_id = ctx.match_id;
  m.agents = {a.id(), b.id()};
  m.teams = {drafts[0].team, drafts[1].team};
  m.seed = seed;

  const int needed = cfg.best_of / 2 + 1;
  std::array<int, 2> wins{};
  for (int g = 1; wins[0] < needed && wins[1] < needed; ++g) {
    MatchContext game_ctx = ctx;
    if (cfg.best_of > 1) game_ctx.match_id = ctx.match_id + "-G" + std::to_string(g);
    std::vector<json> records;
    for (const auto& d : drafts) {
      records.push_back(d.record);
      records.back()["match_id"] = game_ctx.match_id;
    }
    const std::uint64_t game_seed = g == 1 ? seed : derive_seed(seed, "game-" + std::to_string(g));
    std::optional<std::filesystem::path> path;
    if (cfg.write_logs) path = tournament_dir(cfg) / (game_ctx.match_id + ".jsonl");
    GameResult game = play_battle(game_ctx, agents, m.teams, game_seed, path, records, draft_forfeit);
    ++wins[index(game.winner)];
    m.turns += game.turns;
    m.end_reason = game.end_reason;
    if (game.log_path) m.logs.push_back(*game.log_path);
    m.games.push_back(std::move(game));
    if (draft_forfeit) break;
  }
  m.winner = wins[0] > wins[1] ? Side::A : Side::B;
  m.winner_id = m.agents[index(m.winner)];
  return m;
}

json to_json(const Dex& dex, const MatchResult& r) {
  json games = json::array();
  for (const auto& g : r.games) {
    games.push_back({{"winner", index(g.winner)},
                     {"end_reason", to_string(g.end_reason)},
                     {"turns", g.turns},
                     {"seed", to_hex(g.seed)},
                     {"fallbacks", g.fallbacks},
                     {"log", g.log_path ? json(g.log_path->filename().string()) : json(nullptr)}});
  }
  return {{"match_id", r.match_id},
          {"agents", r.agents},
          {"teams", {team_names(dex, r.teams[0]), team_names(dex, r.teams[1])}},
          {"winner", r.winner_id},
          {"turns", r.turns},
          {"end_reason", to_string(r.end_reason)},
          {"seed", to_hex(r.seed)},
          {"games", games}};
}

std::size_t TournamentResult::match_count() const {
  std::size_t n = 0;
  for (const auto& r : rounds) n += r.size();
  return n;
}

std::string placement_label(std::size_t remaining) {
  switch (remaining) {
    case 1: return "Champion";
    case 2: return "Runner-up";
    case 4: return "Semi-finalist";
    case 8: return "Quarter-finalist";
    default: return "Round of " + std::to_string(remaining);
  }
}

TournamentResult run_tournament(std::vector<Entrant>& entrants, const Dex& dex, const LeagueConfig& config,
                                std::uint64_t master_seed) {
  validate(config);
  if (!is_power_of_two(entrants.size()))
    throw ConfigError("entrant count must be a power of two >= 2, got " + std::to_string(entrants.size()));
  std::set<std::string> ids;
  for (const auto& e : entrants) {
    if (!e.agent) throw ConfigError("entrant " + e.id + " has no agent");
    if (e.agent->id() != e.id) throw ConfigError("entrant id " + e.id + " does not match its agent");
    if (!ids.insert(e.id).second) throw ConfigError("duplicate entrant id " + e.id);
  }

  PoolView pool = default_pool(dex);
  if (!config.pool.empty()) pool.species = config.pool;
  if (pool.species.size() < kTeamSize) throw ConfigError("pool must contain at least 6 species");

  TournamentResult result;
  result.tournament_id = config.tournament_id;
  result.master_seed = master_seed;
  for (const auto& e : entrants) result.entrants.push_back(e.id);

  std::vector<std::optional<Draft>> drafted(entrants.size());
  if (config.draft_once) {
    for (std::size_t i = 0; i < entrants.size(); ++i) {
      MatchContext ctx{&dex, &config, "draft", pool};
      drafted[i] = draft_team(ctx, *entrants[i].agent, Side::A);
    }
  }

  std::vector<std::size_t> alive(entrants.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
  std::vector<std::size_t> exit_size(entrants.size(), 1);  // entrants left in the round an agent lost

  for (int round = 1; alive.size() > 1; ++round) {
    const std::size_t n_matches = alive.size() / 2;
    std::vector<MatchResult> matches(n_matches);
    std::vector<std::exception_ptr> errors(n_matches);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
      for (std::size_t m; (m = next.fetch_add(1)) < n_matches;) {
        try {
          const auto ia = alive[2 * m], ib = alive[2 * m + 1];
          MatchContext ctx{&dex, &config, "R" + std::to_string(round) + "-M" + std::to_string(m + 1), pool};
          matches[m] = run_match(ctx, *entrants[ia].agent, *entrants[ib].agent, derive_seed(master_seed, ctx.match_id),
                                 {drafted[ia], drafted[ib]});
        } catch (...) {
          errors[m] = std::current_exception();
        }
      }
    };
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), n_matches);
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool_threads;
      for (std::size_t t = 0; t < workers; ++t) pool_threads.emplace_back(worker);
      for (auto& t : pool_threads) t.join();
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);

    std::vector<std::size_t> winners;
    for (std::size_t m = 0; m < n_matches; ++m) {
      const auto ia = alive[2 * m], ib = alive[2 * m + 1];
      const bool a_won = matches[m].winner == Side::A;
      winners.push_back(a_won ? ia : ib);
      exit_size[a_won ? ib : ia] = alive.size();
    }
    result.rounds.push_back(std::move(matches));
    alive = std::move(winners);
  }
  result.champion = entrants[alive.front()].id;

  for (std::size_t i = 0; i < entrants.size(); ++i) {
    Standing s;
    s.agent_id = entrants[i].id;
    s.display_name = entrants[i].display_name.empty() ? entrants[i].id : entrants[i].display_name;
    s.seed_position = static_cast<int>(i) + 1;
    for (const auto& round : result.rounds)
      for (const auto& m : round)
        for (Side side : kSides)
          if (m.agents[index(side)] == s.agent_id) (m.winner == side ? s.wins : s.losses) += 1;
    s.placement = placement_label(exit_size[i]);
    result.standings.push_back(std::move(s));
  }
  std::stable_sort(result.standings.begin(), result.standings.end(),
                   [](const Standing& a, const Standing& b) { return a.wins > b.wins; });
  return result;
}

json to_json(const Dex& dex, const TournamentResult& r) {
  json rounds = json::array();
  for (const auto& round : r.rounds) {
    json arr = json::array();
    for (const auto& m : round) arr.push_back(to_json(dex, m));
    rounds.push_back(std::move(arr));
  }
  json standings = json::array();
  for (const auto& s : r.standings) {
    standings.push_back({{"agent_id", s.agent_id},
                         {"display_name", s.display_name},
                         {"seed", s.seed_position},
                         {"wins", s.wins},
                         {"losses", s.losses},
                         {"record", std::to_string(s.wins) + "-" + std::to_string(s.losses)},
                         {"placement", s.placement}});
  }
  return {{"tournament_id", r.tournament_id},
          {"master_seed", to_hex(r.master_seed)},
          {"seeding", "config order"},
          {"entrants", r.entrants},
          {"rounds", rounds},
          {"standings", standings},
          {"champion", r.champion},
          {"matches", r.match_count()}};
}

std::string render_standings(const TournamentResult& r) {
  std::size_t width = 5;
  for (const auto& s : r.standings) width = std::max(width, s.display_name.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(width) + 2) << "Model" << std::setw(8) << "Record"
     << "Final Standing\n";
  for (const auto& s : r.standings) {
    os << std::setw(static_cast<int>(width) + 2) << s.display_name << std::setw(8)
       << (std::to_string(s.wins) + "-" + std::to_string(s.losses)) << s.placement << "\n";
  }
  return os.str();
}

void write_tournament_outputs(const Dex& dex, const TournamentResult& r, const LeagueConfig& config) {
  const auto dir = tournament_dir(config);
  std::filesystem::create_directories(dir);
  std::ofstream bracket(dir / "bracket.json");
  bracket << to_json(dex, r).dump(2) << "\n";
  std::ofstream standings(dir / "standings.txt");
  standings << render_standings(r);
  if (!bracket || !standings) throw IoError("cannot write tournament outputs to " + dir.string());
}

}  // namespace pokeleague
