#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pokeleague/agents.hpp"
#include "pokeleague/battle.hpp"

namespace pokeleague {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LeagueConfig {
  int best_of = 1;  // odd
  int turn_cap = kDefaultTurnCap;
  bool disqualify_on_failure = false;  // otherwise fall back and keep playing
  bool draft_once = false;  // one draft per entrant for the whole tournament
  int jobs = 1;  // concurrent matches within a round
  bool include_history = false;  // previous-turn summary in each view
  bool write_logs = true;
  std::filesystem::path output_dir = "runs";
  std::string tournament_id = "tournament";
  std::vector<SpeciesId> pool;  // empty: the dex pool
  nlohmann::json provider_params = nlohmann::json::object();  // recorded in every log header
};

void validate(const LeagueConfig& cfg);
nlohmann::json to_json(const LeagueConfig& cfg);

/// One entrant. Agents are shared across rounds but never used by two matches at once.
struct Entrant {
  std::string id;
  std::string display_name;
  std::shared_ptr<Agent> agent;
  nlohmann::json profile = nlohmann::json::object();  // kind, provider, model, ...
};

/// Result of a single battle between two fixed teams.
struct GameResult {
  Side winner = Side::A;
  EndReason end_reason = EndReason::AllFainted;
  int turns = 0;  // resolved turns
  std::uint64_t seed = 0;
  std::array<Team, 2> teams{};
  std::array<int, 2> fallbacks{};  // fallback decisions per side
  std::optional<std::filesystem::path> log_path;
};

struct MatchResult {
  std::string match_id;
  std::array<std::string, 2> agents;
  std::array<Team, 2> teams{};
  Side winner = Side::A;
  std::string winner_id;
  int turns = 0;  // summed over games
  EndReason end_reason = EndReason::AllFainted;  // of the deciding game
  std::uint64_t seed = 0;
  std::vector<GameResult> games;
  std::vector<std::filesystem::path> logs;
};

nlohmann::json to_json(const Dex& dex, const MatchResult& r);

/// Context shared by every battle in a run.
struct MatchContext {
  const Dex* dex = nullptr;
  const LeagueConfig* config = nullptr;
  std::string match_id;
  PoolView pool;
};

/// Plays one battle between fixed teams, logging when log_path is set.
/// `drafts` (optional) are the TeamSelect decision records to embed in the log.
/// A side disqualified during the draft forfeits right after the lead switch-ins.
GameResult play_battle(const MatchContext& ctx, std::array<Agent*, 2> agents, const std::array<Team, 2>& teams,
                       std::uint64_t seed, std::optional<std::filesystem::path> log_path,
                       const std::vector<nlohmann::json>& drafts = {},
                       std::optional<Side> draft_forfeit = std::nullopt);

/// Runs the draft for one side: the agent's pick, or the fallback team. The
/// returned record is ready for the log. `forfeit` is set when the agent
/// failed and the config disqualifies on failure.
struct Draft {
  Team team{};
  std::array<std::size_t, kTeamSize> indices{};
  nlohmann::json record;
  bool fallback = false;
  bool forfeit = false;
};
Draft draft_team(const MatchContext& ctx, Agent& agent, Side side);

/// Draft plus best-of-n battles. Team drafts are reused if `preset` is given.
MatchResult run_match(const MatchContext& ctx, Agent& a, Agent& b, std::uint64_t seed,
                      const std::array<std::optional<Draft>, 2>& preset = {});

struct Standing {
  std::string agent_id;
  std::string display_name;
  int seed_position = 0;
  int wins = 0;
  int losses = 0;
  std::string placement;
};

struct TournamentResult {
  std::string tournament_id;
  std::uint64_t master_seed = 0;
  std::vector<std::string> entrants;
  std::vector<std::vector<MatchResult>> rounds;
  std::vector<Standing> standings;  // placement order, then seeding order
  std::string champion;

  std::size_t match_count() const;
};

/// Label for an entrant knocked out in a round with `remaining` entrants.
std::string placement_label(std::size_t remaining);

TournamentResult run_tournament(std::vector<Entrant>& entrants, const Dex& dex, const LeagueConfig& config,
                                std::uint64_t master_seed);

nlohmann::json to_json(const Dex& dex, const TournamentResult& r);
std::string render_standings(const TournamentResult& r);

/// Writes bracket.json and standings.txt into the tournament directory.
void write_tournament_outputs(const Dex& dex, const TournamentResult& r, const LeagueConfig& config);

std::filesystem::path tournament_dir(const LeagueConfig& config);

// ---------------------------------------------------------------------------
// Tournament config files
// ---------------------------------------------------------------------------

struct TournamentSpec {
  LeagueConfig league;
  std::uint64_t master_seed = 0;
  std::optional<std::filesystem::path> dex_path;
  std::vector<std::string> pool_names;
  nlohmann::json providers = nlohmann::json::object();
  nlohmann::json entrants = nlohmann::json::array();
  std::filesystem::path base_dir;
  int max_repair_attempts = 3;
};

/// Parses and checks a tournament config. Relative paths resolve against the
/// config file's directory. Throws ConfigError.
TournamentSpec load_tournament_spec(const std::filesystem::path& path);
TournamentSpec parse_tournament_spec(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// Builds entrants (scripted or LLM) from the tournament config against a loaded dex;
/// fills league.pool from pool_names.
std::vector<Entrant> make_entrants(TournamentSpec& spec, const Dex& dex);

/// Scripted agent by name ("greedy" or "random"); throws ConfigError otherwise.
std::unique_ptr<Agent> make_scripted_agent(const std::string& kind, const std::string& id, const Dex& dex,
                                           std::uint64_t seed);

}  // namespace pokeleague
