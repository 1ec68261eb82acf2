#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pokeleague/battle.hpp"
#include "pokeleague/storage.hpp"

namespace pokeleague {

class AnalyticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NoMatches : public AnalyticsError {
 public:
  NoMatches() : AnalyticsError("no matches for this agent") {}
};
class NoAttackDecisions : public AnalyticsError {
 public:
  NoAttackDecisions() : AnalyticsError("no attack decisions") {}
};
class NoLogs : public AnalyticsError {
 public:
  using AnalyticsError::AnalyticsError;
};

/// What a single battle decision looked like against the state it was made in.
struct DecisionAnalysis {
  bool attack = false;
  bool forced = false;  // forced replacement
  double effectiveness = 1.0;  // chosen move vs the opposing active; attacks only
  bool super_effective = false;  // damaging move with effectiveness >= 2
  int expected_damage = 0;  // roll 100, no crit
  int best_expected_damage = 0;  // max over legal attacks
  bool optimal = false;  // chosen attack is in the argmax set
  int active_hp_percent = 0;
  bool voluntary_switch = false;

  friend bool operator==(const DecisionAnalysis&, const DecisionAnalysis&) = default;
};

DecisionAnalysis analyze_decision(const Dex& dex, const BattleState& pre, Side side, const Action& action);
nlohmann::json to_json(const DecisionAnalysis& a);
DecisionAnalysis analysis_from_json(const nlohmann::json& j);

/// One battle decision as read back from a log.
struct DecisionRow {
  int turn = 0;
  Side side = Side::A;
  std::string agent_id;
  DecisionPhase phase = DecisionPhase::Battle;
  std::optional<DecisionAnalysis> analysis;
  std::string reasoning;
  bool fallback_used = false;
};

struct MatchSummary {
  std::string match_id;
  std::string tournament_id;
  std::array<std::string, 2> agents;
  std::array<std::vector<std::string>, 2> teams;  // species names
  std::optional<Side> winner;
  std::string end_reason;
  int turns = 0;
  std::vector<DecisionRow> decisions;
  std::vector<std::string> reasonings;  // every decision, team picks included
};

MatchSummary summarize_log(std::span<const nlohmann::json> records);

/// Every *.jsonl below `dir`, in path order. Throws NoLogs when there are none.
std::vector<std::filesystem::path> find_logs(const std::filesystem::path& dir);
std::vector<MatchSummary> load_log_dir(const std::filesystem::path& dir);

/// Re-derives every battle decision's analysis from a replay of the log, in log order.
std::vector<DecisionAnalysis> recompute_analyses(std::span<const nlohmann::json> records, const Dex& dex);

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

struct Record {
  int wins = 0;
  int losses = 0;
};

double win_rate(const Record& r);
Record record_for(std::span<const MatchSummary> matches, const std::string& agent_id);

struct MoveEfficiency {
  double effective_move_rate = 0.0;
  double optimal_move_rate = 0.0;
  std::size_t attacks = 0;
};
MoveEfficiency move_efficiency(std::span<const DecisionAnalysis> decisions);

struct SwitchMetrics {
  double switch_rate = 0.0;
  std::optional<double> mean_hp_percent_at_voluntary_switch;
  std::size_t voluntary_switches = 0;
  std::size_t decision_turns = 0;
};
SwitchMetrics switch_metrics(std::span<const DecisionAnalysis> decisions);

using Teams = std::vector<std::vector<std::string>>;

/// Number of teams containing each species (0/1 per team).
std::map<std::string, int> pick_frequency(const Teams& teams);
/// Distinct species over total slots.
double team_diversity(const Teams& teams);
double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);
std::vector<std::vector<double>> jaccard_matrix(const Teams& teams);

struct AgentMetrics {
  std::string agent_id;
  int matches = 0;
  Record record;
  double win_rate = 0.0;
  std::optional<MoveEfficiency> efficiency;  // absent without attack decisions
  SwitchMetrics switches;
  double team_diversity = 0.0;
  std::map<std::string, int> pick_frequency;
  int fallback_decisions = 0;
  double mean_rationale_words = 0.0;  // descriptive only, not a quality score
};

struct MetricsReport {
  std::vector<AgentMetrics> agents;  // first-appearance order
  std::map<std::string, int> pick_frequency;  // over every drafted team
  std::vector<std::string> team_labels;  // "<match>/<agent>"
  std::vector<std::vector<double>> jaccard;
  int teams = 0;
};

MetricsReport build_report(std::span<const MatchSummary> matches);
nlohmann::json to_json(const MetricsReport& r);
std::string render_table(const MetricsReport& r);
std::string pick_frequency_csv(const MetricsReport& r);

std::size_t word_count(std::string_view text);

}  // namespace pokeleague
