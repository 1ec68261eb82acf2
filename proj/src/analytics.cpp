#include "pokeleague/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "pokeleague/agents.hpp"
#include "pokeleague/serialize.hpp"

namespace pokeleague {

using json = nlohmann::json;

DecisionAnalysis analyze_decision(const Dex& dex, const BattleState& pre, Side side, const Action& action) {
  const auto& own = pre.side(side);
  const auto& attacker = own.active_battler();
  const auto& defender = pre.side(opponent(side)).active_battler();

  DecisionAnalysis a;
  a.forced = own.needs_replacement();
  a.active_hp_percent = hp_percent(attacker);
  if (action.is_switch()) {
    a.voluntary_switch = !a.forced;
    return a;
  }

  a.attack = true;
  const MoveDef& move = dex.move_of(attacker.species, action.index);
  a.effectiveness = type_multiplier(dex.chart(), move.type, dex.species(defender.species).types);
  a.super_effective = move.damaging() && a.effectiveness >= 2.0;
  a.expected_damage = expected_damage(dex, attacker, defender, action.index, pre.weather.kind);
  for (const auto& legal : legal_actions(pre, side))
    if (legal.is_attack())
      a.best_expected_damage =
          std::max(a.best_expected_damage, expected_damage(dex, attacker, defender, legal.index, pre.weather.kind));
  a.optimal = a.expected_damage == a.best_expected_damage;
  return a;
}

json to_json(const DecisionAnalysis& a) {
  json j = {{"attack", a.attack},
            {"forced", a.forced},
            {"active_hp_percent", a.active_hp_percent},
            {"voluntary_switch", a.voluntary_switch}};
  if (a.attack) {
    j["effectiveness"] = a.effectiveness;
    j["super_effective"] = a.super_effective;
    j["expected_damage"] = a.expected_damage;
    j["best_expected_damage"] = a.best_expected_damage;
    j["optimal"] = a.optimal;
  }
  return j;
}

DecisionAnalysis analysis_from_json(const json& j) {
  DecisionAnalysis a;
  a.attack = j.at("attack").get<bool>();
  a.forced = j.value("forced", false);
  a.active_hp_percent = j.value("active_hp_percent", 0);
  a.voluntary_switch = j.value("voluntary_switch", false);
  if (a.attack) {
    a.effectiveness = j.at("effectiveness").get<double>();
    a.super_effective = j.at("super_effective").get<bool>();
    a.expected_damage = j.at("expected_damage").get<int>();
    a.best_expected_damage = j.at("best_expected_damage").get<int>();
    a.optimal = j.at("optimal").get<bool>();
  }
  return a;
}

MatchSummary summarize_log(std::span<const json> records) {
  MatchSummary m;
  for (const auto& r : records) {
    const auto kind = r.value("kind", std::string());
    if (kind == "meta") {
      const auto type = r.value("type", std::string());
      if (type == "header") {
        m.match_id = r.value("match_id", std::string());
        m.tournament_id = r.value("tournament_id", std::string());
        const auto& agents = r.at("agents");
        m.agents = {agents.at(0).get<std::string>(), agents.at(1).get<std::string>()};
      } else if (type == "result") {
        if (r.contains("winner") && r["winner"].is_number_integer())
          m.winner = r["winner"].get<int>() == 0 ? Side::A : Side::B;
        m.end_reason = r.value("end_reason", std::string());
        m.turns = r.value("turns", 0);
      }
    } else if (kind == "events" && r.value("turn", -1) == 0 && r.contains("teams")) {
      for (std::size_t s = 0; s < 2; ++s) m.teams[s] = r["teams"].at(s).get<std::vector<std::string>>();
    } else if (kind == "decision") {
      m.reasonings.push_back(r.value("reasoning", std::string()));
      auto phase = parse_decision_phase(r.value("phase", std::string()));
      if (!phase) throw SchemaError("decision record with unknown phase");
      if (*phase == DecisionPhase::TeamSelect) continue;
      DecisionRow row;
      row.turn = r.value("turn", 0);
      row.side = r.value("side", 0) == 0 ? Side::A : Side::B;
      row.agent_id = r.value("agent_id", std::string());
      row.phase = *phase;
      if (r.contains("analysis")) row.analysis = analysis_from_json(r["analysis"]);
      row.reasoning = r.value("reasoning", std::string());
      row.fallback_used = r.value("fallback_used", false);
      m.decisions.push_back(std::move(row));
    }
  }
  if (m.match_id.empty()) throw IncompleteLog("log has no header record");
  return m;
}

std::vector<std::filesystem::path> find_logs(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw NoLogs("not a directory: " + dir.string());
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".jsonl") out.push_back(e.path());
  if (out.empty()) throw NoLogs("no match logs under " + dir.string());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MatchSummary> load_log_dir(const std::filesystem::path& dir) {
  std::vector<MatchSummary> out;
  for (const auto& p : find_logs(dir)) {
    const auto records = read_log(p);
    out.push_back(summarize_log(records));
  }
  return out;
}

std::vector<DecisionAnalysis> recompute_analyses(std::span<const json> records, const Dex& dex) {
  std::vector<DecisionAnalysis> out;
  replay(records, dex, [&](int, const BattleState& pre, std::optional<Action> a, std::optional<Action> b) {
    if (!a || !b) return;
    out.push_back(analyze_decision(dex, pre, Side::A, *a));
    out.push_back(analyze_decision(dex, pre, Side::B, *b));
  });
  return out;
}

double win_rate(const Record& r) {
  const int n = r.wins + r.losses;
  if (n == 0) throw NoMatches();
  return static_cast<double>(r.wins) / n;
}

Record record_for(std::span<const MatchSummary> matches, const std::string& agent_id) {
  Record r;
  for (const auto& m : matches) {
    for (Side s : kSides) {
      if (m.agents[index(s)] != agent_id || !m.winner) continue;
      (*m.winner == s ? r.wins : r.losses) += 1;
    }
  }
  return r;
}

MoveEfficiency move_efficiency(std::span<const DecisionAnalysis> decisions) {
  MoveEfficiency e;
  std::size_t effective = 0, optimal = 0;
  for (const auto& d : decisions) {
    if (!d.attack) continue;
    ++e.attacks;
    effective += d.super_effective;
    optimal += d.optimal;
  }
  if (e.attacks == 0) throw NoAttackDecisions();
  e.effective_move_rate = static_cast<double>(effective) / e.attacks;
  e.optimal_move_rate = static_cast<double>(optimal) / e.attacks;
  return e;
}

SwitchMetrics switch_metrics(std::span<const DecisionAnalysis> decisions) {
  SwitchMetrics s;
  double hp_sum = 0;
  for (const auto& d : decisions) {
    ++s.decision_turns;
    if (d.voluntary_switch) {
      ++s.voluntary_switches;
      hp_sum += d.active_hp_percent;
    }
  }
  if (s.decision_turns > 0) s.switch_rate = static_cast<double>(s.voluntary_switches) / s.decision_turns;
  if (s.voluntary_switches > 0) s.mean_hp_percent_at_voluntary_switch = hp_sum / s.voluntary_switches;
  return s;
}

std::map<std::string, int> pick_frequency(const Teams& teams) {
  std::map<std::string, int> out;
  for (const auto& team : teams) {
    const std::set<std::string> distinct(team.begin(), team.end());
    for (const auto& s : distinct) ++out[s];
  }
  return out;
}

double team_diversity(const Teams& teams) {
  std::set<std::string> distinct;
  std::size_t slots = 0;
  for (const auto& team : teams) {
    distinct.insert(team.begin(), team.end());
    slots += team.size();
  }
  return slots ? static_cast<double>(distinct.size()) / slots : 0.0;
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::vector<std::string> inter, uni;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(inter));
  std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(uni));
  return uni.empty() ? 1.0 : static_cast<double>(inter.size()) / uni.size();
}

std::vector<std::vector<double>> jaccard_matrix(const Teams& teams) {
  std::vector<std::vector<double>> m(teams.size(), std::vector<double>(teams.size()));
  for (std::size_t i = 0; i < teams.size(); ++i)
    for (std::size_t j = 0; j < teams.size(); ++j) m[i][j] = jaccard(teams[i], teams[j]);
  return m;
}

std::size_t word_count(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t n = 0;
  for (std::string w; in >> w;) ++n;
  return n;
}

MetricsReport build_report(std::span<const MatchSummary> matches) {
  MetricsReport report;
  std::vector<std::string> order;
  std::map<std::string, Teams> teams_by_agent;
  std::map<std::string, std::vector<DecisionAnalysis>> analyses;
  std::map<std::string, std::pair<std::size_t, std::size_t>> words;  // total words, decisions
  std::map<std::string, int> fallbacks;
  Teams all_teams;

  for (const auto& m : matches) {
    for (Side s : kSides) {
      const auto& id = m.agents[index(s)];
      if (std::find(order.begin(), order.end(), id) == order.end()) order.push_back(id);
      if (!m.teams[index(s)].empty()) {
        teams_by_agent[id].push_back(m.teams[index(s)]);
        all_teams.push_back(m.teams[index(s)]);
        report.team_labels.push_back(m.match_id + "/" + id);
      }
    }
    for (const auto& d : m.decisions) {
      if (d.analysis) analyses[d.agent_id].push_back(*d.analysis);
      auto& w = words[d.agent_id];
      w.first += word_count(d.reasoning);
      ++w.second;
      fallbacks[d.agent_id] += d.fallback_used;
    }
  }

  for (const auto& id : order) {
    AgentMetrics a;
    a.agent_id = id;
    a.record = record_for(matches, id);
    a.matches = a.record.wins + a.record.losses;
    a.win_rate = a.matches ? win_rate(a.record) : 0.0;
    const auto& an = analyses[id];
    if (std::any_of(an.begin(), an.end(), [](const auto& d) { return d.attack; })) a.efficiency = move_efficiency(an);
    a.switches = switch_metrics(an);
    a.team_diversity = team_diversity(teams_by_agent[id]);
    a.pick_frequency = pick_frequency(teams_by_agent[id]);
    a.fallback_decisions = fallbacks[id];
    const auto& w = words[id];
    a.mean_rationale_words = w.second ? static_cast<double>(w.first) / w.second : 0.0;
    report.agents.push_back(std::move(a));
  }
  report.pick_frequency = pick_frequency(all_teams);
  report.jaccard = jaccard_matrix(all_teams);
  report.teams = static_cast<int>(all_teams.size());
  return report;
}

json to_json(const MetricsReport& r) {
  json agents = json::array();
  for (const auto& a : r.agents) {
    json j = {{"agent_id", a.agent_id},
              {"matches", a.matches},
              {"wins", a.record.wins},
              {"losses", a.record.losses},
              {"win_rate", a.win_rate},
              {"switch_rate", a.switches.switch_rate},
              {"voluntary_switches", a.switches.voluntary_switches},
              {"team_diversity", a.team_diversity},
              {"pick_frequency", a.pick_frequency},
              {"fallback_decisions", a.fallback_decisions},
              {"rationale_words_mean_descriptive_only", a.mean_rationale_words}};
    if (a.efficiency) {
      j["effective_move_rate"] = a.efficiency->effective_move_rate;
      j["optimal_move_rate"] = a.efficiency->optimal_move_rate;
      j["attack_decisions"] = a.efficiency->attacks;
    }
    if (a.switches.mean_hp_percent_at_voluntary_switch)
      j["mean_hp_percent_at_voluntary_switch"] = *a.switches.mean_hp_percent_at_voluntary_switch;
    agents.push_back(std::move(j));
  }
  return {{"agents", agents},
          {"pick_frequency", r.pick_frequency},
          {"teams", r.teams},
          {"team_labels", r.team_labels},
          {"jaccard", r.jaccard},
          {"notes",
           "rationale word counts are descriptive statistics only and do not score reasoning quality"}};
}

std::string render_table(const MetricsReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(22) << "agent" << std::right << std::setw(7) << "W-L" << std::setw(8) << "win%"
     << std::setw(8) << "eff%" << std::setw(8) << "opt%" << std::setw(8) << "sw/t" << std::setw(8) << "sw-hp"
     << std::setw(7) << "div" << std::setw(7) << "words" << "\n";
  os << std::fixed;
  auto pct = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << 100.0 * v;
    return s.str();
  };
  for (const auto& a : r.agents) {
    os << std::left << std::setw(22) << a.agent_id << std::right << std::setw(7)
       << (std::to_string(a.record.wins) + "-" + std::to_string(a.record.losses)) << std::setw(8) << pct(a.win_rate)
       << std::setw(8) << (a.efficiency ? pct(a.efficiency->effective_move_rate) : "-") << std::setw(8)
       << (a.efficiency ? pct(a.efficiency->optimal_move_rate) : "-") << std::setw(8) << std::setprecision(3)
       << a.switches.switch_rate << std::setw(8) << std::setprecision(1);
    if (a.switches.mean_hp_percent_at_voluntary_switch)
      os << *a.switches.mean_hp_percent_at_voluntary_switch;
    else
      os << "-";
    os << std::setw(7) << std::setprecision(2) << a.team_diversity << std::setw(7) << std::setprecision(1)
       << a.mean_rationale_words << "\n";
  }
  os << "(words: mean rationale length, descriptive only)\n";
  return os.str();
}

std::string pick_frequency_csv(const MetricsReport& r) {
  std::vector<std::pair<std::string, int>> rows(r.pick_frequency.begin(), r.pick_frequency.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::ostringstream os;
  os << "species,count,teams\n";
  for (const auto& [name, count] : rows) os << name << "," << count << "," << r.teams << "\n";
  return os.str();
}

}  // namespace pokeleague
