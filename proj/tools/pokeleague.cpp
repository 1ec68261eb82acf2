// pokeleague: validate data, simulate scripted matches, run tournaments,
// replay logs and build metric reports.
//
// Exit codes: 0 success, 1 domain failure, 2 usage, config or IO failure.

#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <thread>

#include "pokeleague/analytics.hpp"
#include "pokeleague/league.hpp"
#include "pokeleague/serialize.hpp"
#include "pokeleague/storage.hpp"

namespace pl = pokeleague;

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsageFailure = 2;

std::optional<pl::Dex> load_dex_or_report(const std::string& path) {
  try {
    return pl::load_dex(path.empty() ? pl::default_dex_path() : std::filesystem::path(path));
  } catch (const pl::DexIoError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const pl::DexError& e) {
    std::cerr << "error: dex is invalid\n";
    for (const auto& issue : e.issues())
      std::cerr << "  [" << pl::to_string(issue.kind) << "] " << issue.entry << ": " << issue.message << "\n";
  }
  return std::nullopt;
}

int cmd_dex_validate(const std::string& path) {
  const auto p = path.empty() ? pl::default_dex_path() : std::filesystem::path(path);
  try {
    const auto dex = pl::load_dex(p);
    std::cout << p.string() << ": ok (" << dex.species().size() << " species, " << dex.moves().size()
              << " moves, pool " << dex.pool().size() << ", hash " << pl::to_hex(dex.content_hash()) << ")\n";
    return kOk;
  } catch (const pl::DexIoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageFailure;
  } catch (const pl::DexError& e) {
    std::cerr << p.string() << ": " << e.issues().size() << " problem(s)\n";
    for (const auto& issue : e.issues())
      std::cerr << "  [" << pl::to_string(issue.kind) << "] " << issue.entry << ": " << issue.message << "\n";
    return kDomainFailure;
  }
}

struct SimulateOptions {
  std::string agent_a = "greedy";
  std::string agent_b = "random";
  std::uint64_t seed = 1;
  int count = 1;
  std::string dex;
  std::string out = "runs";
  bool verbose = false;
  bool no_logs = false;
  int jobs = 1;
  int turn_cap = pl::kDefaultTurnCap;
};

void print_trace(const pl::Dex& dex, const std::filesystem::path& log) {
  const auto records = pl::read_log(log);
  pl::replay(records, dex, [&](int turn, const pl::BattleState& pre, std::optional<pl::Action> a,
                               std::optional<pl::Action> b) {
    if (!a || !b) return;
    const auto next = pl::resolve_turn(dex, pre, *a, *b);
    std::cout << "turn " << turn << ": A " << pl::describe(*a) << ", B " << pl::describe(*b) << "\n";
    for (const auto& e : next.events) std::cout << "  " << pl::describe(dex, next.state, e) << "\n";
  });
}

int cmd_simulate(const SimulateOptions& o) {
  if (o.count < 1) {
    std::cerr << "error: --count must be >= 1\n";
    return kUsageFailure;
  }
  if (o.jobs < 1) {
    std::cerr << "error: --jobs must be >= 1\n";
    return kUsageFailure;
  }
  for (const auto& kind : {o.agent_a, o.agent_b}) {
    if (kind != "greedy" && kind != "random") {
      std::cerr << "error: unknown agent \"" << kind << "\" (expected greedy or random)\n";
      return kUsageFailure;
    }
  }
  auto dex = load_dex_or_report(o.dex);
  if (!dex) return kUsageFailure;

  pl::LeagueConfig cfg;
  cfg.tournament_id = "simulate";
  cfg.output_dir = o.out;
  cfg.turn_cap = o.turn_cap;
  cfg.write_logs = !o.no_logs || o.verbose;
  try {
    pl::validate(cfg);
  } catch (const pl::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageFailure;
  }

  const std::string id_a = "A-" + o.agent_a;
  const std::string id_b = "B-" + o.agent_b;
  std::vector<pl::MatchResult> results(static_cast<std::size_t>(o.count));
  std::vector<std::exception_ptr> errors(results.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < results.size();) {
      try {
        const std::uint64_t seed = o.seed + i;
        auto a = pl::make_scripted_agent(o.agent_a, id_a, *dex, pl::derive_seed(seed, "agent:" + id_a));
        auto b = pl::make_scripted_agent(o.agent_b, id_b, *dex, pl::derive_seed(seed, "agent:" + id_b));
        pl::MatchContext ctx{&*dex, &cfg, "sim-" + std::to_string(seed), pl::default_pool(*dex)};
        results[i] = pl::run_match(ctx, *a, *b, seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(o.jobs), results.size());
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < workers; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::array<int, 2> wins{};
  long long turns = 0;
  for (const auto& r : results) {
    ++wins[pl::index(r.winner)];
    turns += r.turns;
    if (o.verbose) {
      std::cout << "== " << r.match_id << " (seed " << r.seed << ")\n";
      for (const auto& log : r.logs) print_trace(*dex, log);
      std::cout << "winner: " << r.winner_id << " (" << pl::to_string(r.end_reason) << ", " << r.turns
                << " turns)\n";
    }
  }
  std::cout << "matches: " << o.count << "\n"
            << id_a << ": " << wins[0] << " wins\n"
            << id_b << ": " << wins[1] << " wins\n"
            << "mean turns: " << static_cast<double>(turns) / o.count << "\n";
  if (cfg.write_logs) std::cout << "logs: " << pl::tournament_dir(cfg).string() << "\n";
  return kOk;
}

int cmd_tournament(const std::string& config_path, const std::string& dex_path, const std::string& out, int jobs) {
  pl::TournamentSpec spec;
  try {
    spec = pl::load_tournament_spec(config_path);
    if (!out.empty()) spec.league.output_dir = out;
    if (jobs > 0) spec.league.jobs = jobs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageFailure;
  }
  std::string dex_file = dex_path;
  if (dex_file.empty() && spec.dex_path) dex_file = spec.dex_path->string();
  auto dex = load_dex_or_report(dex_file);
  if (!dex) return kUsageFailure;

  try {
    auto entrants = pl::make_entrants(spec, *dex);
    const auto result = pl::run_tournament(entrants, *dex, spec.league, spec.master_seed);
    pl::write_tournament_outputs(*dex, result, spec.league);
    std::cout << pl::render_standings(result);
    std::cout << "matches: " << result.match_count() << ", outputs: " << pl::tournament_dir(spec.league).string()
              << "\n";
    return kOk;
  } catch (const pl::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageFailure;
  } catch (const pl::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageFailure;
  }
}

int cmd_replay(const std::string& log_path, const std::string& dex_path) {
  auto dex = load_dex_or_report(dex_path);
  if (!dex) return kUsageFailure;
  try {
    const auto r = pl::replay(std::filesystem::path(log_path), *dex);
    std::cout << log_path << ": ok, " << r.checked << " records verified, winner side "
              << (r.winner == pl::Side::A ? "A" : "B") << " ("
              << pl::to_string(*r.final_state.end_reason) << ")\n";
    return kOk;
  } catch (const pl::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageFailure;
  } catch (const pl::DigestMismatch& e) {
    std::cerr << log_path << ": " << e.what() << "\n";
    return kDomainFailure;
  } catch (const pl::IncompleteLog& e) {
    std::cerr << log_path << ": IncompleteLog: " << e.what() << "\n";
    return kDomainFailure;
  } catch (const pl::StorageError& e) {
    std::cerr << log_path << ": " << e.what() << "\n";
    return kDomainFailure;
  }
}

int cmd_report(const std::string& dir, const std::string& out) {
  std::vector<pl::MatchSummary> matches;
  try {
    matches = pl::load_log_dir(dir);
  } catch (const pl::NoLogs& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  } catch (const pl::StorageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  const auto report = pl::build_report(matches);
  const std::filesystem::path target = out.empty() ? std::filesystem::path(dir) : std::filesystem::path(out);
  std::filesystem::create_directories(target);
  std::ofstream(target / "report.json") << pl::to_json(report).dump(2) << "\n";
  std::ofstream(target / "report.txt") << pl::render_table(report);
  std::ofstream(target / "pick_frequency.csv") << pl::pick_frequency_csv(report);
  std::cout << pl::render_table(report);
  std::cout << "report: " << (target / "report.json").string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pokeleague: battle engine and single-elimination tournament harness"};
  app.require_subcommand(1);

  auto* dex_cmd = app.add_subcommand("dex", "Dex data commands");
  dex_cmd->require_subcommand(1);
  std::string validate_path;
  auto* validate = dex_cmd->add_subcommand("validate", "Load and validate a dex file");
  validate->add_option("path", validate_path, "Dex JSON (default: bundled)");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run seeded matches between scripted agents");
  simulate->add_option("--a", sim.agent_a, "Side A agent: greedy or random")->capture_default_str();
  simulate->add_option("--b", sim.agent_b, "Side B agent: greedy or random")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "First match seed; match i uses seed + i")->capture_default_str();
  simulate->add_option("--count", sim.count, "Number of matches")->capture_default_str();
  simulate->add_option("--dex", sim.dex, "Dex JSON (default: bundled)");
  simulate->add_option("--out", sim.out, "Output directory for logs")->capture_default_str();
  simulate->add_option("--jobs", sim.jobs, "Concurrent matches")->capture_default_str();
  simulate->add_option("--turn-cap", sim.turn_cap, "Turn cap per battle")->capture_default_str();
  simulate->add_flag("--verbose,-v", sim.verbose, "Print a per-turn event trace");
  simulate->add_flag("--no-logs", sim.no_logs, "Do not write match logs");

  std::string tour_config, tour_dex, tour_out;
  int tour_jobs = 0;
  auto* tournament = app.add_subcommand("tournament", "Run a single-elimination tournament from a config file");
  tournament->add_option("config", tour_config, "Tournament config JSON")->required();
  tournament->add_option("--dex", tour_dex, "Dex JSON (overrides the config)");
  tournament->add_option("--out", tour_out, "Output directory (overrides the config)");
  tournament->add_option("--jobs", tour_jobs, "Concurrent matches per round (overrides the config)");

  std::string replay_log, replay_dex;
  auto* replay = app.add_subcommand("replay", "Re-run a match log and verify every digest");
  replay->add_option("log", replay_log, "Match log (.jsonl)")->required();
  replay->add_option("--dex", replay_dex, "Dex JSON (default: bundled)");

  std::string report_dir, report_out;
  auto* report = app.add_subcommand("report", "Compute metrics over a directory of match logs");
  report->add_option("dir", report_dir, "Directory searched recursively for .jsonl logs")->required();
  report->add_option("--out", report_out, "Where to write report.json, report.txt, pick_frequency.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageFailure;
  }

  try {
    if (*validate) return cmd_dex_validate(validate_path);
    if (*simulate) return cmd_simulate(sim);
    if (*tournament) return cmd_tournament(tour_config, tour_dex, tour_out, tour_jobs);
    if (*replay) return cmd_replay(replay_log, replay_dex);
    if (*report) return cmd_report(report_dir, report_out);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageFailure;
  } catch (const pl::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  return kUsageFailure;
}
