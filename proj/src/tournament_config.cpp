#include <fstream>
#include <set>

#include "pokeleague/league.hpp"
#include "pokeleague/llm_gateway.hpp"
#include "pokeleague/serialize.hpp"
#include "pokeleague/storage.hpp"

namespace pokeleague {

using json = nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::uint64_t seed_value(const json& j, const char* what) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0) return static_cast<std::uint64_t>(j.get<long long>());
  if (j.is_string()) {
    try {
      return std::stoull(j.get<std::string>(), nullptr, 0);
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(std::string(what) + " must be a non-negative integer");
}

}  // namespace

TournamentSpec parse_tournament_spec(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("tournament config must be a JSON object");
  TournamentSpec s;
  s.base_dir = base_dir;
  try {
    auto& l = s.league;
    l.tournament_id = j.value("tournament_id", l.tournament_id);
    l.best_of = j.value("best_of", l.best_of);
    l.turn_cap = j.value("turn_cap", l.turn_cap);
    l.disqualify_on_failure = j.value("disqualify_on_failure", l.disqualify_on_failure);
    l.draft_once = j.value("draft_once", l.draft_once);
    l.jobs = j.value("jobs", l.jobs);
    l.include_history = j.value("include_history", l.include_history);
    l.write_logs = j.value("write_logs", l.write_logs);
    if (j.contains("output_dir")) l.output_dir = resolve(base_dir, j["output_dir"].get<std::string>());
    s.max_repair_attempts = j.value("max_repair_attempts", s.max_repair_attempts);
    s.master_seed = j.contains("master_seed") ? seed_value(j["master_seed"], "master_seed") : 0;
    if (j.contains("dex")) s.dex_path = resolve(base_dir, j["dex"].get<std::string>());
    if (j.contains("pool")) s.pool_names = j["pool"].get<std::vector<std::string>>();
    s.providers = j.value("providers", json::object());
    s.entrants = j.value("entrants", json::array());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed tournament config: ") + e.what());
  }
  if (!s.providers.is_object()) throw ConfigError("\"providers\" must be an object");
  if (!s.entrants.is_array() || s.entrants.empty()) throw ConfigError("\"entrants\" must be a non-empty list");
  if (s.max_repair_attempts < 0) throw ConfigError("max_repair_attempts must be >= 0");
  validate(s.league);

  const auto n = s.entrants.size();
  if (n < 2 || (n & (n - 1)) != 0)
    throw ConfigError("entrant count must be a power of two >= 2, got " + std::to_string(n));
  std::set<std::string> ids;
  for (const auto& e : s.entrants) {
    if (!e.is_object() || !e.contains("id") || !e["id"].is_string()) throw ConfigError("every entrant needs an \"id\"");
    if (!ids.insert(e["id"].get<std::string>()).second)
      throw ConfigError("duplicate entrant id " + e["id"].get<std::string>());
  }
  return s;
}

TournamentSpec load_tournament_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open tournament config: " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError(path.string() + ": not valid JSON");
  return parse_tournament_spec(j, path.parent_path());
}

std::unique_ptr<Agent> make_scripted_agent(const std::string& kind, const std::string& id, const Dex& dex,
                                           std::uint64_t seed) {
  if (kind == "greedy") return std::make_unique<GreedyAgent>(id, dex);
  if (kind == "random") return std::make_unique<RandomAgent>(id, dex, seed);
  throw ConfigError("unknown scripted agent \"" + kind + "\" (expected greedy or random)");
}

std::vector<Entrant> make_entrants(TournamentSpec& spec, const Dex& dex) {
  spec.league.pool.clear();
  for (const auto& name : spec.pool_names) {
    auto id = dex.find_species(name);
    if (!id) throw ConfigError("pool species not in dex: " + name);
    spec.league.pool.push_back(*id);
  }
  validate(spec.league);

  std::vector<Entrant> out;
  json provider_params = json::object();
  for (const auto& e : spec.entrants) {
    Entrant entrant;
    entrant.id = e["id"].get<std::string>();
    entrant.display_name = e.value("name", entrant.id);
    const auto kind = e.value("kind", std::string("llm"));
    entrant.profile = {{"kind", kind}};

    if (kind == "greedy" || kind == "random") {
      const auto seed = e.contains("seed") ? seed_value(e["seed"], "entrant seed")
                                           : derive_seed(spec.master_seed, "agent:" + entrant.id);
      entrant.agent = make_scripted_agent(kind, entrant.id, dex, seed);
      entrant.profile["seed"] = to_hex(seed);
    } else if (kind == "llm" || kind == "mock") {
      ProviderConfig cfg;
      std::string provider_name;
      try {
        if (kind == "mock") {
          provider_name = "mock:" + entrant.id;
          json p = {{"kind", "mock"}, {"script", e.value("script", std::string())}};
          cfg = provider_from_json(p, spec.base_dir);
        } else {
          provider_name = e.value("provider", std::string());
          if (!spec.providers.contains(provider_name))
            throw ConfigError("entrant " + entrant.id + " names unknown provider \"" + provider_name + "\"");
          json p = spec.providers[provider_name];
          // per-entrant overrides of the shared provider settings
          for (const char* key : {"model", "temperature", "max_tokens", "timeout_s", "max_retries", "script"})
            if (e.contains(key)) p[key] = e[key];
          cfg = provider_from_json(p, spec.base_dir);
        }
      } catch (const std::invalid_argument& err) {
        throw ConfigError("entrant " + entrant.id + ": " + err.what());
      } catch (const json::exception& err) {
        throw ConfigError("entrant " + entrant.id + ": " + err.what());
      }
      GatewayOptions opts;
      opts.max_repair_attempts = spec.max_repair_attempts;
      opts.include_history = spec.league.include_history;
      std::unique_ptr<ChatClient> client;
      try {
        client = make_chat_client(provider_name, cfg);
      } catch (const std::exception& err) {
        throw ConfigError("entrant " + entrant.id + ": " + err.what());
      }
      entrant.agent = std::make_shared<LlmAgent>(entrant.id, dex, std::move(client), opts);
      json params = to_json(cfg);
      params.erase("script");
      entrant.profile["provider"] = provider_name;
      entrant.profile["params"] = params;
      provider_params[entrant.id] = params;
    } else {
      throw ConfigError("entrant " + entrant.id + " has unknown kind \"" + kind + "\"");
    }
    out.push_back(std::move(entrant));
  }
  spec.league.provider_params = provider_params;
  return out;
}

}  // namespace pokeleague
