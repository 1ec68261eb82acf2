#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "pokeleague/agents.hpp"
#include "pokeleague/analytics.hpp"
#include "pokeleague/league.hpp"
#include "pokeleague/llm_gateway.hpp"
#include "pokeleague/serialize.hpp"
#include "pokeleague/storage.hpp"

namespace py = pybind11;
namespace pl = pokeleague;
using json = nlohmann::json;

namespace {

pl::Type type_named(const std::string& name) {
  auto t = pl::parse_type(name);
  if (!t) throw py::value_error("unknown type: " + name);
  return *t;
}

pl::SpeciesId species_named(const pl::Dex& dex, const std::string& name) {
  auto s = dex.find_species(name);
  if (!s) throw py::value_error("unknown species: " + name);
  return *s;
}

pl::Weather weather_named(const std::string& name) {
  for (auto w : {pl::Weather::None, pl::Weather::Rain, pl::Weather::Sun, pl::Weather::Sand})
    if (pl::to_string(w) == name) return w;
  throw py::value_error("unknown weather: " + name);
}

std::string parse_error_text(const pl::ParseError& e) {
  return json{{"kind", pl::to_string(e.kind)}, {"message", e.message}, {"value", e.value}}.dump();
}

std::string simulate(const pl::Dex& dex, const std::string& a, const std::string& b, std::uint64_t seed, int count,
                     int turn_cap) {
  if (count < 1) throw py::value_error("count must be >= 1");
  pl::LeagueConfig cfg;
  cfg.write_logs = false;
  cfg.turn_cap = turn_cap;
  json matches = json::array();
  for (int i = 0; i < count; ++i) {
    const auto s = seed + static_cast<std::uint64_t>(i);
    auto agent_a = pl::make_scripted_agent(a, "A-" + a, dex, pl::derive_seed(s, "agent:A-" + a));
    auto agent_b = pl::make_scripted_agent(b, "B-" + b, dex, pl::derive_seed(s, "agent:B-" + b));
    pl::MatchContext ctx{&dex, &cfg, "sim-" + std::to_string(s), pl::default_pool(dex)};
    matches.push_back(pl::to_json(dex, pl::run_match(ctx, *agent_a, *agent_b, s)));
  }
  return matches.dump();
}

std::string run_tournament_file(const std::filesystem::path& config, const std::filesystem::path& dex_path,
                                const std::optional<std::filesystem::path>& out) {
  auto spec = pl::load_tournament_spec(config);
  if (out) spec.league.output_dir = *out;
  const auto dex = pl::load_dex(spec.dex_path.value_or(dex_path));
  auto entrants = pl::make_entrants(spec, dex);
  py::gil_scoped_release release;
  const auto result = pl::run_tournament(entrants, dex, spec.league, spec.master_seed);
  if (spec.league.write_logs) pl::write_tournament_outputs(dex, result, spec.league);
  return pl::to_json(dex, result).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Deterministic battle engine and tournament harness (native core).";

  py::register_exception<pl::DexError>(m, "DexError", PyExc_ValueError);
  py::register_exception<pl::ConfigError>(m, "ConfigError", PyExc_ValueError);
  auto storage_error = py::register_exception<pl::StorageError>(m, "StorageError", PyExc_RuntimeError);
  py::register_exception<pl::DigestMismatch>(m, "DigestMismatch", storage_error.ptr());
  py::register_exception<pl::IncompleteLog>(m, "IncompleteLog", storage_error.ptr());
  py::register_exception<pl::NoLogs>(m, "NoLogs", PyExc_FileNotFoundError);

  py::class_<pl::Dex>(m, "Dex")
      .def_property_readonly("content_hash", [](const pl::Dex& d) { return pl::to_hex(d.content_hash()); })
      .def("species_names",
           [](const pl::Dex& d) {
             std::vector<std::string> out;
             for (const auto& s : d.species()) out.push_back(s.name);
             return out;
           })
      .def("pool",
           [](const pl::Dex& d) {
             std::vector<std::string> out;
             for (auto id : d.pool()) out.push_back(d.species(id).name);
             return out;
           })
      .def("type_multiplier",
           [](const pl::Dex& d, const std::string& attacker, const std::vector<std::string>& defender) {
             std::vector<pl::Type> types;
             for (const auto& t : defender) types.push_back(type_named(t));
             return pl::type_multiplier(d.chart(), type_named(attacker), types);
           },
           py::arg("attacker"), py::arg("defender"))
      .def("to_json", [](const pl::Dex& d) { return pl::to_json(d).dump(); });

  m.def("load_dex", [](const std::filesystem::path& p) { return pl::load_dex(p); }, py::arg("path"));
  m.def("default_dex_path", &pl::default_dex_path);

  m.def(
      "damage",
      [](const pl::Dex& dex, const std::string& attacker, const std::string& defender, const std::string& move,
         const std::string& weather, bool crit, int roll) {
        if (roll < 85 || roll > 100) throw py::value_error("roll must be in 85..100");
        const auto mv = dex.find_move(move);
        if (!mv) throw py::value_error("unknown move: " + move);
        const auto a = pl::compute_stats(dex, species_named(dex, attacker));
        const auto d = pl::compute_stats(dex, species_named(dex, defender));
        const auto r = pl::compute_damage(dex, a, d, dex.move(*mv), {weather_named(weather), crit, roll});
        return py::make_tuple(r.damage, r.effectiveness, r.stab);
      },
      py::arg("dex"), py::arg("attacker"), py::arg("defender"), py::arg("move"), py::arg("weather") = "None",
      py::arg("crit") = false, py::arg("roll") = 100,
      "Damage of `move` between two level-50 species at full stats; returns (damage, effectiveness, stab).");

  m.def("simulate", &simulate, py::arg("dex"), py::arg("a") = "greedy", py::arg("b") = "random",
        py::arg("seed") = 1, py::arg("count") = 1, py::arg("turn_cap") = pl::kDefaultTurnCap);

  m.def("run_tournament", &run_tournament_file, py::arg("config"), py::arg("dex_path"),
        py::arg("output_dir") = std::nullopt);

  m.def(
      "replay",
      [](const pl::Dex& dex, const std::filesystem::path& log) {
        const auto r = pl::replay(log, dex);
        return json{{"winner", pl::index(r.winner)},
                    {"turns", r.turns},
                    {"checked", r.checked},
                    {"final_digest", pl::to_hex(pl::state_digest(dex, r.final_state))}}
            .dump();
      },
      py::arg("dex"), py::arg("log"));

  m.def(
      "parse_team_response",
      [](const std::string& text, std::size_t pool_size) -> std::string {
        const auto r = pl::parse_team_response(text, pool_size);
        if (auto* e = std::get_if<pl::ParseError>(&r)) throw py::value_error(parse_error_text(*e));
        const auto& t = std::get<pl::ParsedTeam>(r);
        return json{{"team", t.team.indices}, {"reasoning", t.reasoning}}.dump();
      },
      py::arg("text"), py::arg("pool_size"));

  m.def(
      "parse_action_response",
      [](const std::string& text, const std::string& legal_json) -> std::string {
        std::vector<pl::Action> legal;
        for (const auto& a : json::parse(legal_json)) legal.push_back(pl::action_from_json(a));
        const auto r = pl::parse_action_response(text, legal);
        if (auto* e = std::get_if<pl::ParseError>(&r)) throw py::value_error(parse_error_text(*e));
        const auto& a = std::get<pl::ParsedAction>(r);
        return json{{"action", pl::to_json(a.action)}, {"reasoning", a.reasoning}}.dump();
      },
      py::arg("text"), py::arg("legal_json"));

  m.def(
      "report",
      [](const std::filesystem::path& dir) { return pl::to_json(pl::build_report(pl::load_log_dir(dir))).dump(); },
      py::arg("log_dir"));

  m.def(
      "pick_frequency",
      [](const std::vector<std::vector<std::string>>& teams) { return pl::pick_frequency(teams); },
      py::arg("teams"));
}
