#include "pokeleague/serialize.hpp"

#include <cstdio>
#include <stdexcept>

namespace pokeleague {

using json = nlohmann::json;

namespace {

json weather_json(const WeatherState& w) {
  return {{"kind", to_string(w.kind)}, {"turns_left", w.turns_left ? json(*w.turns_left) : json(nullptr)}};
}

json stats_json(const Stats& s) {
  return {{"atk", s.atk}, {"def", s.def}, {"spa", s.spa}, {"spd", s.spd}, {"spe", s.spe}};
}

}  // namespace

json to_json(const Dex& dex, const BattleState& state) {
  json sides = json::array();
  for (const auto& st : state.sides) {
    json team = json::array();
    for (const auto& b : st.team) {
      team.push_back({{"species", dex.species(b.species).name},
                      {"hp", b.current_hp},
                      {"max_hp", b.max_hp},
                      {"stats", stats_json(b.stats)},
                      {"status", to_string(b.status)},
                      {"sleep_turns", b.sleep_turns}});
    }
    json revealed = json::array();
    for (std::size_t i = 0; i < kTeamSize; ++i)
      if (st.revealed.test(i)) revealed.push_back(i);
    sides.push_back({{"active", st.active}, {"revealed", revealed}, {"team", team}});
  }
  return {{"sides", sides},
          {"weather", weather_json(state.weather)},
          {"turn", state.turn},
          {"turn_cap", state.turn_cap},
          {"rng", to_hex(state.rng.state())},
          {"winner", state.winner ? json(index(*state.winner)) : json(nullptr)},
          {"end_reason", state.end_reason ? json(to_string(*state.end_reason)) : json(nullptr)}};
}

json to_json(const Action& a) {
  if (a.is_attack()) return {{"type", "attack"}, {"move_index", a.index}};
  return {{"type", "switch"}, {"team_index", a.index}};
}

Action action_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw std::invalid_argument("action must be an object with a string \"type\"");
  const auto type = j["type"].get<std::string>();
  const char* key = type == "attack" ? "move_index" : type == "switch" ? "team_index" : nullptr;
  if (!key) throw std::invalid_argument("unknown action type \"" + type + "\"");
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 0)
    throw std::invalid_argument(std::string("missing or invalid \"") + key + "\"");
  const auto idx = static_cast<std::size_t>(j[key].get<long long>());
  return type == "attack" ? Action::attack(idx) : Action::switch_to(idx);
}

json to_json(const Event& e) {
  json j = {{"kind", to_string(e.kind)}, {"side", index(e.side)}};
  switch (e.kind) {
    case EventKind::Damage:
      j["slot"] = e.slot;
      j["amount"] = e.amount;
      j["effectiveness"] = e.effectiveness;
      j["crit"] = e.crit;
      j["stab"] = e.stab;
      j["move"] = e.detail;
      break;
    case EventKind::StatusDamage:
      j["slot"] = e.slot;
      j["amount"] = e.amount;
      j["status"] = to_string(e.status);
      break;
    case EventKind::WeatherDamage:
      j["slot"] = e.slot;
      j["amount"] = e.amount;
      j["weather"] = to_string(e.weather);
      break;
    case EventKind::StatusInflicted:
      j["slot"] = e.slot;
      j["status"] = to_string(e.status);
      break;
    case EventKind::StatusCured:
      j["slot"] = e.slot;
      j["status"] = to_string(e.status);
      j["detail"] = e.detail;
      break;
    case EventKind::WeatherStarted:
    case EventKind::WeatherEnded:
      j["weather"] = to_string(e.weather);
      if (e.kind == EventKind::WeatherStarted) j["slot"] = e.slot;
      break;
    case EventKind::NoEffect:
      j["slot"] = e.slot;
      j["move"] = e.detail;
      j["effectiveness"] = e.effectiveness;
      break;
    case EventKind::MoveUsed:
    case EventKind::Missed:
      j["slot"] = e.slot;
      j["move"] = e.detail;
      break;
    case EventKind::CantMove:
      j["slot"] = e.slot;
      j["detail"] = e.detail;
      break;
    case EventKind::SwitchIn:
    case EventKind::Fainted:
      j["slot"] = e.slot;
      break;
    case EventKind::BattleEnded:
      j["reason"] = e.detail;
      break;
  }
  return j;
}

json to_json(std::span<const Event> events) {
  json arr = json::array();
  for (const auto& e : events) arr.push_back(to_json(e));
  return arr;
}

json to_json(const Dex& dex, const BattleView& v) {
  json team = json::array();
  for (const auto& b : v.team) {
    const auto& sp = dex.species(b.species);
    json moves = json::array();
    for (MoveId m : sp.moves) moves.push_back(dex.move(m).name);
    team.push_back({{"slot", b.slot},
                    {"species", sp.name},
                    {"hp", b.hp},
                    {"max_hp", b.max_hp},
                    {"hp_percent", b.hp_percent},
                    {"status", to_string(b.status)},
                    {"stats", stats_json(b.stats)},
                    {"moves", moves},
                    {"active", b.active},
                    {"fainted", b.fainted}});
  }
  json revealed = json::array();
  for (SpeciesId s : v.opponent.revealed) revealed.push_back(dex.species(s).name);
  json opp_types = json::array();
  for (Type t : dex.species(v.opponent.active_species).types) opp_types.push_back(to_string(t));
  return {{"side", index(v.side)},
          {"turn", v.turn},
          {"weather", weather_json(v.weather)},
          {"active", v.active},
          {"forced_replacement", v.forced_replacement},
          {"team", team},
          {"opponent",
           {{"species", dex.species(v.opponent.active_species).name},
            {"types", opp_types},
            {"hp_percent", v.opponent.hp_percent},
            {"status", to_string(v.opponent.status)},
            {"fainted", v.opponent.fainted},
            {"revealed", revealed}}},
          {"last_turn", v.last_turn}};
}

std::uint64_t state_digest(const Dex& dex, const BattleState& state) {
  return fnv1a64(to_json(dex, state).dump());
}

std::uint64_t events_digest(std::span<const Event> events) { return fnv1a64(to_json(events).dump()); }

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::uint64_t from_hex(const std::string& hex) {
  std::size_t used = 0;
  const auto v = std::stoull(hex, &used, 16);
  if (used != hex.size()) throw std::invalid_argument("bad hex digest: " + hex);
  return v;
}

}  // namespace pokeleague
