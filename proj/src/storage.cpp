#include "pokeleague/storage.hpp"

#include "pokeleague/serialize.hpp"

namespace pokeleague {

using json = nlohmann::json;

std::string_view to_string(DecisionPhase p) {
  switch (p) {
    case DecisionPhase::TeamSelect: return "TeamSelect";
    case DecisionPhase::Battle: return "Battle";
    case DecisionPhase::ForcedReplace: return "ForcedReplace";
  }
  return "?";
}

std::optional<DecisionPhase> parse_decision_phase(std::string_view s) {
  for (auto p : {DecisionPhase::TeamSelect, DecisionPhase::Battle, DecisionPhase::ForcedReplace})
    if (to_string(p) == s) return p;
  return std::nullopt;
}

MatchLog::MatchLog(std::filesystem::path path) : path_(std::move(path)) {
  std::error_code ec;
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path(), ec);
  out_.open(path_, std::ios::out | std::ios::trunc);
  if (!out_) throw IoError("cannot open log for writing: " + path_.string());
}

MatchLog::~MatchLog() {
  if (out_.is_open()) out_.close();
}

void MatchLog::append(json record) {
  if (!out_.is_open()) throw IoError("log is closed: " + path_.string());
  if (!record.contains("schema_version")) record["schema_version"] = kLogSchemaVersion;
  out_ << record.dump() << '\n';
  out_.flush();
  if (!out_) throw IoError("write failed: " + path_.string());
  ++lines_;
}

void MatchLog::close() {
  if (out_.is_open()) out_.close();
}

void check_record(const json& r) {
  if (!r.is_object()) throw SchemaError("log record is not an object");
  const auto kind = r.value("kind", std::string());
  if (kind != "meta" && kind != "decision" && kind != "events")
    throw SchemaError("unknown record kind \"" + kind + "\"");
  if (!r.contains("schema_version") || !r["schema_version"].is_string())
    throw SchemaError("record without schema_version");
  const auto version = r["schema_version"].get<std::string>();
  int major = -1;
  try {
    major = std::stoi(version.substr(0, version.find('.')));
  } catch (const std::exception&) {
    throw SchemaError("unparseable schema_version \"" + version + "\"");
  }
  if (major != kLogSchemaMajor) throw SchemaError("unsupported schema major version " + version);
}

std::vector<json> read_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open log: " + path.string());
  std::vector<json> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    auto j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw SchemaError(path.string() + ":" + std::to_string(n) + ": not valid JSON");
    check_record(j);
    out.push_back(std::move(j));
  }
  return out;
}

namespace {

Team team_from_names(const Dex& dex, const json& names) {
  if (!names.is_array() || names.size() != kTeamSize) throw SchemaError("team must list 6 species");
  Team t{};
  for (std::size_t i = 0; i < kTeamSize; ++i) {
    const auto name = names[i].get<std::string>();
    auto id = dex.find_species(name);
    if (!id) throw SchemaError("unknown species in log: " + name);
    t[i] = *id;
  }
  return t;
}

void expect_digest(const json& rec, const char* key, std::uint64_t actual, int turn) {
  if (!rec.contains(key)) throw SchemaError(std::string("events record without ") + key);
  const auto logged = rec[key].get<std::string>();
  if (logged != to_hex(actual))
    throw DigestMismatch(turn, std::string(key) + " logged " + logged + ", recomputed " + to_hex(actual));
}

void expect_events(const json& rec, const std::vector<Event>& events, int turn) {
  if (rec.value("events", json::array()) != to_json(events))
    throw DigestMismatch(turn, "recomputed events differ from the log");
}

}  // namespace

ReplayResult replay(std::span<const json> records, const Dex& dex, const ReplayVisitor& visit) {
  const json* header = nullptr;
  for (const auto& r : records) {
    check_record(r);
    if (r["kind"] == "meta" && r.value("type", "") == "header") {
      header = &r;
      break;
    }
  }
  if (!header) throw IncompleteLog("log has no header record");
  if (header->contains("dex_hash") && (*header)["dex_hash"].get<std::string>() != to_hex(dex.content_hash()))
    throw SchemaError("log was written with a different dex (hash " + (*header)["dex_hash"].get<std::string>() +
                      ")");
  const auto seed = from_hex(header->at("seed").get<std::string>());
  const int turn_cap = header->value("turn_cap", kDefaultTurnCap);

  std::optional<BattleState> state;
  ReplayResult out;
  for (const auto& r : records) {
    if (r["kind"] != "events") continue;
    const int turn = r.at("turn").get<int>();
    if (!state) {
      if (turn != 0 || !r.contains("teams")) throw IncompleteLog("first events record must be the turn-0 start");
      const auto& teams = r["teams"];
      auto start = start_battle(dex, {team_from_names(dex, teams.at(0)), team_from_names(dex, teams.at(1))}, seed,
                                turn_cap);
      expect_events(r, start.events, 0);
      expect_digest(r, "post_digest", state_digest(dex, start.state), 0);
      state = std::move(start.state);
      ++out.checked;
      continue;
    }
    if (state->ended()) throw SchemaError("events logged after the battle ended");
    expect_digest(r, "pre_digest", state_digest(dex, *state), turn);
    if (turn != state->turn) throw DigestMismatch(turn, "turn number out of sequence");

    TurnResult next;
    if (r.contains("forfeit")) {
      const auto loser = r["forfeit"].get<int>() == 0 ? Side::A : Side::B;
      if (visit) visit(turn, *state, std::nullopt, std::nullopt);
      next = forfeit(*state, loser);
    } else {
      const auto& actions = r.at("actions");
      Action a, b;
      try {
        a = action_from_json(actions.at(0));
        b = action_from_json(actions.at(1));
      } catch (const std::exception& e) {
        throw SchemaError("bad actions at turn " + std::to_string(turn) + ": " + e.what());
      }
      if (visit) visit(turn, *state, a, b);
      try {
        next = resolve_turn(dex, *state, a, b);
      } catch (const BattleError& e) {
        throw DigestMismatch(turn, e.what());
      }
      ++out.turns;
    }
    expect_events(r, next.events, turn);
    expect_digest(r, "post_digest", state_digest(dex, next.state), turn);
    state = std::move(next.state);
    ++out.checked;
  }
  if (!state) throw IncompleteLog("log has no events");
  if (!state->ended()) throw IncompleteLog("log ends before the battle ended (turn " + std::to_string(state->turn) + ")");
  out.winner = *state->winner;
  out.final_state = std::move(*state);
  return out;
}

ReplayResult replay(const std::filesystem::path& path, const Dex& dex, const ReplayVisitor& visit) {
  const auto records = read_log(path);
  return replay(records, dex, visit);
}

}  // namespace pokeleague
