#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pokeleague/battle.hpp"

namespace pokeleague {

// Match logs are JSONL: one object per line with a "kind" of "meta",
// "decision" or "events" and a "schema_version". A complete log reads
//
//   meta(header) decision(team)x2 events(turn 0)
//   [decision x2 events(turn t)]*  meta(result)
//
// Turn 0 carries the lead switch-ins; every later events record carries the
// two actions, the engine events and the state digests around the turn.

inline constexpr const char* kLogSchemaVersion = "1.0";
inline constexpr int kLogSchemaMajor = 1;

class StorageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class IoError : public StorageError {
 public:
  using StorageError::StorageError;
};
class SchemaError : public StorageError {
 public:
  using StorageError::StorageError;
};
class IncompleteLog : public StorageError {
 public:
  using StorageError::StorageError;
};
class DigestMismatch : public StorageError {
 public:
  DigestMismatch(int turn, const std::string& what)
      : StorageError("digest mismatch at turn " + std::to_string(turn) + ": " + what), turn(turn) {}
  int turn;
};

enum class DecisionPhase { TeamSelect, Battle, ForcedReplace };
std::string_view to_string(DecisionPhase p);
std::optional<DecisionPhase> parse_decision_phase(std::string_view s);

/// Append-only writer for one match file. Each append is one flushed line.
class MatchLog {
 public:
  explicit MatchLog(std::filesystem::path path);
  ~MatchLog();
  MatchLog(const MatchLog&) = delete;
  MatchLog& operator=(const MatchLog&) = delete;

  /// Stamps schema_version when missing. Throws IoError after close().
  void append(nlohmann::json record);
  void close();
  bool is_open() const { return out_.is_open(); }
  const std::filesystem::path& path() const { return path_; }
  std::size_t lines() const { return lines_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t lines_ = 0;
};

/// Reads every record and rejects unknown "kind" values and schema majors.
std::vector<nlohmann::json> read_log(const std::filesystem::path& path);

/// Validates one record's envelope; throws SchemaError.
void check_record(const nlohmann::json& record);

struct ReplayResult {
  BattleState final_state;
  Side winner = Side::A;
  int turns = 0;           // resolved turns (forfeits excluded)
  std::size_t checked = 0;  // events records verified
};

/// Called before each logged turn is resolved, with the state the actions were chosen against.
using ReplayVisitor = std::function<void(int turn, const BattleState& pre, std::optional<Action> a,
                                         std::optional<Action> b)>;

/// Re-runs the logged match through the engine, checking every digest and
/// event list. Throws DigestMismatch, IncompleteLog or SchemaError.
ReplayResult replay(std::span<const nlohmann::json> records, const Dex& dex, const ReplayVisitor& visit = {});
ReplayResult replay(const std::filesystem::path& path, const Dex& dex, const ReplayVisitor& visit = {});

}  // namespace pokeleague
