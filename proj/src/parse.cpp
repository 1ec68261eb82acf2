#include <algorithm>
#include <set>

#include "pokeleague/llm_gateway.hpp"
#include "pokeleague/serialize.hpp"

namespace pokeleague {

using json = nlohmann::json;

std::string_view to_string(ParseError::Kind k) {
  switch (k) {
    case ParseError::Kind::NoJsonFound: return "NoJsonFound";
    case ParseError::Kind::WrongArity: return "WrongArity";
    case ParseError::Kind::IndexOutOfRange: return "IndexOutOfRange";
    case ParseError::Kind::DuplicateIndex: return "DuplicateIndex";
    case ParseError::Kind::UnknownActionType: return "UnknownActionType";
    case ParseError::Kind::IllegalAction: return "IllegalAction";
    case ParseError::Kind::MalformedField: return "MalformedField";
  }
  return "?";
}

namespace {

// Scans a balanced {...} starting at `open`. Raw control characters inside
// string literals are escaped on the way, since models often break long
// strings across lines.
std::optional<std::string> balanced_object(std::string_view text, std::size_t open) {
  std::string out;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
        out += c;
      } else if (c == '\\') {
        escaped = true;
        out += c;
      } else if (c == '"') {
        in_string = false;
        out += c;
      } else if (c == '\n') {
        out += "\\n";
      } else if (c == '\r') {
        out += "\\r";
      } else if (c == '\t') {
        out += "\\t";
      } else {
        out += c;
      }
      continue;
    }
    out += c;
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return out;
    }
  }
  return std::nullopt;
}

ParseError error(ParseError::Kind kind, std::string message, long long value = 0) {
  return ParseError{kind, value, std::move(message)};
}

std::string reasoning_of(const json& obj) {
  if (!obj.contains("reasoning")) return {};
  const auto& r = obj["reasoning"];
  return r.is_string() ? r.get<std::string>() : r.dump();
}

}  // namespace

std::optional<json> extract_first_json_object(std::string_view text) {
  for (std::size_t pos = text.find('{'); pos != std::string_view::npos; pos = text.find('{', pos + 1)) {
    auto candidate = balanced_object(text, pos);
    if (!candidate) continue;
    auto parsed = json::parse(*candidate, nullptr, false);
    if (!parsed.is_discarded() && parsed.is_object()) return parsed;
  }
  return std::nullopt;
}

ParseResult<ParsedTeam> parse_team_response(std::string_view raw, std::size_t pool_size) {
  auto obj = extract_first_json_object(raw);
  if (!obj) return error(ParseError::Kind::NoJsonFound, "no JSON object found in response");
  if (!obj->contains("team") || !(*obj)["team"].is_array())
    return error(ParseError::Kind::MalformedField, "\"team\" must be a list of integers");
  const auto& team = (*obj)["team"];
  if (team.size() != kTeamSize)
    return error(ParseError::Kind::WrongArity,
                 "\"team\" must contain exactly 6 indices, got " + std::to_string(team.size()),
                 static_cast<long long>(team.size()));

  ParsedTeam out;
  std::set<long long> seen;
  for (std::size_t i = 0; i < team.size(); ++i) {
    if (!team[i].is_number_integer())
      return error(ParseError::Kind::MalformedField, "team entry " + team[i].dump() + " is not an integer");
    const long long v = team[i].get<long long>();
    if (v < 0 || v >= static_cast<long long>(pool_size))
      return error(ParseError::Kind::IndexOutOfRange,
                   "index " + std::to_string(v) + " is outside 0.." + std::to_string(pool_size - 1), v);
    if (!seen.insert(v).second)
      return error(ParseError::Kind::DuplicateIndex, "index " + std::to_string(v) + " appears more than once", v);
    out.team.indices[i] = static_cast<std::size_t>(v);
  }
  out.reasoning = reasoning_of(*obj);
  return out;
}

ParseResult<ParsedAction> parse_action_response(std::string_view raw, std::span<const Action> legal) {
  auto obj = extract_first_json_object(raw);
  if (!obj) return error(ParseError::Kind::NoJsonFound, "no JSON object found in response");

  // Some models put the action fields at top level.
  const json& action = obj->contains("action") ? (*obj)["action"] : *obj;
  if (!action.is_object() || !action.contains("type") || !action["type"].is_string())
    return error(ParseError::Kind::MalformedField, "\"action\" must be an object with a string \"type\"");
  const auto type = action["type"].get<std::string>();
  if (type != "attack" && type != "switch")
    return error(ParseError::Kind::UnknownActionType,
                 "unknown action type \"" + type + "\"; use \"attack\" or \"switch\"");

  Action parsed;
  try {
    parsed = action_from_json(action);
  } catch (const std::invalid_argument& e) {
    return error(ParseError::Kind::MalformedField, e.what());
  }
  if (std::find(legal.begin(), legal.end(), parsed) == legal.end()) {
    std::string options;
    for (const auto& a : legal) options += (options.empty() ? "" : ", ") + describe(a);
    return error(ParseError::Kind::IllegalAction,
                 describe(parsed) + " is not a legal action; legal actions are: " + options,
                 static_cast<long long>(parsed.index));
  }
  return ParsedAction{parsed, reasoning_of(*obj)};
}

std::string render_action_response(const Action& action, const std::string& reasoning) {
  return json{{"action", to_json(action)}, {"reasoning", reasoning}}.dump();
}

}  // namespace pokeleague
