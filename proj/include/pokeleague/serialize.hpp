#pragma once

#include <cstdint>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "pokeleague/battle.hpp"

namespace pokeleague {

// Canonical JSON forms. nlohmann::json keeps object keys sorted, so dump()
// of these values is byte-stable and doubles as the digest input.

nlohmann::json to_json(const Dex& dex, const BattleState& state);
nlohmann::json to_json(const Action& action);
nlohmann::json to_json(const Event& event);
nlohmann::json to_json(std::span<const Event> events);
nlohmann::json to_json(const Dex& dex, const BattleView& view);

/// Accepts the {"type":"attack","move_index":i} / {"type":"switch","team_index":j} shape.
Action action_from_json(const nlohmann::json& j);

std::uint64_t state_digest(const Dex& dex, const BattleState& state);
std::uint64_t events_digest(std::span<const Event> events);

std::string to_hex(std::uint64_t value);
std::uint64_t from_hex(const std::string& hex);

}  // namespace pokeleague
