#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pokeleague/battle.hpp"
#include "pokeleague/exchange.hpp"

namespace pokeleague {

/// Six distinct pool indices.
struct TeamPick {
  std::array<std::size_t, kTeamSize> indices{};
  friend bool operator==(const TeamPick&, const TeamPick&) = default;
};

struct AgentDecision {
  std::variant<Action, TeamPick> choice;
  std::string reasoning;
  // LLM agents only: every provider round trip and the repair chain behind it.
  std::vector<RawExchange> exchanges;
  std::vector<std::string> repair_errors;

  const Action& action() const { return std::get<Action>(choice); }
  const TeamPick& team() const { return std::get<TeamPick>(choice); }
};

/// Raised when an agent cannot produce a valid decision; the league decides
/// between fallback and forfeit.
class AgentFailure : public std::runtime_error {
 public:
  AgentFailure(std::string reason, std::vector<RawExchange> exchanges, std::vector<std::string> errors)
      : std::runtime_error(std::move(reason)), exchanges(std::move(exchanges)), errors(std::move(errors)) {}
  std::vector<RawExchange> exchanges;
  std::vector<std::string> errors;
};

/// Draft options shown to an agent: pool index i maps to species[i].
struct PoolView {
  const Dex* dex = nullptr;
  std::vector<SpeciesId> species;
  std::size_t team_size = kTeamSize;
};

PoolView default_pool(const Dex& dex);

class Agent {
 public:
  virtual ~Agent() = default;
  virtual const std::string& id() const = 0;
  virtual AgentDecision select_team(const PoolView& pool) = 0;
  virtual AgentDecision choose_action(const BattleView& view, std::span<const Action> legal) = 0;
};

/// Uniform over legal actions. Every decision is seeded from (seed, inputs),
/// so identical inputs always give identical decisions.
class RandomAgent final : public Agent {
 public:
  RandomAgent(std::string id, const Dex& dex, std::uint64_t seed);
  const std::string& id() const override { return id_; }
  AgentDecision select_team(const PoolView& pool) override;
  AgentDecision choose_action(const BattleView& view, std::span<const Action> legal) override;

 private:
  std::string id_;
  const Dex& dex_;
  std::uint64_t seed_;
};

/// Picks the highest expected-damage attack (roll 100, no crit). When nothing
/// can do damage it switches to the teammate with the best type multiplier
/// against the opposing active.
class GreedyAgent final : public Agent {
 public:
  GreedyAgent(std::string id, const Dex& dex);
  const std::string& id() const override { return id_; }
  AgentDecision select_team(const PoolView& pool) override;
  AgentDecision choose_action(const BattleView& view, std::span<const Action> legal) override;

 private:
  std::string id_;
  const Dex& dex_;
};

/// Damage of a move slot with roll 100 and no crit; 0 for status moves.
int expected_damage(const Dex& dex, const BattlerState& attacker, const BattlerState& defender,
                    std::size_t move_slot, Weather weather);

/// Greedy team rule: top six by base-stat total with distinct primary types,
/// ties to the lower pool index, returned in ascending index order.
TeamPick greedy_team(const PoolView& pool);

/// Best type multiplier any damaging move of `species` achieves against `defender`.
double best_multiplier(const Dex& dex, SpeciesId species, SpeciesId defender);

/// League fallbacks when an agent cannot decide.
TeamPick fallback_team();
Action fallback_action(std::span<const Action> legal);

}  // namespace pokeleague
