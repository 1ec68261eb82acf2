#include "pokeleague/agents.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "pokeleague/serialize.hpp"

namespace pokeleague {

std::string_view to_string(ExchangeStatus s) {
  switch (s) {
    case ExchangeStatus::Ok: return "Ok";
    case ExchangeStatus::AuthError: return "AuthError";
    case ExchangeStatus::Timeout: return "Timeout";
    case ExchangeStatus::RateLimited: return "RateLimited";
    case ExchangeStatus::ProviderError: return "ProviderError";
  }
  return "?";
}

nlohmann::json to_json(const RawExchange& x) {
  return {{"system", x.system},
          {"prompt", x.prompt},
          {"response", x.response},
          {"latency_ms", x.latency_ms},
          {"attempt", x.attempt},
          {"status", to_string(x.status)},
          {"http_status", x.http_status},
          {"error", x.error},
          {"parse_outcome", x.parse_outcome}};
}

PoolView default_pool(const Dex& dex) {
  PoolView p;
  p.dex = &dex;
  p.species.assign(dex.pool().begin(), dex.pool().end());
  return p;
}

int expected_damage(const Dex& dex, const BattlerState& attacker, const BattlerState& defender,
                    std::size_t move_slot, Weather weather) {
  const MoveDef& move = dex.move_of(attacker.species, move_slot);
  if (!move.damaging()) return 0;
  return compute_damage(dex, attacker, defender, move, {weather, false, 100}).damage;
}

double best_multiplier(const Dex& dex, SpeciesId species, SpeciesId defender) {
  const auto& def_types = dex.species(defender).types;
  double best = 0.0;
  for (MoveId m : dex.species(species).moves) {
    const MoveDef& move = dex.move(m);
    if (move.damaging()) best = std::max(best, type_multiplier(dex.chart(), move.type, def_types));
  }
  return best;
}

TeamPick greedy_team(const PoolView& pool) {
  const Dex& dex = *pool.dex;
  std::vector<std::size_t> order(pool.species.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dex.species(pool.species[a]).base.total() > dex.species(pool.species[b]).base.total();
  });

  std::vector<std::size_t> picked;
  std::set<Type> primaries;
  for (std::size_t i : order) {
    if (picked.size() == kTeamSize) break;
    if (primaries.insert(dex.species(pool.species[i]).types.front()).second) picked.push_back(i);
  }
  // Not enough distinct primary types: fill by the same ranking.
  for (std::size_t i : order) {
    if (picked.size() == kTeamSize) break;
    if (std::find(picked.begin(), picked.end(), i) == picked.end()) picked.push_back(i);
  }
  std::sort(picked.begin(), picked.end());
  TeamPick t;
  std::copy_n(picked.begin(), kTeamSize, t.indices.begin());
  return t;
}

TeamPick fallback_team() {
  TeamPick t;
  std::iota(t.indices.begin(), t.indices.end(), 0);
  return t;
}

Action fallback_action(std::span<const Action> legal) { return *std::min_element(legal.begin(), legal.end()); }

RandomAgent::RandomAgent(std::string id, const Dex& dex, std::uint64_t seed)
    : id_(std::move(id)), dex_(dex), seed_(seed) {}

AgentDecision RandomAgent::select_team(const PoolView& pool) {
  std::string key;
  for (SpeciesId s : pool.species) key += dex_.species(s).name + ";";
  Rng rng(derive_seed(seed_, "team:" + key));

  std::vector<std::size_t> idx(pool.species.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);

  TeamPick t;
  std::copy_n(idx.begin(), kTeamSize, t.indices.begin());
  return {t, "", {}, {}};
}

AgentDecision RandomAgent::choose_action(const BattleView& view, std::span<const Action> legal) {
  std::string key = to_json(dex_, view).dump();
  for (const auto& a : legal) key += describe(a);
  Rng rng(derive_seed(seed_, key));
  return {legal[rng.below(legal.size())], "", {}, {}};
}

GreedyAgent::GreedyAgent(std::string id, const Dex& dex) : id_(std::move(id)), dex_(dex) {}

AgentDecision GreedyAgent::select_team(const PoolView& pool) {
  return {greedy_team(pool), "top base-stat totals with distinct primary types", {}, {}};
}

AgentDecision GreedyAgent::choose_action(const BattleView& view, std::span<const Action> legal) {
  const auto& own = view.team[view.active];
  BattlerState attacker = compute_stats(dex_, own.species);
  attacker.current_hp = own.hp;
  attacker.status = own.status;
  const BattlerState defender = compute_stats(dex_, view.opponent.active_species);

  std::optional<Action> best_attack;
  int best_damage = -1;
  for (const auto& a : legal) {
    if (!a.is_attack()) continue;
    const int d = expected_damage(dex_, attacker, defender, a.index, view.weather.kind);
    if (d > best_damage) {
      best_damage = d;
      best_attack = a;
    }
  }
  if (best_attack && best_damage > 0)
    return {*best_attack, "highest expected damage: " + dex_.move_of(own.species, best_attack->index).name, {}, {}};

  std::optional<Action> best_switch;
  double best_mult = -1.0;
  for (const auto& a : legal) {
    if (!a.is_switch()) continue;
    const double m = best_multiplier(dex_, view.team[a.index].species, view.opponent.active_species);
    if (m > best_mult) {
      best_mult = m;
      best_switch = a;
    }
  }
  if (best_switch)
    return {*best_switch, "no damaging option; switching to best matchup", {}, {}};
  return {fallback_action(legal), "no damaging option and no switch available", {}, {}};
}

}  // namespace pokeleague
