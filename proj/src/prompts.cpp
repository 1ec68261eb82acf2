#include <sstream>

#include "pokeleague/llm_gateway.hpp"

namespace pokeleague {

const std::string kSystemPrompt =
    "You are a Pokémon battle assistant. Answer each request with a single JSON object in the requested "
    "format.";

const std::string kRepairSuffix = "Respond with only the JSON object.";

namespace {

std::string types_text(const Species& s) {
  std::string out;
  for (std::size_t i = 0; i < s.types.size(); ++i) {
    if (i) out += "/";
    out += to_string(s.types[i]);
  }
  return out;
}

std::string status_text(StatusKind s, bool fainted) {
  if (fainted) return "Fainted";
  switch (s) {
    case StatusKind::None: return "Healthy";
    case StatusKind::Burn: return "Burned";
    case StatusKind::Poison: return "Poisoned";
    case StatusKind::Paralysis: return "Paralyzed";
    case StatusKind::Sleep: return "Asleep";
    case StatusKind::Freeze: return "Frozen";
  }
  return "Healthy";
}

std::string move_text(const MoveDef& m) {
  std::ostringstream os;
  os << m.name << " (" << to_string(m.type) << ", " << to_string(m.category);
  if (m.damaging()) os << ", power " << m.power;
  if (m.accuracy)
    os << ", accuracy " << *m.accuracy;
  else
    os << ", never misses";
  if (m.priority != 0) os << ", priority " << (m.priority > 0 ? "+" : "") << m.priority;
  if (m.effect) {
    os << ", ";
    if (m.effect->chance < 1.0) os << static_cast<int>(m.effect->chance * 100.0 + 0.5) << "% chance to ";
    os << "inflict " << to_string(m.effect->status);
  }
  os << ")";
  return os.str();
}

}  // namespace

std::string build_team_prompt(const PoolView& pool) {
  const Dex& dex = *pool.dex;
  std::ostringstream os;
  os << "Select " << pool.team_size
     << " Pokémon from the list below. Consider type coverage, weaknesses, and synergy. Provide a brief "
        "explanation for your team composition.\n";
  for (std::size_t i = 0; i < pool.species.size(); ++i) {
    const auto& s = dex.species(pool.species[i]);
    const auto& b = s.base;
    os << i << ". " << s.name << " (" << types_text(s) << ") - HP " << b.hp << ", Atk " << b.atk << ", Def "
       << b.def << ", SpA " << b.spa << ", SpD " << b.spd << ", Spe " << b.spe << " - Moves: ";
    for (std::size_t k = 0; k < 4; ++k) os << (k ? ", " : "") << dex.move(s.moves[k]).name;
    if (s.auto_weather) os << " - Sets " << to_string(*s.auto_weather) << " on entry";
    os << "\n";
  }
  os << "Respond with a JSON object with exactly two keys: \"team\", a list of " << pool.team_size
     << " distinct indices from the list above, and \"reasoning\", a brief explanation. Example: "
        "{\"team\": [0, 1, 2, 3, 4, 5], \"reasoning\": \"...\"}";
  return os.str();
}

std::string build_battle_prompt(const Dex& dex, const BattleView& view, std::span<const Action> legal,
                                bool include_history) {
  const auto& own = view.team[view.active];
  const auto& own_species = dex.species(own.species);
  const auto& opp_species = dex.species(view.opponent.active_species);

  std::ostringstream os;
  os << "You are in a battle. Your active Pokémon: " << own_species.name << " (HP: " << own.hp_percent
     << "%, Status: " << status_text(own.status, own.fainted) << ").\n";
  os << "Opponent's active Pokémon: " << opp_species.name << " (HP: " << view.opponent.hp_percent
     << "%, Status: " << status_text(view.opponent.status, view.opponent.fainted) << ").\n";
  os << "Turn: " << view.turn << ". Weather: " << to_string(view.weather.kind) << ".\n";
  os << "Your active Pokémon's types: " << types_text(own_species)
     << ". Opponent's active Pokémon's types: " << types_text(opp_species) << ".\n";
  os << "Opponent's revealed Pokémon: ";
  for (std::size_t i = 0; i < view.opponent.revealed.size(); ++i)
    os << (i ? ", " : "") << dex.species(view.opponent.revealed[i]).name;
  os << ".\n";
  if (view.forced_replacement) os << "Your active Pokémon has fainted. You must switch in a replacement.\n";

  os << "Your team:\n";
  for (const auto& b : view.team) {
    const auto& s = dex.species(b.species);
    os << "- [" << b.slot << "] " << s.name << " (" << types_text(s) << ") HP " << b.hp_percent << "% "
       << status_text(b.status, b.fainted) << (b.active ? ", active" : "") << "\n";
  }

  os << "Legal actions:\n";
  for (const auto& a : legal) {
    if (a.is_attack()) {
      os << "- attack move_index " << a.index << ": " << move_text(dex.move_of(own.species, a.index)) << "\n";
    } else {
      const auto& b = view.team[a.index];
      const auto& s = dex.species(b.species);
      os << "- switch team_index " << a.index << ": " << s.name << " (" << types_text(s) << ", HP "
         << b.hp_percent << "%)\n";
    }
  }

  if (include_history && !view.last_turn.empty()) {
    os << "Last turn:\n";
    for (const auto& line : view.last_turn) os << "- " << line << "\n";
  }

  os << "What do you do? Choose a move or switch, and explain your reasoning.\n";
  os << "Respond with a JSON object with exactly two keys: \"action\", either {\"type\": \"attack\", "
        "\"move_index\": <int>} or {\"type\": \"switch\", \"team_index\": <int>}, and \"reasoning\", a brief "
        "explanation.";
  return os.str();
}

std::string build_repair_prompt(const std::string& original, const std::string& error) {
  return original + "\n\nYour previous response was invalid: " + error + "\n" + kRepairSuffix;
}

}  // namespace pokeleague
