#include "pokeleague/battle.hpp"

#include <algorithm>
#include <sstream>

namespace pokeleague {
namespace {

using Events = std::vector<Event>;

Event make_event(EventKind kind, Side side, std::size_t slot) {
  Event e;
  e.kind = kind;
  e.side = side;
  e.slot = slot;
  return e;
}

const Species& species_of(const Dex& dex, const BattlerState& b) { return dex.species(b.species); }

// true when `first` acts before `second` on speed alone; ties go to a coin flip.
bool faster_first(BattleState& s, Side first, Side second) {
  const int a = effective_speed(s.side(first).active_battler());
  const int b = effective_speed(s.side(second).active_battler());
  if (a != b) return a > b;
  return s.rng.coin();
}

void switch_in(const Dex& dex, BattleState& s, Side side, std::size_t slot, Events& ev) {
  auto& st = s.side(side);
  st.active = slot;
  st.revealed.set(slot);
  ev.push_back(make_event(EventKind::SwitchIn, side, slot));

  const auto& sp = species_of(dex, st.active_battler());
  if (sp.auto_weather && s.weather.kind != *sp.auto_weather) {
    s.weather = {*sp.auto_weather, std::nullopt};
    Event e = make_event(EventKind::WeatherStarted, side, slot);
    e.weather = *sp.auto_weather;
    ev.push_back(e);
  }
}

void apply_hp_loss(BattleState& s, Side side, int amount, Event e, Events& ev) {
  auto& st = s.side(side);
  auto& b = st.active_battler();
  const int applied = std::clamp(amount, 0, b.current_hp);
  b.current_hp -= applied;
  e.amount = applied;
  ev.push_back(e);
  if (b.fainted()) {
    b.status = StatusKind::None;
    b.sleep_turns = 0;
    ev.push_back(make_event(EventKind::Fainted, side, st.active));
  }
}

void inflict(BattleState& s, Side target, StatusKind status, Events& ev) {
  auto& st = s.side(target);
  auto& b = st.active_battler();
  b.status = status;
  b.sleep_turns = status == StatusKind::Sleep ? s.rng.range(1, 4) : 0;
  Event e = make_event(EventKind::StatusInflicted, target, st.active);
  e.status = status;
  ev.push_back(e);
}

void cure(BattleState& s, Side side, const char* why, Events& ev) {
  auto& st = s.side(side);
  Event e = make_event(EventKind::StatusCured, side, st.active);
  e.status = st.active_battler().status;
  e.detail = why;
  st.active_battler().status = StatusKind::None;
  st.active_battler().sleep_turns = 0;
  ev.push_back(e);
}

void cant_move(BattleState& s, Side side, const char* why, Events& ev) {
  Event e = make_event(EventKind::CantMove, side, s.side(side).active);
  e.detail = why;
  ev.push_back(e);
}

// Pre-move status gates. Returns false when the battler loses its turn.
bool may_act(BattleState& s, Side side, Events& ev) {
  auto& b = s.side(side).active_battler();
  switch (b.status) {
    case StatusKind::Sleep:
      if (b.sleep_turns == 0) {
        cure(s, side, "woke up", ev);
        return true;
      }
      --b.sleep_turns;
      cant_move(s, side, "asleep", ev);
      return false;
    case StatusKind::Freeze:
      if (s.rng.chance(0.2)) {
        cure(s, side, "thawed", ev);
        return true;
      }
      cant_move(s, side, "frozen", ev);
      return false;
    case StatusKind::Paralysis:
      if (s.rng.one_in(4)) {
        cant_move(s, side, "paralyzed", ev);
        return false;
      }
      return true;
    default:
      return true;
  }
}

void use_move(const Dex& dex, BattleState& s, Side side, std::size_t move_slot, Events& ev) {
  if (!may_act(s, side, ev)) return;

  auto& user_side = s.side(side);
  const auto& user = user_side.active_battler();
  const MoveDef& move = dex.move_of(user.species, move_slot);
  const Side target = opponent(side);
  auto& target_side = s.side(target);

  Event used = make_event(EventKind::MoveUsed, side, user_side.active);
  used.detail = move.name;
  ev.push_back(used);

  if (target_side.active_battler().fainted()) return;

  if (move.accuracy && s.rng.range(1, 100) > *move.accuracy) {
    Event miss = make_event(EventKind::Missed, side, user_side.active);
    miss.detail = move.name;
    ev.push_back(miss);
    return;
  }

  const auto& defender = target_side.active_battler();
  const auto& def_species = species_of(dex, defender);
  if (move.damaging()) {
    DamageContext ctx;
    ctx.weather = s.weather.kind;
    ctx.crit = s.rng.one_in(16);
    ctx.roll = s.rng.range(85, 100);
    const DamageResult dr = compute_damage(dex, user, defender, move, ctx);
    if (dr.effectiveness == 0.0) {
      Event e = make_event(EventKind::NoEffect, target, target_side.active);
      e.detail = move.name;
      e.effectiveness = 0.0;
      ev.push_back(e);
      return;
    }
    Event hit = make_event(EventKind::Damage, target, target_side.active);
    hit.detail = move.name;
    hit.effectiveness = dr.effectiveness;
    hit.crit = ctx.crit;
    hit.stab = dr.stab;
    apply_hp_loss(s, target, dr.damage, hit, ev);
    if (target_side.active_battler().fainted()) return;
    if (move.effect && target_side.active_battler().status == StatusKind::None &&
        s.rng.chance(move.effect->chance))
      inflict(s, target, move.effect->status, ev);
    return;
  }

  const double eff = type_multiplier(dex.chart(), move.type, def_species.types);
  if (eff == 0.0 || !move.effect || defender.status != StatusKind::None) {
    Event e = make_event(EventKind::NoEffect, target, target_side.active);
    e.detail = move.name;
    e.effectiveness = eff;
    ev.push_back(e);
    return;
  }
  if (s.rng.chance(move.effect->chance)) inflict(s, target, move.effect->status, ev);
}

void end_of_turn(const Dex& dex, BattleState& s, Events& ev) {
  for (Side side : kSides) {
    auto& st = s.side(side);
    auto& b = st.active_battler();
    if (b.fainted()) continue;
    if (b.status == StatusKind::Burn || b.status == StatusKind::Poison) {
      Event e = make_event(EventKind::StatusDamage, side, st.active);
      e.status = b.status;
      apply_hp_loss(s, side, b.max_hp / 8, e, ev);
    }
  }
  if (s.weather.kind == Weather::Sand) {
    for (Side side : kSides) {
      auto& st = s.side(side);
      const auto& b = st.active_battler();
      if (b.fainted()) continue;
      const auto& sp = species_of(dex, b);
      if (sp.has_type(Type::Rock) || sp.has_type(Type::Ground) || sp.has_type(Type::Steel)) continue;
      Event e = make_event(EventKind::WeatherDamage, side, st.active);
      e.weather = Weather::Sand;
      apply_hp_loss(s, side, b.max_hp / 16, e, ev);
    }
  }
  if (s.weather.kind != Weather::None && s.weather.turns_left) {
    if (*s.weather.turns_left > 0) --*s.weather.turns_left;
    if (*s.weather.turns_left == 0) {
      Event e = make_event(EventKind::WeatherEnded, Side::A, 0);
      e.weather = s.weather.kind;
      ev.push_back(e);
      s.weather = {};
    }
  }
}

void finish(BattleState& s, Side winner, EndReason reason, Events& ev) {
  s.winner = winner;
  s.end_reason = reason;
  Event e = make_event(EventKind::BattleEnded, winner, 0);
  e.detail = std::string(to_string(reason));
  ev.push_back(e);
}

void check_end(BattleState& s, Events& ev) {
  const bool a_out = s.side(Side::A).fainted_count() == kTeamSize;
  const bool b_out = s.side(Side::B).fainted_count() == kTeamSize;
  if (a_out && b_out) {
    // The side whose last battler went down later in the event order wins.
    auto last = std::find_if(ev.rbegin(), ev.rend(), [](const Event& e) { return e.kind == EventKind::Fainted; });
    finish(s, last->side, EndReason::AllFainted, ev);
  } else if (a_out) {
    finish(s, Side::B, EndReason::AllFainted, ev);
  } else if (b_out) {
    finish(s, Side::A, EndReason::AllFainted, ev);
  }
}

void check_turn_cap(BattleState& s, Events& ev) {
  if (s.ended() || s.turn - 1 < s.turn_cap) return;
  auto totals = [&](Side side) {
    std::int64_t hp = 0, max = 0;
    for (const auto& b : s.side(side).team) {
      hp += b.current_hp;
      max += b.max_hp;
    }
    return std::pair{hp, max};
  };
  const auto [hp_a, max_a] = totals(Side::A);
  const auto [hp_b, max_b] = totals(Side::B);
  const std::int64_t lhs = hp_a * max_b;
  const std::int64_t rhs = hp_b * max_a;
  Side winner;
  if (lhs != rhs)
    winner = lhs > rhs ? Side::A : Side::B;
  else
    winner = s.rng.coin() ? Side::A : Side::B;
  finish(s, winner, EndReason::TurnCapTieBreak, ev);
}

}  // namespace

std::string_view to_string(EndReason r) {
  switch (r) {
    case EndReason::AllFainted: return "AllFainted";
    case EndReason::TurnCapTieBreak: return "TurnCapTieBreak";
    case EndReason::Forfeit: return "Forfeit";
  }
  return "?";
}

std::optional<EndReason> parse_end_reason(std::string_view s) {
  for (auto r : {EndReason::AllFainted, EndReason::TurnCapTieBreak, EndReason::Forfeit})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::SwitchIn: return "SwitchIn";
    case EventKind::MoveUsed: return "MoveUsed";
    case EventKind::CantMove: return "CantMove";
    case EventKind::Missed: return "Missed";
    case EventKind::NoEffect: return "NoEffect";
    case EventKind::Damage: return "Damage";
    case EventKind::StatusInflicted: return "StatusInflicted";
    case EventKind::StatusCured: return "StatusCured";
    case EventKind::StatusDamage: return "StatusDamage";
    case EventKind::WeatherStarted: return "WeatherStarted";
    case EventKind::WeatherEnded: return "WeatherEnded";
    case EventKind::WeatherDamage: return "WeatherDamage";
    case EventKind::Fainted: return "Fainted";
    case EventKind::BattleEnded: return "BattleEnded";
  }
  return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(EventKind::BattleEnded); ++i)
    if (to_string(static_cast<EventKind>(i)) == s) return static_cast<EventKind>(i);
  return std::nullopt;
}

std::string describe(const Action& a) {
  return a.is_attack() ? "attack(" + std::to_string(a.index) + ")" : "switch(" + std::to_string(a.index) + ")";
}

IllegalAction::IllegalAction(Side s, Action a)
    : BattleError("illegal action " + describe(a) + " for side " + (s == Side::A ? "A" : "B")),
      side(s),
      action(a) {}

std::size_t SideState::fainted_count() const {
  return static_cast<std::size_t>(std::count_if(team.begin(), team.end(), [](const auto& b) { return b.fainted(); }));
}

BattlerState compute_stats(const Dex& dex, SpeciesId species) {
  const auto& base = dex.species(species).base;
  BattlerState b;
  b.species = species;
  b.max_hp = base.hp + 60;
  b.current_hp = b.max_hp;
  b.stats = {base.atk + 5, base.def + 5, base.spa + 5, base.spd + 5, base.spe + 5};
  return b;
}

int effective_speed(const BattlerState& b) {
  return b.status == StatusKind::Paralysis ? b.stats.spe / 4 : b.stats.spe;
}

int hp_percent(const BattlerState& b) { return b.max_hp > 0 ? 100 * b.current_hp / b.max_hp : 0; }

TurnResult start_battle(const Dex& dex, const std::array<Team, 2>& teams, std::uint64_t seed, int turn_cap) {
  TurnResult r;
  BattleState& s = r.state;
  s.rng = Rng(seed);
  s.turn_cap = turn_cap;
  for (Side side : kSides) {
    auto& st = s.side(side);
    for (std::size_t i = 0; i < kTeamSize; ++i) st.team[i] = compute_stats(dex, teams[index(side)][i]);
  }
  const bool a_first = faster_first(s, Side::A, Side::B);
  for (Side side : a_first ? std::array{Side::A, Side::B} : std::array{Side::B, Side::A})
    switch_in(dex, s, side, 0, r.events);
  return r;
}

std::vector<Action> legal_actions(const BattleState& state, Side side) {
  if (state.ended()) throw BattleAlreadyEnded();
  const auto& st = state.side(side);
  std::vector<Action> out;
  if (!st.needs_replacement())
    for (std::size_t m = 0; m < 4; ++m) out.push_back(Action::attack(m));
  for (std::size_t j = 0; j < kTeamSize; ++j)
    if (j != st.active && !st.team[j].fainted()) out.push_back(Action::switch_to(j));
  return out;
}

bool is_legal(const BattleState& state, Side side, const Action& action) {
  if (state.ended()) return false;
  const auto legal = legal_actions(state, side);
  return std::find(legal.begin(), legal.end(), action) != legal.end();
}

DamageResult compute_damage(const Dex& dex, const BattlerState& attacker, const BattlerState& defender,
                            const MoveDef& move, const DamageContext& ctx) {
  if (!move.damaging()) throw NotADamagingMove(move.name);
  const auto& atk_species = dex.species(attacker.species);
  const auto& def_species = dex.species(defender.species);

  DamageResult r;
  r.effectiveness = type_multiplier(dex.chart(), move.type, def_species.types);
  r.stab = atk_species.has_type(move.type);
  if (r.effectiveness == 0.0) return r;

  const bool physical = move.category == MoveCategory::Physical;
  std::int64_t a = physical ? attacker.stats.atk : attacker.stats.spa;
  const std::int64_t d = physical ? defender.stats.def : defender.stats.spd;
  if (physical && attacker.status == StatusKind::Burn) a /= 2;

  std::int64_t dmg = (2 * kLevel / 5 + 2) * move.power * a / d;
  dmg = dmg / 50 + 2;
  if (r.stab) dmg = dmg * 3 / 2;
  dmg = dmg * static_cast<std::int64_t>(r.effectiveness * 4.0) / 4;
  const bool water = move.type == Type::Water;
  const bool fire = move.type == Type::Fire;
  if ((ctx.weather == Weather::Rain && water) || (ctx.weather == Weather::Sun && fire))
    dmg = dmg * 3 / 2;
  else if ((ctx.weather == Weather::Rain && fire) || (ctx.weather == Weather::Sun && water))
    dmg = dmg / 2;
  if (ctx.crit) dmg *= 2;
  dmg = dmg * ctx.roll / 100;
  r.damage = static_cast<int>(std::max<std::int64_t>(dmg, 1));
  return r;
}

TurnResult resolve_turn(const Dex& dex, const BattleState& state, Action action_a, Action action_b) {
  if (state.ended()) throw BattleAlreadyEnded();
  if (!is_legal(state, Side::A, action_a)) throw IllegalAction(Side::A, action_a);
  if (!is_legal(state, Side::B, action_b)) throw IllegalAction(Side::B, action_b);

  TurnResult r{state, {}};
  BattleState& s = r.state;
  Events& ev = r.events;
  const std::array<Action, 2> actions{action_a, action_b};

  const bool a_switch = action_a.is_switch();
  const bool b_switch = action_b.is_switch();
  if (a_switch && b_switch) {
    const bool a_first = faster_first(s, Side::A, Side::B);
    for (Side side : a_first ? std::array{Side::A, Side::B} : std::array{Side::B, Side::A})
      switch_in(dex, s, side, actions[index(side)].index, ev);
  } else if (a_switch) {
    switch_in(dex, s, Side::A, action_a.index, ev);
  } else if (b_switch) {
    switch_in(dex, s, Side::B, action_b.index, ev);
  }

  if (!a_switch && !b_switch) {
    const int pa = dex.move_of(s.side(Side::A).active_battler().species, action_a.index).priority;
    const int pb = dex.move_of(s.side(Side::B).active_battler().species, action_b.index).priority;
    const bool a_first = pa != pb ? pa > pb : faster_first(s, Side::A, Side::B);
    for (Side side : a_first ? std::array{Side::A, Side::B} : std::array{Side::B, Side::A}) {
      if (s.side(side).active_battler().fainted()) continue;
      use_move(dex, s, side, actions[index(side)].index, ev);
    }
  } else if (!a_switch) {
    use_move(dex, s, Side::A, action_a.index, ev);
  } else if (!b_switch) {
    use_move(dex, s, Side::B, action_b.index, ev);
  }

  end_of_turn(dex, s, ev);
  check_end(s, ev);
  ++s.turn;
  check_turn_cap(s, ev);
  return r;
}

TurnResult forfeit(const BattleState& state, Side loser) {
  if (state.ended()) throw BattleAlreadyEnded();
  TurnResult r{state, {}};
  finish(r.state, opponent(loser), EndReason::Forfeit, r.events);
  return r;
}

BattleView view_for(const BattleState& state, Side side) {
  BattleView v;
  v.side = side;
  v.turn = state.turn;
  v.weather = state.weather;
  const auto& own = state.side(side);
  v.active = own.active;
  v.forced_replacement = own.needs_replacement();
  for (std::size_t i = 0; i < kTeamSize; ++i) {
    const auto& b = own.team[i];
    auto& o = v.team[i];
    o.species = b.species;
    o.slot = i;
    o.hp = b.current_hp;
    o.max_hp = b.max_hp;
    o.hp_percent = hp_percent(b);
    o.status = b.status;
    o.stats = b.stats;
    o.active = i == own.active;
    o.fainted = b.fainted();
  }
  const auto& opp = state.side(opponent(side));
  v.opponent.active_species = opp.active_battler().species;
  v.opponent.hp_percent = hp_percent(opp.active_battler());
  v.opponent.status = opp.active_battler().status;
  v.opponent.fainted = opp.active_battler().fainted();
  for (std::size_t i = 0; i < kTeamSize; ++i)
    if (opp.revealed.test(i)) v.opponent.revealed.push_back(opp.team[i].species);
  return v;
}

std::string describe(const Dex& dex, const BattleState& state, const Event& e) {
  const auto name = [&](Side side, std::size_t slot) {
    return std::string(side == Side::A ? "A:" : "B:") + dex.species(state.side(side).team[slot].species).name;
  };
  std::ostringstream os;
  switch (e.kind) {
    case EventKind::SwitchIn: os << name(e.side, e.slot) << " switched in"; break;
    case EventKind::MoveUsed: os << name(e.side, e.slot) << " used " << e.detail; break;
    case EventKind::CantMove: os << name(e.side, e.slot) << " can't move (" << e.detail << ")"; break;
    case EventKind::Missed: os << name(e.side, e.slot) << "'s " << e.detail << " missed"; break;
    case EventKind::NoEffect: os << e.detail << " had no effect on " << name(e.side, e.slot); break;
    case EventKind::Damage:
      os << name(e.side, e.slot) << " took " << e.amount << " damage (x" << e.effectiveness
         << (e.crit ? ", critical" : "") << (e.stab ? ", STAB" : "") << ")";
      break;
    case EventKind::StatusInflicted: os << name(e.side, e.slot) << " is now " << to_string(e.status); break;
    case EventKind::StatusCured: os << name(e.side, e.slot) << " " << e.detail; break;
    case EventKind::StatusDamage:
      os << name(e.side, e.slot) << " lost " << e.amount << " HP to " << to_string(e.status);
      break;
    case EventKind::WeatherStarted: os << to_string(e.weather) << " started"; break;
    case EventKind::WeatherEnded: os << to_string(e.weather) << " ended"; break;
    case EventKind::WeatherDamage:
      os << name(e.side, e.slot) << " lost " << e.amount << " HP to " << to_string(e.weather);
      break;
    case EventKind::Fainted: os << name(e.side, e.slot) << " fainted"; break;
    case EventKind::BattleEnded:
      os << "side " << (e.side == Side::A ? "A" : "B") << " wins (" << e.detail << ")";
      break;
  }
  return os.str();
}

}  // namespace pokeleague
