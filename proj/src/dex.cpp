#include "pokeleague/dex.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "pokeleague/rng.hpp"

namespace pokeleague {
namespace {

constexpr std::array<std::string_view, kTypeCount> kTypeNames = {
    "Normal", "Fire",    "Water", "Electric", "Grass", "Ice",   "Fighting", "Poison", "Ground",
    "Flying", "Psychic", "Bug",   "Rock",     "Ghost", "Dragon", "Dark",    "Steel",  "Fairy",
};

bool legal_cell(double m) { return m == 0.0 || m == 0.5 || m == 1.0 || m == 2.0; }

using json = nlohmann::json;

class Validator {
 public:
  void add(DexIssue::Kind kind, std::string entry, std::string message) {
    issues_.push_back({kind, std::move(entry), std::move(message)});
  }
  void malformed(std::string entry, std::string message) {
    add(DexIssue::Kind::MalformedFile, std::move(entry), std::move(message));
  }
  void unknown(std::string entry, std::string message) {
    add(DexIssue::Kind::UnknownReference, std::move(entry), std::move(message));
  }
  void invariant(std::string entry, std::string message) {
    add(DexIssue::Kind::InvariantViolation, std::move(entry), std::move(message));
  }
  bool ok() const { return issues_.empty(); }
  std::vector<DexIssue> take() { return std::move(issues_); }

 private:
  std::vector<DexIssue> issues_;
};

std::optional<int> get_int(const json& obj, const char* key, const std::string& entry, Validator& v) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    v.malformed(entry, std::string("missing or non-integer \"") + key + "\"");
    return std::nullopt;
  }
  return obj[key].get<int>();
}

std::optional<std::string> get_string(const json& obj, const char* key, const std::string& entry,
                                      Validator& v) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    v.malformed(entry, std::string("missing or non-string \"") + key + "\"");
    return std::nullopt;
  }
  return obj[key].get<std::string>();
}

std::optional<Type> get_type(const json& value, const std::string& entry, Validator& v) {
  if (!value.is_string()) {
    v.malformed(entry, "type must be a string");
    return std::nullopt;
  }
  auto t = parse_type(value.get<std::string>());
  if (!t) v.unknown(entry, "unknown type \"" + value.get<std::string>() + "\"");
  return t;
}

TypeChart read_chart(const json& doc, Validator& v) {
  TypeChart chart;
  if (doc.contains("types")) {
    const auto& types = doc["types"];
    if (!types.is_array()) {
      v.malformed("types", "must be an array");
    } else {
      std::set<std::string> seen;
      for (const auto& t : types) {
        if (!t.is_string() || !parse_type(t.get<std::string>())) {
          v.unknown("types", "unknown type entry " + t.dump());
        } else {
          seen.insert(t.get<std::string>());
        }
      }
      if (seen.size() != kTypeCount || types.size() != kTypeCount)
        v.invariant("types", "expected exactly 18 distinct types, got " + std::to_string(types.size()));
    }
  } else {
    v.malformed("types", "missing \"types\"");
  }

  if (!doc.contains("chart") || !doc["chart"].is_object()) {
    v.malformed("chart", "missing or non-object \"chart\"");
    return chart;
  }
  const auto& c = doc["chart"];
  for (const auto& [atk_name, row] : c.items()) {
    if (!parse_type(atk_name)) v.unknown("chart." + atk_name, "unknown attacking type");
    if (!row.is_object()) {
      v.malformed("chart." + atk_name, "row must be an object");
      continue;
    }
    for (const auto& [def_name, _] : row.items())
      if (!parse_type(def_name)) v.unknown("chart." + atk_name + "." + def_name, "unknown defending type");
  }
  for (Type atk : all_types()) {
    const std::string an(to_string(atk));
    for (Type def : all_types()) {
      const std::string dn(to_string(def));
      const std::string entry = "chart." + an + "." + dn;
      if (!c.contains(an) || !c[an].is_object() || !c[an].contains(dn)) {
        v.invariant(entry, "matrix not total: missing cell (" + an + ", " + dn + ")");
        continue;
      }
      const auto& cell = c[an][dn];
      if (!cell.is_number()) {
        v.malformed(entry, "multiplier must be a number");
        continue;
      }
      const double m = cell.get<double>();
      if (!legal_cell(m)) {
        v.invariant(entry, "multiplier " + cell.dump() + " not in {0, 0.5, 1, 2}");
        continue;
      }
      chart.set(atk, def, m);
    }
  }
  return chart;
}

std::vector<MoveDef> read_moves(const json& doc, Validator& v) {
  std::vector<MoveDef> moves;
  if (!doc.contains("moves") || !doc["moves"].is_array()) {
    v.malformed("moves", "missing or non-array \"moves\"");
    return moves;
  }
  std::set<std::string> names;
  std::size_t i = 0;
  for (const auto& m : doc["moves"]) {
    std::string entry = "moves[" + std::to_string(i++) + "]";
    if (!m.is_object()) {
      v.malformed(entry, "move must be an object");
      continue;
    }
    MoveDef def;
    if (auto n = get_string(m, "name", entry, v)) {
      def.name = *n;
      entry = "move " + def.name;
      if (!names.insert(def.name).second) v.invariant(entry, "duplicate move name");
    }
    if (m.contains("type")) {
      if (auto t = get_type(m["type"], entry, v)) def.type = *t;
    } else {
      v.malformed(entry, "missing \"type\"");
    }
    if (auto c = get_string(m, "category", entry, v)) {
      if (auto cat = parse_category(*c))
        def.category = *cat;
      else
        v.malformed(entry, "unknown category \"" + *c + "\"");
    }
    if (auto p = get_int(m, "power", entry, v)) def.power = *p;
    if (def.category == MoveCategory::Status && def.power != 0)
      v.invariant(entry, "status move must have power 0");
    if (def.category != MoveCategory::Status && def.power < 1)
      v.invariant(entry, "damaging move must have power >= 1");

    if (!m.contains("accuracy")) {
      v.malformed(entry, "missing \"accuracy\"");
    } else if (m["accuracy"].is_string() && m["accuracy"] == "AlwaysHits") {
      def.accuracy.reset();
    } else if (m["accuracy"].is_number_integer()) {
      const int acc = m["accuracy"].get<int>();
      if (acc < 1 || acc > 100) v.invariant(entry, "accuracy must be in 1..100");
      def.accuracy = acc;
    } else {
      v.malformed(entry, "accuracy must be an integer or \"AlwaysHits\"");
    }

    if (auto pr = get_int(m, "priority", entry, v)) {
      def.priority = *pr;
      if (*pr < -7 || *pr > 7) v.invariant(entry, "priority must be in -7..7");
    }

    if (m.contains("effect") && !m["effect"].is_null()) {
      const auto& e = m["effect"];
      SecondaryEffect eff;
      if (!e.is_object()) {
        v.malformed(entry, "effect must be an object or null");
      } else {
        if (auto s = get_string(e, "status", entry, v)) {
          auto st = parse_status(*s);
          if (!st || *st == StatusKind::None)
            v.unknown(entry, "unknown effect status \"" + *s + "\"");
          else
            eff.status = *st;
        }
        if (!e.contains("chance") || !e["chance"].is_number()) {
          v.malformed(entry, "effect.chance must be a number");
        } else {
          eff.chance = e["chance"].get<double>();
          if (eff.chance < 0.0 || eff.chance > 1.0) v.invariant(entry, "effect.chance must be in [0, 1]");
        }
        def.effect = eff;
      }
    }
    moves.push_back(std::move(def));
  }
  return moves;
}

std::vector<Species> read_species(const json& doc, const std::vector<MoveDef>& moves, Validator& v) {
  std::vector<Species> out;
  if (!doc.contains("species") || !doc["species"].is_array()) {
    v.malformed("species", "missing or non-array \"species\"");
    return out;
  }
  std::unordered_map<std::string, MoveId> move_ids;
  for (std::size_t i = 0; i < moves.size(); ++i) move_ids.emplace(moves[i].name, i);

  std::set<std::string> names;
  std::size_t i = 0;
  for (const auto& s : doc["species"]) {
    std::string entry = "species[" + std::to_string(i++) + "]";
    if (!s.is_object()) {
      v.malformed(entry, "species must be an object");
      continue;
    }
    Species sp;
    if (auto n = get_string(s, "name", entry, v)) {
      sp.name = *n;
      entry = "species " + sp.name;
      if (!names.insert(sp.name).second) v.invariant(entry, "duplicate species name");
    }
    if (auto id = get_int(s, "dex_id", entry, v)) sp.dex_id = *id;

    if (!s.contains("types") || !s["types"].is_array()) {
      v.malformed(entry, "missing or non-array \"types\"");
    } else {
      for (const auto& t : s["types"])
        if (auto ty = get_type(t, entry, v)) sp.types.push_back(*ty);
      if (s["types"].empty() || s["types"].size() > 2)
        v.invariant(entry, "species must have 1 or 2 types");
      if (sp.types.size() == 2 && sp.types[0] == sp.types[1])
        v.invariant(entry, "dual types must be distinct");
    }

    if (!s.contains("base_stats") || !s["base_stats"].is_object()) {
      v.malformed(entry, "missing or non-object \"base_stats\"");
    } else {
      const auto& b = s["base_stats"];
      const std::pair<const char*, int BaseStats::*> fields[] = {
          {"hp", &BaseStats::hp},   {"atk", &BaseStats::atk}, {"def", &BaseStats::def},
          {"spa", &BaseStats::spa}, {"spd", &BaseStats::spd}, {"spe", &BaseStats::spe},
      };
      for (const auto& [key, member] : fields) {
        if (auto val = get_int(b, key, entry, v)) {
          if (*val < 1 || *val > 255)
            v.invariant(entry, std::string("base stat ") + key + " out of 1..255");
          sp.base.*member = *val;
        }
      }
    }

    if (!s.contains("moves") || !s["moves"].is_array()) {
      v.malformed(entry, "missing or non-array \"moves\"");
    } else {
      const auto& mv = s["moves"];
      if (mv.size() != 4) v.invariant(entry, "species must have exactly 4 moves");
      for (std::size_t k = 0; k < mv.size() && k < 4; ++k) {
        if (!mv[k].is_string()) {
          v.malformed(entry, "move names must be strings");
          continue;
        }
        const auto name = mv[k].get<std::string>();
        auto it = move_ids.find(name);
        if (it == move_ids.end())
          v.unknown(entry, "unknown move \"" + name + "\"");
        else
          sp.moves[k] = it->second;
      }
    }

    if (s.contains("auto_weather") && !s["auto_weather"].is_null()) {
      const auto& w = s["auto_weather"];
      auto parsed = w.is_string() ? parse_weather(w.get<std::string>()) : std::nullopt;
      if (!parsed || *parsed == Weather::None)
        v.malformed(entry, "auto_weather must be null, \"Rain\", \"Sun\" or \"Sand\"");
      else
        sp.auto_weather = parsed;
    }
    out.push_back(std::move(sp));
  }
  return out;
}

std::vector<SpeciesId> read_pool(const json& doc, const std::vector<Species>& species, Validator& v) {
  std::vector<SpeciesId> pool;
  if (!doc.contains("pool") || !doc["pool"].is_array()) {
    v.malformed("pool", "missing or non-array \"pool\"");
    return pool;
  }
  std::set<std::string> seen;
  for (const auto& p : doc["pool"]) {
    if (!p.is_string()) {
      v.malformed("pool", "pool entries must be species names");
      continue;
    }
    const auto name = p.get<std::string>();
    if (!seen.insert(name).second) v.invariant("pool", "duplicate pool entry \"" + name + "\"");
    auto it = std::find_if(species.begin(), species.end(), [&](const Species& s) { return s.name == name; });
    if (it == species.end())
      v.unknown("pool", "unknown species \"" + name + "\"");
    else
      pool.push_back(static_cast<SpeciesId>(it - species.begin()));
  }
  return pool;
}

}  // namespace

std::string_view to_string(Type t) { return kTypeNames[static_cast<std::size_t>(t)]; }

std::optional<Type> parse_type(std::string_view name) {
  for (std::size_t i = 0; i < kTypeCount; ++i)
    if (kTypeNames[i] == name) return static_cast<Type>(i);
  return std::nullopt;
}

std::array<Type, kTypeCount> all_types() {
  std::array<Type, kTypeCount> out{};
  for (std::size_t i = 0; i < kTypeCount; ++i) out[i] = static_cast<Type>(i);
  return out;
}

std::string_view to_string(MoveCategory c) {
  switch (c) {
    case MoveCategory::Physical: return "Physical";
    case MoveCategory::Special: return "Special";
    case MoveCategory::Status: return "Status";
  }
  return "?";
}

std::string_view to_string(StatusKind s) {
  switch (s) {
    case StatusKind::None: return "None";
    case StatusKind::Burn: return "Burn";
    case StatusKind::Poison: return "Poison";
    case StatusKind::Paralysis: return "Paralysis";
    case StatusKind::Sleep: return "Sleep";
    case StatusKind::Freeze: return "Freeze";
  }
  return "?";
}

std::string_view to_string(Weather w) {
  switch (w) {
    case Weather::None: return "None";
    case Weather::Rain: return "Rain";
    case Weather::Sun: return "Sun";
    case Weather::Sand: return "Sand";
  }
  return "?";
}

std::string_view to_string(DexIssue::Kind k) {
  switch (k) {
    case DexIssue::Kind::MalformedFile: return "MalformedFile";
    case DexIssue::Kind::UnknownReference: return "UnknownReference";
    case DexIssue::Kind::InvariantViolation: return "InvariantViolation";
  }
  return "?";
}

std::optional<MoveCategory> parse_category(std::string_view name) {
  for (auto c : {MoveCategory::Physical, MoveCategory::Special, MoveCategory::Status})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

std::optional<StatusKind> parse_status(std::string_view name) {
  for (auto s : {StatusKind::None, StatusKind::Burn, StatusKind::Poison, StatusKind::Paralysis,
                 StatusKind::Sleep, StatusKind::Freeze})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

std::optional<Weather> parse_weather(std::string_view name) {
  for (auto w : {Weather::None, Weather::Rain, Weather::Sun, Weather::Sand})
    if (to_string(w) == name) return w;
  return std::nullopt;
}

TypeChart::TypeChart() {
  for (auto& row : cells_) row.fill(1.0);
}

double type_multiplier(const TypeChart& chart, Type attacking, std::span<const Type> defending) {
  double m = 1.0;
  for (Type d : defending) m *= chart.cell(attacking, d);
  return m;
}

bool Species::has_type(Type t) const { return std::find(types.begin(), types.end(), t) != types.end(); }

DexError::DexError(std::vector<DexIssue> issues)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << issues.size() << " dex error(s)";
        for (const auto& i : issues) os << "\n  " << to_string(i.kind) << " [" << i.entry << "]: " << i.message;
        return os.str();
      }()),
      issues_(std::move(issues)) {}

Dex::Dex(TypeChart chart, std::vector<MoveDef> moves, std::vector<Species> species,
         std::vector<SpeciesId> pool)
    : chart_(chart), moves_(std::move(moves)), species_(std::move(species)), pool_(std::move(pool)) {
  for (std::size_t i = 0; i < species_.size(); ++i) species_by_name_.emplace(species_[i].name, i);
  for (std::size_t i = 0; i < moves_.size(); ++i) moves_by_name_.emplace(moves_[i].name, i);
  hash_ = fnv1a64(to_json(*this).dump());
}

std::optional<SpeciesId> Dex::find_species(std::string_view name) const {
  auto it = species_by_name_.find(std::string(name));
  if (it == species_by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<MoveId> Dex::find_move(std::string_view name) const {
  auto it = moves_by_name_.find(std::string(name));
  if (it == moves_by_name_.end()) return std::nullopt;
  return it->second;
}

Dex parse_dex(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DexError({{DexIssue::Kind::MalformedFile, "<document>", e.what()}});
  }
  if (!doc.is_object()) throw DexError({{DexIssue::Kind::MalformedFile, "<document>", "top level must be an object"}});

  Validator v;
  TypeChart chart = read_chart(doc, v);
  auto moves = read_moves(doc, v);
  auto species = read_species(doc, moves, v);
  auto pool = read_pool(doc, species, v);
  if (v.ok() && pool.size() < 6) v.invariant("pool", "pool must hold at least 6 species");
  if (!v.ok()) throw DexError(v.take());
  return Dex(chart, std::move(moves), std::move(species), std::move(pool));
}

Dex load_dex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DexIoError("cannot open dex file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dex(ss.str());
}

json to_json(const Dex& dex) {
  json doc;
  doc["types"] = json::array();
  for (Type t : all_types()) doc["types"].push_back(to_string(t));
  json chart = json::object();
  for (Type a : all_types())
    for (Type d : all_types()) chart[std::string(to_string(a))][std::string(to_string(d))] = dex.chart().cell(a, d);
  doc["chart"] = std::move(chart);

  doc["moves"] = json::array();
  for (const auto& m : dex.moves()) {
    json jm = {{"name", m.name},
               {"type", to_string(m.type)},
               {"category", to_string(m.category)},
               {"power", m.power},
               {"priority", m.priority}};
    jm["accuracy"] = m.accuracy ? json(*m.accuracy) : json("AlwaysHits");
    jm["effect"] = m.effect ? json{{"status", to_string(m.effect->status)}, {"chance", m.effect->chance}} : json(nullptr);
    doc["moves"].push_back(std::move(jm));
  }
  doc["species"] = json::array();
  for (const auto& s : dex.species()) {
    json js = {{"dex_id", s.dex_id}, {"name", s.name}};
    js["types"] = json::array();
    for (Type t : s.types) js["types"].push_back(to_string(t));
    js["base_stats"] = {{"hp", s.base.hp},   {"atk", s.base.atk}, {"def", s.base.def},
                        {"spa", s.base.spa}, {"spd", s.base.spd}, {"spe", s.base.spe}};
    js["moves"] = json::array();
    for (MoveId m : s.moves) js["moves"].push_back(dex.move(m).name);
    js["auto_weather"] = s.auto_weather ? json(to_string(*s.auto_weather)) : json(nullptr);
    doc["species"].push_back(std::move(js));
  }
  doc["pool"] = json::array();
  for (SpeciesId id : dex.pool()) doc["pool"].push_back(dex.species(id).name);
  return doc;
}

std::filesystem::path default_dex_path() {
  if (const char* env = std::getenv("POKELEAGUE_DEX")) return env;
#ifdef POKELEAGUE_DATA_DIR
  return std::filesystem::path(POKELEAGUE_DATA_DIR) / "dex.json";
#else
  return "data/dex.json";
#endif
}

}  // namespace pokeleague
