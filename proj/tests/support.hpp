#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pokeleague/battle.hpp"
#include "pokeleague/dex.hpp"

namespace testing_support {

inline const pokeleague::Dex& dex() {
  static const pokeleague::Dex d = pokeleague::load_dex(pokeleague::default_dex_path());
  return d;
}

inline std::filesystem::path data_dir() { return POKELEAGUE_TEST_DATA_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

/// Fresh directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "pokeleague") {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline pokeleague::SpeciesId species(const std::string& name) { return *dex().find_species(name); }

inline pokeleague::Team team_of(const std::vector<std::string>& names) {
  pokeleague::Team t{};
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = species(names.at(i));
  return t;
}

// The published sample responses, copied byte for byte (the reasoning strings
// really do contain raw line breaks).
inline const std::string kSampleTeamResponse = R"({
  "team": [0, 3, 5, 8, 11, 14],
  "reasoning": "I chose Gyarados for
  Water/Flying coverage, Magnezone for Electric/Steel,
  and Gliscor to counter Electric threats.
  The team balances physical and special attacks,
  while covering common types like Fire,
  Water, and Ground."
})";

inline const std::string kSampleActionResponse = R"({
  "action":
  { "type": "attack", "move_index": 1 },
  "reasoning":
  "Gyarados is Water/Flying-type
  and weak to Electric.
  Jolteon’s Thunderbolt
  should be super effective.
  Since Jolteon
  outspeeds most threats,
  I’ll go for an
  attack rather than switch."
})";

/// The eight published model team lists, in the order they are described.
inline std::vector<std::vector<std::string>> published_teams() {
  return {
      {"Mewtwo", "Metagross", "Salamence", "Swampert", "Gengar", "Zapdos"},
      {"Kyogre", "Groudon", "Rayquaza", "Lugia", "Magnezone", "Ho-Oh"},
      {"Swampert", "Zapdos", "Metagross", "Blissey", "Gengar", "Salamence"},
      {"Mewtwo", "Dragonite", "Gengar", "Zapdos", "Tyranitar", "Swampert"},
      {"Tyranitar", "Swampert", "Zapdos", "Blaziken", "Metagross", "Celebi"},
      {"Mewtwo", "Tyranitar", "Swampert", "Skarmory", "Gengar", "Blaziken"},
      {"Metagross", "Swampert", "Salamence", "Raikou", "Skarmory", "Blissey"},
      {"Swampert", "Venusaur", "Dragonite", "Metagross", "Jolteon", "Gengar"},
  };
}

}  // namespace testing_support
