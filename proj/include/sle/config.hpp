#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sle/game.hpp"

namespace sle {

// Plain-text configuration: `[section]` headers with `key = value` lines.
// `#` and `;` start comments. Section and key order is preserved for
// deterministic manifest emission; a repeated key overwrites.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  // whitespace-separated lists
  std::vector<double> get_doubles(const std::string& section,
                                  const std::string& key) const;
  std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                  std::vector<double> fallback) const;
  std::vector<int> get_ints(const std::string& section, const std::string& key) const;
  std::vector<int> get_ints(const std::string& section, const std::string& key,
                            std::vector<int> fallback) const;

  using Section = std::pair<std::string, std::vector<std::pair<std::string, std::string>>>;
  const std::vector<Section>& sections() const { return sections_; }
  const std::string& raw() const { return raw_; }

 private:
  std::optional<std::string> find(const std::string& section,
                                  const std::string& key) const;
  std::vector<Section> sections_;
  std::string raw_;
};

// FNV-1a, used for the config hash recorded in manifests.
std::uint64_t fnv1a64(const std::string& text);

// Builds a game from the [section] of a config:
//   kind = linear    -> matrix = a11 a12 ; a21 a22 ; ...
//   kind = separable -> component_1 = c0 c1 c2 ...   (polynomial in x_i)
//   kind = catalog   -> name = coordination|young|bilingual|congestion
//                       with parameters s,t or g,c where applicable
std::unique_ptr<PopulationGame> game_from_config(const Config& cfg,
                                                 const std::string& section = "game");

}  // namespace sle
