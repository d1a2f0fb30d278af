#include "sle/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sle {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
  // '#' only; ';' separates matrix rows inside values
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> parts;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) parts.push_back(tok);
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: cannot parse '" + s + "' as a number for " + what);
  }
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  cfg.raw_ = text;
  std::istringstream in(text);
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument("config: malformed section header at line " +
                                    std::to_string(lineno));
      }
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) {
        throw std::invalid_argument("config: empty section name at line " +
                                    std::to_string(lineno));
      }
      bool exists = false;
      for (const auto& s : cfg.sections_) {
        if (s.first == current) exists = true;
      }
      if (!exists) cfg.sections_.push_back({current, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: expected 'key = value' at line " +
                                  std::to_string(lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config: empty key at line " + std::to_string(lineno));
    }
    if (current.empty()) {
      throw std::invalid_argument("config: key '" + key + "' outside any section (line " +
                                  std::to_string(lineno) + ")");
    }
    for (auto& sec : cfg.sections_) {
      if (sec.first != current) continue;
      bool replaced = false;
      for (auto& kv : sec.second) {
        if (kv.first == key) {
          kv.second = value;
          replaced = true;
          break;
        }
      }
      if (!replaced) sec.second.push_back({key, value});
      break;
    }
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string> Config::find(const std::string& section,
                                        const std::string& key) const {
  for (const auto& sec : sections_) {
    if (sec.first != section) continue;
    for (const auto& kv : sec.second) {
      if (kv.first == key) return kv.second;
    }
  }
  return std::nullopt;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key).has_value();
}

std::string Config::get_string(const std::string& section,
                               const std::string& key) const {
  auto v = find(section, key);
  if (!v) {
    throw std::invalid_argument("config: missing [" + section + "] " + key);
  }
  return *v;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  auto v = find(section, key);
  return v ? *v : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  return to_double(get_string(section, key), "[" + section + "] " + key);
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  auto v = find(section, key);
  return v ? to_double(*v, "[" + section + "] " + key) : fallback;
}

int Config::get_int(const std::string& section, const std::string& key) const {
  const double v = get_double(section, key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw std::invalid_argument("config: [" + section + "] " + key +
                                " must be an integer");
  }
  return i;
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
  auto v = find(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw std::invalid_argument("config: [" + section + "] " + key +
                              " must be a boolean");
}

std::vector<double> Config::get_doubles(const std::string& section,
                                        const std::string& key) const {
  std::vector<double> out;
  for (const auto& tok : split_ws(get_string(section, key))) {
    out.push_back(to_double(tok, "[" + section + "] " + key));
  }
  if (out.empty()) {
    throw std::invalid_argument("config: [" + section + "] " + key + " is empty");
  }
  return out;
}

std::vector<double> Config::get_doubles(const std::string& section,
                                        const std::string& key,
                                        std::vector<double> fallback) const {
  return has(section, key) ? get_doubles(section, key) : std::move(fallback);
}

std::vector<int> Config::get_ints(const std::string& section,
                                  const std::string& key) const {
  std::vector<int> out;
  for (double v : get_doubles(section, key)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
      throw std::invalid_argument("config: [" + section + "] " + key +
                                  " must be a list of integers");
    }
    out.push_back(i);
  }
  return out;
}

std::vector<int> Config::get_ints(const std::string& section, const std::string& key,
                                  std::vector<int> fallback) const {
  return has(section, key) ? get_ints(section, key) : std::move(fallback);
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::unique_ptr<PopulationGame> game_from_config(const Config& cfg,
                                                 const std::string& section) {
  const std::string kind = cfg.get_string(section, "kind");
  if (kind == "linear") {
    const std::string spec = cfg.get_string(section, "matrix");
    std::vector<std::vector<double>> rows;
    std::string row;
    std::istringstream in(spec);
    while (std::getline(in, row, ';')) {
      std::vector<double> vals;
      for (const auto& tok : split_ws(row)) {
        vals.push_back(to_double(tok, "[" + section + "] matrix"));
      }
      if (!vals.empty()) rows.push_back(std::move(vals));
    }
    const int n = static_cast<int>(rows.size());
    if (n < 2) throw std::invalid_argument("config: matrix needs >= 2 rows");
    Mat a(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n) {
        throw std::invalid_argument("config: matrix must be square");
      }
      for (int j = 0; j < n; ++j) a(i, j) = rows[i][j];
    }
    return std::make_unique<LinearGame>(a);
  }
  if (kind == "separable") {
    std::vector<SeparableComponent> comps;
    for (int i = 1;; ++i) {
      const std::string key = "component_" + std::to_string(i);
      if (!cfg.has(section, key)) break;
      comps.push_back(polynomial_component(cfg.get_doubles(section, key)));
    }
    if (comps.size() < 2) {
      throw std::invalid_argument(
          "config: separable game needs component_1, component_2, ...");
    }
    return std::make_unique<SeparableGame>(std::move(comps));
  }
  if (kind == "catalog") {
    const std::string name = cfg.get_string(section, "name");
    if (name == "coordination") {
      return std::make_unique<LinearGame>(make_coordination_2x2(
          cfg.get_double(section, "s", 2.0), cfg.get_double(section, "t", 1.0)));
    }
    if (name == "young") return std::make_unique<LinearGame>(make_young_game());
    if (name == "bilingual") {
      return std::make_unique<LinearGame>(make_bilingual_game(
          cfg.get_double(section, "g", 0.5), cfg.get_double(section, "c", 0.05)));
    }
    if (name == "congestion") {
      return std::make_unique<SeparableGame>(make_congestion_game());
    }
    throw std::invalid_argument("config: unknown catalog game '" + name + "'");
  }
  throw std::invalid_argument("config: unknown game kind '" + kind + "'");
}

}  // namespace sle
