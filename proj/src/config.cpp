#include "latlab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace latlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long long to_int(const std::string& key, const std::string& s) {
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    throw std::invalid_argument("config: key '" + key + "' needs an integer, got '" + s + "'");
  }
  return v;
}

double to_real(const std::string& key, const std::string& s) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw std::invalid_argument("config: key '" + key + "' needs a number, got '" + s + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw std::invalid_argument("config: key '" + key + "' needs a boolean, got '" + s + "'");
}

} // namespace

Config parse_config(std::istream& in) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not a key = value pair");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " has an empty key or value");
    }

    if (key == "dims") {
      cfg.dims.clear();
      for (const std::string& s : split_list(value)) {
        long long d = to_int(key, s);
        if (d < 2 || d > 8) throw std::invalid_argument("config: dims entries must be in [2, 8]");
        cfg.dims.push_back(static_cast<int>(d));
      }
    } else if (key == "qs") {
      cfg.qs.clear();
      for (const std::string& s : split_list(value)) {
        long long q = to_int(key, s);
        if (q < 1) throw std::invalid_argument("config: qs entries must be positive");
        cfg.qs.push_back(q);
      }
    } else if (key == "body") {
      cfg.bodies.push_back(value);
    } else if (key == "delta_denominator") {
      cfg.delta_denominator = to_int(key, value);
      if (cfg.delta_denominator < 1) {
        throw std::invalid_argument("config: delta_denominator must be positive");
      }
    } else if (key == "budget") {
      cfg.budget = to_int(key, value);
      if (cfg.budget < 1) throw std::invalid_argument("config: budget must be positive");
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(to_int(key, value));
      if (cfg.threads < 0) throw std::invalid_argument("config: threads must be >= 0");
    } else if (key == "seed") {
      cfg.seed = static_cast<unsigned long long>(to_int(key, value));
    } else if (key == "mattila") {
      cfg.mattila = to_bool(key, value);
    } else if (key == "duality") {
      cfg.duality = to_bool(key, value);
    } else if (key == "falconer_s") {
      cfg.falconer_s = to_real(key, value);
      if (cfg.falconer_s < 0.0) throw std::invalid_argument("config: falconer_s must be >= 0");
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "resume") {
      cfg.resume = to_bool(key, value);
    } else if (key == "criteria") {
      cfg.criteria.clear();
      cfg.criteria_set = true;
      if (value == "none") continue;
      for (const std::string& s : split_list(value)) {
        long long c = to_int(key, s);
        if (c < 1 || c > 16) {
          throw std::invalid_argument("config: criteria entries must be in [1, 16]");
        }
        cfg.criteria.push_back(static_cast<int>(c));
      }
    } else if (key == "corrupt_volume") {
      cfg.corrupt_volume = to_real(key, value);
      if (!(cfg.corrupt_volume > 0.0)) {
        throw std::invalid_argument("config: corrupt_volume must be positive");
      }
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "' on line " +
                                  std::to_string(lineno));
    }
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  return parse_config(in);
}

} // namespace latlab
