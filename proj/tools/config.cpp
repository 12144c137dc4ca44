#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace levygrad::cli {

namespace {

std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

[[noreturn]] void bad(const std::string& key, const std::string& expected) {
  throw ConfigError("config key '" + key + "' must be " + expected);
}

}  // namespace

const nlohmann::json& Config::at(const std::string& key) const {
  auto it = raw_.find(key);
  if (it == raw_.end()) throw ConfigError("missing config key '" + key + "'");
  return *it;
}

double Config::number(const std::string& key) const {
  const nlohmann::json& value = at(key);
  if (!value.is_number()) bad(key, "a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) bad(key, "finite");
  return x;
}

double Config::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::size_t Config::count(const std::string& key, std::size_t fallback) const {
  if (!has(key)) return fallback;
  const nlohmann::json& value = at(key);
  if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
    bad(key, "a nonnegative integer");
  }
  return value.get<std::size_t>();
}

std::uint64_t Config::seed() const { return has("seed") ? count("seed", 0) : 1; }

std::string Config::string(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  const nlohmann::json& value = at(key);
  if (!value.is_string()) bad(key, "a string");
  return value.get<std::string>();
}

bool Config::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const nlohmann::json& value = at(key);
  if (!value.is_boolean()) bad(key, "true or false");
  return value.get<bool>();
}

std::vector<double> Config::numbers(const std::string& key) const {
  const nlohmann::json& value = at(key);
  if (!value.is_array() || value.empty()) bad(key, "a nonempty array of numbers");
  std::vector<double> out;
  for (const nlohmann::json& item : value) {
    if (!item.is_number()) bad(key, "a nonempty array of numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

Vec Config::vector(const std::string& key, int dimension) const {
  const std::vector<double> values = numbers(key);
  if (static_cast<int>(values.size()) != dimension) {
    bad(key, "an array of length " + std::to_string(dimension));
  }
  Vec out(dimension);
  for (int k = 0; k < dimension; ++k) out(k) = values[static_cast<std::size_t>(k)];
  return out;
}

bool Config::is_auto(const std::string& key) const {
  if (!has(key)) return true;
  const nlohmann::json& value = at(key);
  if (value.is_string()) {
    if (value.get<std::string>() != "auto") bad(key, "a number or \"auto\"");
    return true;
  }
  return false;
}

void Config::restrict_keys(const std::set<std::string>& allowed) const {
  for (auto it = raw_.begin(); it != raw_.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
  }
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  nlohmann::json raw;
  try {
    raw = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    std::string what = e.what();
    if (auto pos = what.find("parse error"); pos != std::string::npos) what = what.substr(pos);
    throw ConfigError(path + ":" + location(text, byte) + ": " + what);
  }
  if (!raw.is_object()) throw ConfigError(path + ":1:1: config must be a JSON object");
  return Config(path, std::move(raw));
}

}  // namespace levygrad::cli
