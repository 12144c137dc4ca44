#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "levygrad/linalg.hpp"

namespace levygrad::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  Config(std::string path, nlohmann::json raw) : path_(std::move(path)), raw_(std::move(raw)) {}

  const std::string& path() const { return path_; }
  const nlohmann::json& raw() const { return raw_; }

  bool has(const std::string& key) const { return raw_.contains(key); }
  const nlohmann::json& at(const std::string& key) const;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  std::uint64_t seed() const;
  std::string string(const std::string& key, const std::string& fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  Vec vector(const std::string& key, int dimension) const;
  /// True when the key holds the string "auto" (or is absent).
  bool is_auto(const std::string& key) const;

  /// Rejects keys outside `allowed`.
  void restrict_keys(const std::set<std::string>& allowed) const;

 private:
  std::string path_;
  nlohmann::json raw_;
};

/// Parses a JSON object from `path`. Syntax errors are reported as path:line:col.
Config load_config(const std::string& path);

}  // namespace levygrad::cli
