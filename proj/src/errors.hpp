#pragma once

#include <stdexcept>
#include <string>

namespace ioncool {

// Numerical failure (non-convergence, invariant violation beyond tolerance).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Newton / eigensolver did not converge.
class SolverError : public NumericError {
 public:
  explicit SolverError(const std::string& msg) : NumericError(msg) {}
};

// Linear chain is transversely unstable (some radial frequency^2 <= 0).
class InstabilityError : public std::runtime_error {
 public:
  explicit InstabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested state space exceeds the exact-simulation budget.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

// Config file errors, each a distinct class so callers can map them to
// distinct exit/error codes.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigIoError : public ConfigError {
 public:
  explicit ConfigIoError(const std::string& msg) : ConfigError(msg) {}
};

class ConfigSyntaxError : public ConfigError {
 public:
  ConfigSyntaxError(const std::string& msg, int line)
      : ConfigError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ConfigUnknownKeyError : public ConfigError {
 public:
  explicit ConfigUnknownKeyError(const std::string& key)
      : ConfigError("unknown config key: " + key), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class ConfigRangeError : public ConfigError {
 public:
  ConfigRangeError(const std::string& key, const std::string& why)
      : ConfigError("config value out of range for '" + key + "': " + why), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace ioncool
