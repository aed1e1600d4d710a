#pragma once

#include <stdexcept>
#include <string>

namespace ponder {

/// Argument outside the mathematical or physical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A series or basis expansion could not reach its accuracy target.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Period requested for a separatrix trajectory.
class InfinitePeriodError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive integrator step size fell below its floor.
class StiffnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid scenario configuration. `key` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IOError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ponder
