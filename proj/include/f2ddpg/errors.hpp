#pragma once

#include <stdexcept>
#include <string>

namespace f2ddpg {

// Invalid or inconsistent configuration values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector/matrix dimensions that do not line up.
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values where finite ones are required.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, int index)
      : std::runtime_error(what + " (index " + std::to_string(index) + ")"),
        index_(index) {}

  // Layer index for network errors, agent index for bias errors.
  int index() const { return index_; }

 private:
  int index_;
};

// Caller broke an operation's contract (wrong counts, wrong layouts).
class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or incompatible files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace f2ddpg
