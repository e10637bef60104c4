#pragma once

#include <stdexcept>
#include <string>

namespace vppart {

// Caller broke a documented precondition (dimension mismatch, empty store, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Boundary computation asked for more subsets than there are distances.
class InvalidPartition : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A failure region with the requested rate cannot be placed in the domain.
class InfeasibleRegion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Nearest-distance query against a tree that holds no points.
class NoNeighbors : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad experiment configuration (file contents or command-line flags).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vppart
