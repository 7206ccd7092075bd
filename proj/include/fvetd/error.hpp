#pragma once

#include <stdexcept>
#include <string>

namespace fvetd {

/// Violated precondition on a user-supplied argument.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Inconsistent problem setup (missing boundary condition, bad config value).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A solver did not reach its target (iteration cap, substep cap, NaN).
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace fvetd
