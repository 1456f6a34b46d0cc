#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gfd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad grid/cloud: too small, duplicate nodes, out-of-domain nodes,
/// missing neighbours.
class InvalidDiscretization : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SingularWeight : public Error {
 public:
  using Error::Error;
};

class DegenerateStar : public Error {
 public:
  DegenerateStar(std::size_t center, const std::string& what)
      : Error("degenerate star at node " + std::to_string(center) + ": " + what),
        center_(center) {}
  std::size_t center() const { return center_; }

 private:
  std::size_t center_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Initial data or model parameters violate the well-posedness hypotheses.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

class SolverSetupError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t node, long step, const std::string& what)
      : Error("divergence at node " + std::to_string(node) + ", step " +
              std::to_string(step) + ": " + what),
        node_(node),
        step_(step) {}
  std::size_t node() const { return node_; }
  long step() const { return step_; }

 private:
  std::size_t node_;
  long step_;
};

class StabilityViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class ComparisonError : public Error {
 public:
  using Error::Error;
};

}  // namespace gfd
