#pragma once

#include <stdexcept>
#include <string>

namespace dwork {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched contexts, degrees, or malformed user configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvertError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class ReversionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class PrecisionError : public Error {
 public:
  using Error::Error;
};

class InfiniteIndexError : public Error {
 public:
  using Error::Error;
};

class ExpansionError : public Error {
 public:
  using Error::Error;
};

// A computed quantity contradicts a proven divisibility statement.
class TheoremViolation : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

class ReductionError : public Error {
 public:
  ReductionError(const std::string& what, long degree)
      : Error(what + " (degree " + std::to_string(degree) + ")"), degree_(degree) {}
  long degree() const { return degree_; }

 private:
  long degree_;
};

}  // namespace dwork
