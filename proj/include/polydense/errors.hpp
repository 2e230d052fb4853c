#pragma once

#include <stdexcept>
#include <string>

namespace polydense {

// Base for all library errors so callers can catch one type at the boundary.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument or configuration value.
class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// An integrand or summand produced NaN at a known point.
class EvaluationError : public Error {
public:
  EvaluationError(const std::string& what, double where)
      : Error(what), where_(where) {}
  double where() const { return where_; }

private:
  double where_;
};

// A quantity that must be finite was detected as infinite.
class DivergenceError : public Error {
public:
  explicit DivergenceError(const std::string& what) : Error(what) {}
};

// Numeric results contradict each other or a certified precondition.
class InconsistencyError : public Error {
public:
  explicit InconsistencyError(const std::string& what) : Error(what) {}
};

// Recurrence construction hit a measure with too few points of support.
class DegeneracyError : public Error {
public:
  DegeneracyError(const std::string& what, int degree)
      : Error(what), degree_(degree) {}
  int degree() const { return degree_; }

private:
  int degree_;
};

// Malformed input file.
class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace polydense
