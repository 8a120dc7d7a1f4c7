#pragma once

#include <stdexcept>
#include <string>

namespace jostlab {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or configuration: the caller asked for something outside
// an operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DomainError {
 public:
  ParseError(const std::string& message, int line)
      : DomainError(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

// A numerical procedure failed to deliver a result at the requested accuracy.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Series summation hit its hard term cap.
class EvaluationError : public NumericalError {
 public:
  EvaluationError(const std::string& message, int terms_used)
      : NumericalError(message), terms_used_(terms_used) {}

  int terms_used() const noexcept { return terms_used_; }

 private:
  int terms_used_;
};

// No cutoff radius inside the admissible range satisfies the tail tolerance.
class CutoffError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Adaptive step size collapsed below the resolvable limit.
class StiffnessError : public NumericalError {
 public:
  StiffnessError(const std::string& message, double radius)
      : NumericalError(message), radius_(radius) {}

  double radius() const noexcept { return radius_; }

 private:
  double radius_;
};

// E = 0 requested where the momentum must be nonzero.
class ThresholdError : public DomainError {
 public:
  using DomainError::DomainError;
};

// |F_in| is below the underflow guard, so S has a pole at this energy.
class PoleSignal : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Numerov matching denominator vanished at the chosen radius.
class MatchError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace jostlab
