#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace drivensys {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Default tolerance for treating two state points as the same point.
inline constexpr double kDedupTolerance = 1e-12;

// Error hierarchy. Everything derives from Error so callers (the CLI in
// particular) can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point was outside the box its map is declared on.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Inverting g(., x) was requested outside the set where it is defined.
class InversionDomainError : public Error {
 public:
  using Error::Error;
};

/// An encoding did not shrink to a singleton within the allowed depth.
class NotSingletonError : public Error {
 public:
  NotSingletonError(const std::string& what, double diameter)
      : Error(what), diameter_(diameter) {}
  double diameter() const { return diameter_; }

 private:
  double diameter_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class InsufficientHistoryError : public Error {
 public:
  using Error::Error;
};

/// Raised when an internal guarantee does not hold; always a bug.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Axis-aligned closed box in R^n.
struct Box {
  Vector lower;
  Vector upper;

  Box() = default;
  Box(Vector lo, Vector hi);

  static Box cube(std::size_t dim, double lo, double hi);

  std::size_t dim() const { return static_cast<std::size_t>(lower.size()); }
  bool contains(const Vector& x, double tol = kDedupTolerance) const;
  double diameter() const { return (upper - lower).norm(); }
  /// All 2^dim corners, enumerated with axis 0 varying fastest.
  std::vector<Vector> corners() const;
};

inline double distance(const Vector& a, const Vector& b) { return (a - b).norm(); }

Vector scalar(double v);

}  // namespace drivensys
