#pragma once

#include <stdexcept>
#include <string>

namespace hypflow {

/// A point, direction, or parameter lies outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative solver failed to converge within its iteration cap.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A function advertised as convex was observed to violate convexity.
class ConvexityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A search bracket did not contain the requested value.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Malformed or inconsistent configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hypflow
