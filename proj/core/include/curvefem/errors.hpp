#pragma once

#include <stdexcept>
#include <string>

namespace curvefem {

/// Violation of a geometric assumption (missed boundary, sign change along an
/// edge, division by a vanishing gap).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative solver breakdown or failure to reach the requested tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace curvefem
