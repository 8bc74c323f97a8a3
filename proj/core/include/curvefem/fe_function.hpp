#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "curvefem/dofmap.hpp"

namespace curvefem {

/// Coefficient vector over a DofMap.
class FeFunction {
 public:
  explicit FeFunction(std::shared_ptr<const DofMap> dofmap);
  FeFunction(std::shared_ptr<const DofMap> dofmap, std::vector<double> coefficients);

  const DofMap& dofmap() const { return *dofmap_; }
  std::shared_ptr<const DofMap> dofmap_ptr() const { return dofmap_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  std::vector<double>& coefficients() { return coefficients_; }

 private:
  std::shared_ptr<const DofMap> dofmap_;
  std::vector<double> coefficients_;
};

/// Lagrange interpolant: coefficients are the target at the support points.
FeFunction interpolate(const std::function<double(const Point&)>& target,
                       std::shared_ptr<const DofMap> dofmap);

struct PointValue {
  double value = 0.0;
  Point gradient = Point::Zero();
};

/// Value and physical gradient on one triangle at a barycentric point.
/// Throws std::out_of_range for an invalid triangle index.
PointValue evaluate(const FeFunction& u, int triangle, const Barycentric& point);

/// CSV with header `dof_index,x,y,value`, 17 significant digits.
void write_csv(const FeFunction& u, std::ostream& out);

}  // namespace curvefem
