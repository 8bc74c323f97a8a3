#include "curvefem/fe_function.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

#include "curvefem/format.hpp"

namespace curvefem {

FeFunction::FeFunction(std::shared_ptr<const DofMap> dofmap)
    : dofmap_(std::move(dofmap)), coefficients_(static_cast<std::size_t>(dofmap_->num_dofs()), 0.0) {}

FeFunction::FeFunction(std::shared_ptr<const DofMap> dofmap, std::vector<double> coefficients)
    : dofmap_(std::move(dofmap)), coefficients_(std::move(coefficients)) {
  if (static_cast<int>(coefficients_.size()) != dofmap_->num_dofs()) {
    throw std::invalid_argument("coefficient vector length " + std::to_string(coefficients_.size()) +
                                " does not match dof count " + std::to_string(dofmap_->num_dofs()));
  }
}

FeFunction interpolate(const std::function<double(const Point&)>& target,
                       std::shared_ptr<const DofMap> dofmap) {
  std::vector<double> c(static_cast<std::size_t>(dofmap->num_dofs()));
  for (int i = 0; i < dofmap->num_dofs(); ++i) c[i] = target(dofmap->support_point(i));
  return FeFunction(std::move(dofmap), std::move(c));
}

PointValue evaluate(const FeFunction& u, int triangle, const Barycentric& point) {
  const DofMap& dm = u.dofmap();
  if (triangle < 0 || triangle >= dm.mesh().num_triangles()) {
    throw std::out_of_range("triangle index " + std::to_string(triangle) + " out of range");
  }
  const int n = dm.num_local_dofs();
  std::vector<double> phi(static_cast<std::size_t>(n));
  std::vector<Point> dphi(static_cast<std::size_t>(n));
  const Point ref = reference_point(point);
  dm.basis().values(ref, phi);
  dm.basis().gradients(ref, dphi);
  const AffineMap map = affine_map(dm.mesh(), triangle);
  const auto dofs = dm.cell_dofs(triangle);
  PointValue out;
  Point ref_grad = Point::Zero();
  for (int i = 0; i < n; ++i) {
    const double c = u.coefficients()[dofs[i]];
    out.value += c * phi[i];
    ref_grad += c * dphi[i];
  }
  out.gradient = map.physical_gradient(ref_grad);
  return out;
}

void write_csv(const FeFunction& u, std::ostream& out) {
  out << "dof_index,x,y,value\n";
  const DofMap& dm = u.dofmap();
  for (int i = 0; i < dm.num_dofs(); ++i) {
    const Point& p = dm.support_point(i);
    out << i << ',' << format_full(p.x()) << ',' << format_full(p.y()) << ','
        << format_full(u.coefficients()[i]) << '\n';
  }
}

}  // namespace curvefem
