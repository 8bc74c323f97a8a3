#include "curvefem/lagrange.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/LU>

namespace curvefem {

namespace {

// Monomials are centred at the reference centroid to keep the Vandermonde
// matrix well conditioned at degree 5.
constexpr double kCentre = 1.0 / 3.0;

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

LagrangeBasis::LagrangeBasis(int degree) : degree_(degree) {
  if (degree < 1 || degree > kMaxDegree) {
    throw std::invalid_argument("Lagrange degree must be in 1.." + std::to_string(kMaxDegree) +
                                ", got " + std::to_string(degree));
  }
  const int k = degree;
  const double dk = static_cast<double>(k);
  const std::array<Barycentric, 3> vertex{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (const auto& v : vertex) nodes_.push_back(v);
  for (int e = 0; e < 3; ++e) {
    const auto& a = vertex[e];
    const auto& b = vertex[(e + 1) % 3];
    for (int m = 1; m < k; ++m) {
      const double s = m / dk;
      nodes_.push_back({(1 - s) * a[0] + s * b[0], (1 - s) * a[1] + s * b[1], (1 - s) * a[2] + s * b[2]});
    }
  }
  for (int j = 1; j < k; ++j) {
    for (int i = 1; i + j < k; ++i) {
      nodes_.push_back({(k - i - j) / dk, i / dk, j / dk});
    }
  }

  for (int total = 0; total <= k; ++total) {
    for (int b = 0; b <= total; ++b) exponents_.push_back({total - b, b});
  }

  const int n = size();
  Eigen::MatrixXd vandermonde(n, n);
  Eigen::VectorXd p(n);
  for (int j = 0; j < n; ++j) {
    monomials(reference_point(nodes_[j]), p);
    vandermonde.row(j) = p.transpose();
  }
  coefficients_ = vandermonde.fullPivLu().inverse();
}

void LagrangeBasis::monomials(const Point& ref, Eigen::VectorXd& p) const {
  const double x = ref.x() - kCentre;
  const double y = ref.y() - kCentre;
  p.resize(static_cast<Eigen::Index>(exponents_.size()));
  for (std::size_t m = 0; m < exponents_.size(); ++m) {
    p[static_cast<Eigen::Index>(m)] = ipow(x, exponents_[m][0]) * ipow(y, exponents_[m][1]);
  }
}

void LagrangeBasis::monomial_gradients(const Point& ref, Eigen::VectorXd& dx,
                                       Eigen::VectorXd& dy) const {
  const double x = ref.x() - kCentre;
  const double y = ref.y() - kCentre;
  const auto n = static_cast<Eigen::Index>(exponents_.size());
  dx.resize(n);
  dy.resize(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const auto [a, b] = exponents_[static_cast<std::size_t>(m)];
    dx[m] = a == 0 ? 0.0 : a * ipow(x, a - 1) * ipow(y, b);
    dy[m] = b == 0 ? 0.0 : b * ipow(x, a) * ipow(y, b - 1);
  }
}

void LagrangeBasis::values(const Point& ref, std::span<double> out) const {
  Eigen::VectorXd p;
  monomials(ref, p);
  const Eigen::VectorXd phi = coefficients_.transpose() * p;
  for (int i = 0; i < size(); ++i) out[static_cast<std::size_t>(i)] = phi[i];
}

void LagrangeBasis::gradients(const Point& ref, std::span<Point> out) const {
  Eigen::VectorXd dx;
  Eigen::VectorXd dy;
  monomial_gradients(ref, dx, dy);
  const Eigen::VectorXd gx = coefficients_.transpose() * dx;
  const Eigen::VectorXd gy = coefficients_.transpose() * dy;
  for (int i = 0; i < size(); ++i) out[static_cast<std::size_t>(i)] = Point(gx[i], gy[i]);
}

LagrangeBasis reference_basis(int degree) { return LagrangeBasis(degree); }

}  // namespace curvefem
