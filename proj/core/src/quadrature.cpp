#include "curvefem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace curvefem {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one point");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

EdgeQuadrature edge_quadrature(int n_points) {
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(n_points, x, w);
  EdgeQuadrature rule;
  rule.exactness = 2 * n_points - 1;
  for (int i = 0; i < n_points; ++i) {
    rule.points.push_back(0.5 * (x[i] + 1.0));
    rule.weights.push_back(0.5 * w[i]);
  }
  return rule;
}

TriangleQuadrature triangle_quadrature(int exactness) {
  if (exactness < 1 || exactness > kMaxTriangleExactness) {
    throw std::invalid_argument("unsupported triangle quadrature exactness " +
                                std::to_string(exactness));
  }
  TriangleQuadrature rule;
  rule.exactness = exactness;
  if (exactness == 1) {
    rule.points.emplace_back(1.0 / 3.0, 1.0 / 3.0);
    rule.weights.push_back(0.5);
    return rule;
  }
  // xi = a (1 - b), eta = b with Jacobian (1 - b): degree p in (xi, eta)
  // becomes degree p in a and p + 1 in b.
  const int n = (exactness + 2 + 1) / 2;
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(n, x, w);
  for (int j = 0; j < n; ++j) {
    const double b = 0.5 * (x[j] + 1.0);
    for (int i = 0; i < n; ++i) {
      const double a = 0.5 * (x[i] + 1.0);
      rule.points.emplace_back(a * (1.0 - b), b);
      rule.weights.push_back(0.25 * w[i] * w[j] * (1.0 - b));
    }
  }
  return rule;
}

}  // namespace curvefem
