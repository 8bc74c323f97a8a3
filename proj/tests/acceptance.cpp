// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "curvefem/analysis.hpp"
#include "curvefem/errors.hpp"
#include "curvefem/format.hpp"
#include "curvefem/solvers.hpp"
#include "support.hpp"

using namespace curvefem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Column {
  std::vector<double> err;
  std::vector<double> h;
  double rate(std::size_t i) const { return testing::rate(err[i - 1], err[i], h[i - 1], h[i]); }
  double final_rate() const { return rate(err.size() - 1); }
  bool decreasing() const {
    for (std::size_t i = 1; i < err.size(); ++i) {
      if (!(err[i] < err[i - 1])) return false;
    }
    return true;
  }
};

struct Table {
  Column l2, h1, bdry;
};

// Solves are cached so that criteria sharing a configuration reuse them.
class Runs {
 public:
  ErrorNorms get(DomainKind domain, Method method, int k, int M, double eps, double* hmax = nullptr) {
    const auto key = std::make_tuple(static_cast<int>(domain), static_cast<int>(method), k, M, eps);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      ProblemSpec spec;
      spec.domain = domain;
      spec.M = M;
      MethodConfig c;
      c.method = method;
      c.degree = k;
      if (method == Method::robin) c.epsilon = eps;
      const SolveOutcome out = solve_and_measure(make_problem(spec), c);
      it = cache_.emplace(key, std::make_pair(out.errors, out.hmax)).first;
    }
    if (hmax) *hmax = it->second.second;
    return it->second.first;
  }

  Table table(DomainKind domain, Method method, int k, const std::vector<int>& ms, double eps) {
    Table t;
    for (int M : ms) {
      double h = 0.0;
      const ErrorNorms e = get(domain, method, k, M, eps, &h);
      t.l2.err.push_back(e.l2);
      t.h1.err.push_back(e.h1);
      t.bdry.err.push_back(e.boundary);
      t.l2.h.push_back(h);
      t.h1.h.push_back(h);
      t.bdry.h.push_back(h);
    }
    return t;
  }

 private:
  std::map<std::tuple<int, int, int, int, double>, std::pair<ErrorNorms, double>> cache_;
};

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

std::string r3(double v) { return format_rate(v); }

class Report {
 public:
  void line(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("criterion %d: %s  %s [%s]\n", id, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
    failures_ += pass ? 0 : 1;
  }
  void error(int id, const std::string& what, const std::exception& e) {
    line(id, false, what, std::string("exception: ") + e.what());
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

const std::vector<int> kFine{16, 32, 64};

void criterion1(Runs& runs, Report& rep) {
  const auto t0 = Clock::now();
  const std::vector<int> ms{4, 8, 16};
  const double k1 = runs.table(DomainKind::disc, Method::plain, 1, ms, 0).h1.final_rate();
  const double k2 = runs.table(DomainKind::disc, Method::plain, 2, ms, 0).h1.final_rate();
  const double k3 = runs.table(DomainKind::disc, Method::plain, 3, ms, 0).h1.final_rate();
  const double secs = seconds_since(t0);
  const bool pass = k1 >= 0.85 && k1 <= 1.15 && k2 >= 1.3 && k2 <= 1.7 && k3 >= 1.3 && k3 <= 1.7 && secs < 60;
  rep.line(1, pass, "plain method H1 rate ceiling",
           "k=1 " + r3(k1) + ", k=2 " + r3(k2) + ", k=3 " + r3(k3) + ", " + r3(secs) + " s");
}

// Shared check for the BDT and Robin disc tables.
void rate_table_criterion(Runs& runs, Report& rep, int id, Method method, double eps, bool with_boundary,
                          const std::string& what) {
  const auto t0 = Clock::now();
  std::vector<Table> t(6);
  for (int k = 2; k <= 5; ++k) t[k] = runs.table(DomainKind::disc, method, k, kFine, eps);
  bool pass = within(t[2].l2.final_rate(), 3.0, 0.25) && within(t[2].h1.final_rate(), 2.0, 0.25) &&
              within(t[3].l2.final_rate(), 4.0, 0.25) && within(t[3].h1.final_rate(), 3.0, 0.25) &&
              within(t[4].h1.final_rate(), 3.5, 0.3) &&
              within(t[5].h1.final_rate(), t[4].h1.final_rate(), 0.15);
  std::ostringstream d;
  d << "k=2 L2 " << r3(t[2].l2.final_rate()) << " H1 " << r3(t[2].h1.final_rate());
  if (with_boundary) {
    pass = pass && within(t[2].bdry.final_rate(), 3.0, 0.3) && within(t[4].bdry.final_rate(), 3.0, 0.3);
    d << " bdry " << r3(t[2].bdry.final_rate());
  }
  d << "; k=3 L2 " << r3(t[3].l2.final_rate()) << " H1 " << r3(t[3].h1.final_rate());
  d << "; k=4 H1 " << r3(t[4].h1.final_rate());
  if (with_boundary) d << " bdry " << r3(t[4].bdry.final_rate());
  d << "; k=5 H1 " << r3(t[5].h1.final_rate());
  const double secs = seconds_since(t0);
  if (id == 2) pass = pass && secs < 600;
  d << "; " << r3(secs) << " s";
  rep.line(id, pass, what, d.str());
}

void criterion4(Runs& runs, Report& rep) {
  const double e9 = runs.get(DomainKind::disc, Method::robin, 2, 64, 1e-9).l2;
  const double e10 = runs.get(DomainKind::disc, Method::robin, 2, 64, 1e-10).l2;
  const double e13 = runs.get(DomainKind::disc, Method::robin, 2, 64, 1e-13).l2;
  const double e0 = runs.get(DomainKind::disc, Method::robin, 2, 64, 0.0).l2;
  const double d1 = std::abs(e9 - e10) / e10;
  const double d2 = std::abs(e0 - e13) / e13;
  rep.line(4, d1 < 0.01 && d2 < 0.01, "epsilon robustness at k=2, M=64",
           "L2 1e-9 vs 1e-10 rel diff " + format_short(d1) + ", 0 vs 1e-13 rel diff " + format_short(d2));
}

void criterion5(Runs& runs, Report& rep) {
  bool pass = true;
  std::ostringstream d;
  for (int k = 2; k <= 4; ++k) {
    const Table t = runs.table(DomainKind::annulus, Method::robin, k, kFine, 1e-9);
    pass = pass && t.l2.decreasing() && t.h1.decreasing() && t.bdry.decreasing();
    const double min_h1 = std::min(t.h1.rate(1), t.h1.rate(2));
    if (k == 2) pass = pass && min_h1 >= 1.9;
    if (k == 3) pass = pass && min_h1 >= 2.7;
    d << (k > 2 ? "; " : "") << "k=" << k << " H1 rates " << r3(t.h1.rate(1)) << "/" << r3(t.h1.rate(2))
      << (t.l2.decreasing() && t.h1.decreasing() && t.bdry.decreasing() ? " decreasing" : " NOT decreasing");
  }
  rep.line(5, pass, "annulus Robin with eps=1e-9", d.str());
}

void criterion6(Report& rep) {
  double worst_sym = 0.0;
  double least_bdt = std::numeric_limits<double>::infinity();
  for (int M : {4, 8, 16, 32, 64}) {
    const auto mesh = std::make_shared<const Mesh>(build_disc_mesh(M, 5 * M, 1.0));
    for (int k = 2; k <= kMaxDegree; ++k) {
      const auto dm = build_dofmap(mesh, k, DomainGeometry::disc(1.0));
      MethodConfig c;
      c.degree = k;
      for (Method m : {Method::robin, Method::bdt_symmetric, Method::bdt}) {
        c.method = m;
        const double s = check_symmetry(assemble(*dm, c).matrix);
        if (m == Method::bdt) {
          least_bdt = std::min(least_bdt, s);
        } else {
          worst_sym = std::max(worst_sym, s);
        }
      }
    }
  }
  rep.line(6, worst_sym < 1e-12 && least_bdt > 1e-6, "matrix symmetry structure",
           "max Robin/M_h asymmetry " + format_short(worst_sym) + ", min BDT asymmetry " +
               format_short(least_bdt) + " over M=4..64, k=2..5");
}

void criterion7(Report& rep) {
  const DomainGeometry geom = DomainGeometry::disc(1.0);
  const EdgeQuadrature q = edge_quadrature(8);
  std::vector<double> lh;
  std::vector<double> le;
  std::ostringstream d;
  for (int M : {8, 16, 32, 64}) {
    const Mesh mesh = build_disc_mesh(M, 5 * M, 1.0);
    double worst = 0.0;
    for (const BoundaryEdge& e : mesh.boundary_edges()) {
      const Point a = mesh.vertex(e.vertices[0]);
      const Point b = mesh.vertex(e.vertices[1]);
      for (double t : q.points) {
        const Point x = (1.0 - t) * a + t * b;
        worst = std::max(worst, std::abs(dist(geom, x) - std::abs(testing::circle_gap(geom, x, e.normal))));
      }
    }
    lh.push_back(std::log(mesh.hmax()));
    le.push_back(std::log(worst));
    d << "M=" << M << " " << format_short(worst) << ", ";
  }
  // least-squares slope of log error against log h
  const double n = static_cast<double>(lh.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lh.size(); ++i) {
    sx += lh[i];
    sy += le[i];
    sxx += lh[i] * lh[i];
    sxy += lh[i] * le[i];
  }
  const double p = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  d << "p " << r3(p);
  rep.line(7, p >= 3.7 && p <= 4.3, "|d - delta| scales as h^p", d.str());
}

void criterion8(Report& rep) {
  bool pass = true;
  std::ostringstream d;
  for (int k : {2, 3}) {
    double prev = 0.0;
    d << (k > 2 ? "; " : "") << "k=" << k;
    for (int M : {8, 16, 32}) {
      const auto dm = build_dofmap(std::make_shared<const Mesh>(build_disc_mesh(M, 5 * M, 1.0)), k,
                                   DomainGeometry::disc(1.0));
      const double ratio = testing::gamma_edge_ratio(dm, 50, 2024 + k);
      pass = pass && std::isfinite(ratio) && (prev == 0.0 || ratio < 1.25 * prev);
      d << " " << r3(ratio);
      prev = ratio;
    }
  }
  rep.line(8, pass, "inverse estimate ratio on Gamma-edge vectors", d.str());
}

void criterion9(Report& rep) {
  const Problem p = make_problem(ProblemSpec{DomainKind::disc, 8});
  double worst = 0.0;
  for (int k = 1; k <= kMaxDegree; ++k) {
    MethodConfig c;
    c.degree = k;
    const SolveOutcome out = solve_and_measure(p, c);
    const auto o = testing::oracle_norms(out.solution.uh, testing::exact_reference(p.geometry.solution()),
                                         std::max(2 * k + 2, 12) + 4, k + 2);
    worst = std::max({worst, std::abs(out.errors.l2 - o.l2) / o.l2, std::abs(out.errors.h1 - o.h1) / o.h1,
                      std::abs(out.errors.boundary - o.boundary) / o.boundary});
  }
  const auto dm = build_dofmap(p.mesh, 2, p.geometry);
  const LinearSystem sys = assemble(*dm, MethodConfig{});
  const SolveResult cg = solve(sys, SolverKind::cg);
  const SolveResult lu = solve(sys, SolverKind::dense_lu);
  FeFunction diff(dm);
  FeFunction ref(dm, lu.x);
  for (int i = 0; i < dm->num_dofs(); ++i) diff.coefficients()[i] = cg.x[i] - lu.x[i];
  const double a_rel = energy_norm(diff) / energy_norm(ref);
  rep.line(9, worst < 1e-8 && a_rel < 1e-8, "oracle equivalence",
           "error norms vs +4 oracle max rel diff " + format_short(worst) + ", CG (" +
               std::to_string(cg.iterations) + " its) vs dense LU a-norm rel diff " + format_short(a_rel));
}

void criterion10(Report& rep) {
  ProblemSpec spec{DomainKind::disc, 16};
  spec.segs = 80;
  const Problem p = make_problem(spec);
  MethodConfig c;
  c.method = Method::robin;
  const SolveOutcome robin = solve_and_measure(p, c);
  c.method = Method::plain;
  const SolveOutcome plain = solve_and_measure(p, c);
  const double rr = interior_error_ratio(robin.solution.uh, robin.ui, 0.5);
  const double rp = interior_error_ratio(plain.solution.uh, plain.ui, 0.5);
  rep.line(10, rr < 0.2 && rp > 0.5, "boundary layer vs global error at k=2, segs=80",
           "interior/global max error: Robin " + r3(rr) + ", plain " + r3(rp));
}

void guarded(Report& rep, int id, const std::string& what, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    rep.error(id, what, e);
  }
}

}  // namespace

int main() {
  Runs runs;
  Report rep;
  guarded(rep, 1, "plain method H1 rate ceiling", [&] { criterion1(runs, rep); });
  guarded(rep, 2, "BDT rates with gamma=100", [&] {
    rate_table_criterion(runs, rep, 2, Method::bdt, 0.0, false, "BDT rates with gamma=100");
  });
  guarded(rep, 3, "Robin rates with eps=1e-13", [&] {
    rate_table_criterion(runs, rep, 3, Method::robin, 1e-13, true, "Robin rates with eps=1e-13");
  });
  guarded(rep, 4, "epsilon robustness", [&] { criterion4(runs, rep); });
  guarded(rep, 5, "annulus Robin", [&] { criterion5(runs, rep); });
  guarded(rep, 6, "matrix symmetry structure", [&] { criterion6(rep); });
  guarded(rep, 7, "|d - delta| scaling", [&] { criterion7(rep); });
  guarded(rep, 8, "inverse estimate ratio", [&] { criterion8(rep); });
  guarded(rep, 9, "oracle equivalence", [&] { criterion9(rep); });
  guarded(rep, 10, "boundary layer", [&] { criterion10(rep); });
  std::printf("%d of 10 criteria failed\n", rep.failures());
  return rep.failures() == 0 ? 0 : 1;
}
