#include <memory>

#include <benchmark/benchmark.h>

#include "curvefem/analysis.hpp"
#include "curvefem/methods.hpp"

using namespace curvefem;

namespace {

std::shared_ptr<const DofMap> disc_dofmap(int M, int k) {
  return build_dofmap(std::make_shared<const Mesh>(build_disc_mesh(M, 5 * M, 1.0)), k,
                      DomainGeometry::disc(1.0));
}

void BM_DiscMesh(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_disc_mesh(M, 5 * M, 1.0));
}
BENCHMARK(BM_DiscMesh)->Arg(16)->Arg(64);

void BM_DofMap(benchmark::State& state) {
  const auto mesh = std::make_shared<const Mesh>(build_disc_mesh(32, 160, 1.0));
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_dofmap(mesh, k, DomainGeometry::disc(1.0)));
}
BENCHMARK(BM_DofMap)->Arg(2)->Arg(5);

void BM_Assemble(benchmark::State& state) {
  const auto dm = disc_dofmap(32, static_cast<int>(state.range(1)));
  MethodConfig c;
  c.method = static_cast<Method>(state.range(0));
  c.degree = dm->degree();
  for (auto _ : state) benchmark::DoNotOptimize(assemble(*dm, c));
  state.SetLabel(to_string(c.method));
}
BENCHMARK(BM_Assemble)
    ->Args({static_cast<int>(Method::robin), 2})
    ->Args({static_cast<int>(Method::bdt), 2})
    ->Args({static_cast<int>(Method::robin), 4})
    ->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const auto dm = disc_dofmap(static_cast<int>(state.range(0)), 2);
  const LinearSystem sys = assemble(*dm, MethodConfig{});
  const auto kind = static_cast<SolverKind>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(solve(sys, kind));
  state.counters["dofs"] = dm->num_dofs();
}
BENCHMARK(BM_Solve)
    ->Args({32, static_cast<int>(SolverKind::automatic)})
    ->Args({32, static_cast<int>(SolverKind::cg)})
    ->Args({64, static_cast<int>(SolverKind::automatic)})
    ->Unit(benchmark::kMillisecond);

void BM_ErrorNorms(benchmark::State& state) {
  const Problem p = make_problem(ProblemSpec{DomainKind::disc, 32});
  const SolveOutcome out = solve_and_measure(p, MethodConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(error_norms(out.solution.uh, p.geometry.solution()));
}
BENCHMARK(BM_ErrorNorms)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
