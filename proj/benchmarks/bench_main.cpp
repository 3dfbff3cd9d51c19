#include <benchmark/benchmark.h>

#include "condlab/solver.hpp"

using namespace condlab;

namespace {

PointCloud sphere_cloud(int resolution) {
  return sample_sphere_surface(3, Eigen::Vector3d::Zero(), 0.5, resolution, 3);
}

void bm_riesz_matrix(benchmark::State& state) {
  KernelSpec spec(2.0, 3);
  PointCloud c = sphere_cloud((int)state.range(0));
  DiagonalPolicy policy = surface_mollifier(c);
  for (auto _ : state) {
    Eigen::MatrixXd m = assemble_kernel_matrix(spec, c, policy);
    benchmark::DoNotOptimize(m.data());
  }
  state.SetComplexityN(c.size());
}

void bm_green_matrix(benchmark::State& state) {
  KernelSpec spec(2.0, 3);
  GreenKernelEngine engine(spec, DomainGeometry::make_ball(Eigen::Vector3d::Zero(), 1.0));
  PointCloud c = sphere_cloud((int)state.range(0));
  for (auto _ : state) {
    Eigen::MatrixXd m = engine.matrix(c, DiagonalPolicy::patch());
    benchmark::DoNotOptimize(m.data());
  }
  state.SetComplexityN(c.size());
}

void bm_equilibrium(benchmark::State& state) {
  KernelSpec spec(2.0, 3);
  PointCloud c = sphere_cloud((int)state.range(0));
  for (auto _ : state) {
    EquilibriumResult r = riesz_equilibrium(spec, c);
    benchmark::DoNotOptimize(r.capacity);
  }
}

void bm_solve_green_gauss(benchmark::State& state) {
  KernelSpec spec(2.0, 3);
  DomainGeometry ball = DomainGeometry::make_ball(Eigen::Vector3d::Zero(), 1.0);
  GreenKernelEngine engine(spec, ball);
  CondenserProblem p;
  p.spec = spec;
  p.geometry = ball;
  p.a_cloud = sphere_cloud((int)state.range(0));
  for (auto _ : state) {
    SolveReport rep = solve_green_gauss(p, engine);
    benchmark::DoNotOptimize(rep.objective_green);
  }
}

void bm_dirac_sweep(benchmark::State& state) {
  KernelSpec spec(2.0, 3);
  GreenKernelEngine engine(spec, DomainGeometry::make_ball(Eigen::Vector3d::Zero(), 1.0),
                           (int)state.range(0));
  DiscreteMeasure nu = DiscreteMeasure::unit_atom(Eigen::Vector3d(0.3, 0.1, 0.0));
  for (auto _ : state) {
    BalayageResult r = engine.sweep(nu);
    benchmark::DoNotOptimize(r.swept.total_mass());
  }
}

BENCHMARK(bm_riesz_matrix)->Arg(200)->Arg(400)->Arg(800)->Complexity();
BENCHMARK(bm_green_matrix)->Arg(200)->Arg(400)->Arg(800)->Complexity();
BENCHMARK(bm_equilibrium)->Arg(200)->Arg(400);
BENCHMARK(bm_solve_green_gauss)->Arg(200)->Arg(400);
BENCHMARK(bm_dirac_sweep)->Arg(200)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
