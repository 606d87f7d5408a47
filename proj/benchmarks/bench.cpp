// Timings for the hot paths: matrix assembly, the nonlinear state solve, the
// coupled optimality-system solve, and the certificate constants. Grid sizes
// are the benchmark argument where they matter.

#include <benchmark/benchmark.h>

#include <cmath>

#include "optcert/certificate.hpp"
#include "optcert/constants.hpp"
#include "optcert/fem.hpp"
#include "optcert/kkt.hpp"
#include "optcert/mesh.hpp"
#include "optcert/nonlinearity.hpp"

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double desired(double x, double y) {
  return 2.0 * std::sin(2.0 * kPi * x) * std::sin(2.0 * kPi * y);
}

void bm_assemble_stiffness(benchmark::State& state) {
  const optcert::Mesh mesh = optcert::build_uniform(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(optcert::assemble_stiffness(mesh));
  }
}
BENCHMARK(bm_assemble_stiffness)->Arg(32)->Arg(64)->Arg(128);

void bm_assemble_mass(benchmark::State& state) {
  const optcert::Mesh mesh = optcert::build_uniform(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(optcert::assemble_mass(mesh));
  }
}
BENCHMARK(bm_assemble_mass)->Arg(32)->Arg(64)->Arg(128);

void bm_assemble_semilinear_jacobian(benchmark::State& state) {
  const optcert::Mesh mesh = optcert::build_uniform(static_cast<int>(state.range(0)));
  const optcert::Nonlinearity phi = optcert::cubic();
  optcert::P1Function y(mesh);
  for (std::size_t i = 0; i < mesh.node_count(); ++i)
    y.values[i] = desired(mesh.nodes[i].x, mesh.nodes[i].y);
  for (auto _ : state) {
    benchmark::DoNotOptimize(optcert::assemble_semilinear_jacobian(mesh, phi, y));
  }
}
BENCHMARK(bm_assemble_semilinear_jacobian)->Arg(32)->Arg(64);

void bm_clamped_load(benchmark::State& state) {
  const optcert::Mesh mesh = optcert::build_uniform(32);
  optcert::ClampedLoad load;
  load.base = optcert::P1Function(mesh);
  for (std::size_t i = 0; i < mesh.node_count(); ++i)
    load.base.values[i] = 8.0 * (mesh.nodes[i].x - 0.5);
  load.lo = -2.0;
  load.hi = 2.0;
  load.exact_split = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optcert::assemble_load(mesh, load));
  }
}
BENCHMARK(bm_clamped_load)->Arg(0)->Arg(1);

void bm_solve_state(benchmark::State& state) {
  const optcert::Mesh mesh = optcert::build_uniform(static_cast<int>(state.range(0)));
  const optcert::Nonlinearity phi = optcert::cubic();
  const optcert::AnalyticLoad rhs{[](double x, double y) {
    const double v = std::sin(kPi * x) * std::sin(kPi * y);
    return 2.0 * kPi * kPi * v + v * v * v;
  }};
  for (auto _ : state) {
    benchmark::DoNotOptimize(optcert::solve_state(mesh, phi, rhs));
  }
}
BENCHMARK(bm_solve_state)->Arg(16)->Arg(32)->Arg(64);

void bm_solve_kkt(benchmark::State& state) {
  const optcert::Mesh mesh = optcert::build_uniform(static_cast<int>(state.range(0)));
  optcert::OcpSpec spec;
  spec.alpha = 1e-2;
  spec.phi = optcert::cubic();
  spec.y0 = desired;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optcert::solve_kkt(spec, mesh));
  }
}
BENCHMARK(bm_solve_kkt)->Arg(16)->Arg(32);

void bm_solve_kkt_state_constrained(benchmark::State& state) {
  const optcert::Mesh mesh = optcert::build_uniform(static_cast<int>(state.range(0)));
  optcert::OcpSpec spec;
  spec.alpha = 1e-2;
  spec.phi = optcert::cubic();
  spec.y0 = desired;
  spec.constraint_region = optcert::Region::all_interior();
  spec.y_lower = [](double, double) { return -1.0; };
  spec.y_upper = [](double, double) { return 1.0; };
  for (auto _ : state) {
    benchmark::DoNotOptimize(optcert::solve_kkt(spec, mesh));
  }
}
BENCHMARK(bm_solve_kkt_state_constrained)->Arg(16)->Arg(32);

void bm_gn_constant(benchmark::State& state) {
  const double q = state.range(0) == 0 ? 4.0 : 6.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optcert::constants::gn_constant(q));
  }
}
BENCHMARK(bm_gn_constant)->Arg(0)->Arg(1);

void bm_certify(benchmark::State& state) {
  const optcert::Mesh mesh = optcert::build_uniform(32);
  optcert::OcpSpec spec;
  spec.alpha = 1e-2;
  spec.phi = optcert::cubic();
  spec.y0 = desired;
  const optcert::KktSolution sol = optcert::solve_kkt(spec, mesh);
  for (auto _ : state) {
    benchmark::DoNotOptimize(optcert::certify(sol, spec));
  }
}
BENCHMARK(bm_certify);

}  // namespace

BENCHMARK_MAIN();
