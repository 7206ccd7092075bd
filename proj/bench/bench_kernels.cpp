// Serial references against the OpenMP kernels, and the two phi_1 paths.

#include <benchmark/benchmark.h>

#include <random>

#include "fvetd/fields.hpp"
#include "fvetd/kernels.hpp"
#include "fvetd/mesh.hpp"
#include "fvetd/phi.hpp"
#include "fvetd/tpfa.hpp"

using namespace fvetd;

namespace {

DiscreteOperator diffusion_operator(Index n) {
  const auto m = build_grid(3, std::vector<Index>{n, n, n}, std::vector<double>(3, 1.0 / static_cast<double>(n)));
  const auto cells = static_cast<std::size_t>(m.num_cells());
  std::mt19937_64 rng(1);
  std::lognormal_distribution<double> ln(0.0, 1.0);
  std::vector<std::array<double, 3>> dv(cells);
  for (auto& v : dv) v = {ln(rng), ln(rng), ln(rng)};
  BoundarySpec bc(m);
  for (Index f = 0; f < m.num_faces(); ++f) {
    if (m.face(f).is_boundary()) bc[f] = {BoundaryKind::Dirichlet, [](const Point&, double) { return 0.0; }};
  }
  return assemble(m, diffusion_from_cells(dv, m), zero_fluxes(m), ScalarCellField(cells, 1.0), bc);
}

Vector random_vector(Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  return Vector::NullaryExpr(n, [&] { return g(rng); });
}

template <bool Parallel>
void BM_spmv(benchmark::State& state) {
  const auto op = diffusion_operator(state.range(0));
  const Vector x = random_vector(op.size(), 2);
  Vector y(op.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::spmv(op.scaled, kernels::view(x), kernels::view(y));
    } else {
      kernels::spmv_serial(op.scaled, kernels::view(x), kernels::view(y));
    }
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * op.scaled.nonZeros());
}

template <bool Parallel>
void BM_dot(benchmark::State& state) {
  const Vector x = random_vector(state.range(0), 3);
  const Vector y = random_vector(state.range(0), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Parallel ? kernels::dot(kernels::view(x), kernels::view(y))
                                      : kernels::dot_serial(kernels::view(x), kernels::view(y)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_axpy(benchmark::State& state) {
  const Vector x = random_vector(state.range(0), 5);
  Vector y = random_vector(state.range(0), 6);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::axpy(1e-9, kernels::view(x), kernels::view(y));
    } else {
      kernels::axpy_serial(1e-9, kernels::view(x), kernels::view(y));
    }
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_phi1(benchmark::State& state, PhiMethod method) {
  const auto op = diffusion_operator(state.range(0));
  const auto lin = make_operator(op.scaled);
  const Vector v = random_vector(op.size(), 7);
  PhiActionConfig cfg;
  cfg.method = method;
  const double dt = 1e-4;
  int matvecs = 0;
  for (auto _ : state) {
    const auto r = phi1_action(lin, dt, v, cfg);
    matvecs = r.diagnostics.matvecs;
    benchmark::DoNotOptimize(r.w.data());
  }
  state.counters["matvecs"] = matvecs;
}

} // namespace

BENCHMARK(BM_spmv<false>)->Name("spmv/serial")->Arg(32)->Arg(64)->Arg(96);
BENCHMARK(BM_spmv<true>)->Name("spmv/openmp")->Arg(32)->Arg(64)->Arg(96);
BENCHMARK(BM_dot<false>)->Name("dot/serial")->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(BM_dot<true>)->Name("dot/openmp")->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(BM_axpy<false>)->Name("axpy/serial")->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(BM_axpy<true>)->Name("axpy/openmp")->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK_CAPTURE(BM_phi1, krylov, PhiMethod::Krylov)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_phi1, leja, PhiMethod::Leja)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  kernels::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
