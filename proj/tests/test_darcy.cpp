#include <doctest.h>

#include <random>

#include "fvetd/darcy.hpp"
#include "fvetd/error.hpp"
#include "fvetd/scenario.hpp"
#include "support.hpp"

using namespace fvetd;

namespace {

/// Dirichlet `left` / `right` on the x-normal boundary faces, no-flow elsewhere.
BoundarySpec column_ends(const StructuredMesh& m, double left, double right) {
  BoundarySpec bc = BoundarySpec::all_neumann(m);
  const double mid = m.origin()[0] + 0.5 * m.extent()[0];
  for (Index f = 0; f < m.num_faces(); ++f) {
    const Face& face = m.face(f);
    if (!face.is_boundary() || face.axis != 0) continue;
    const double v = face.center[0] < mid ? left : right;
    bc[f] = {BoundaryKind::Dirichlet, [v](const Point&, double) { return v; }};
  }
  return bc;
}

} // namespace

TEST_CASE("uniform column has a linear pressure profile") {
  const auto m = build_grid(2, std::vector<Index>{3, 1}, std::vector<double>{1.0, 1.0});
  const auto k = constant_diffusion(m, 1.0);
  const auto bc = column_ends(m, 1.0, 0.0);
  const auto p = solve_pressure(assemble_pressure(m, k, 1.0, bc));
  for (Index i = 0; i < 3; ++i) {
    CHECK(std::abs(p[static_cast<std::size_t>(i)] - (1.0 - m.cell_center(i)[0] / 3.0)) <= 1e-10);
  }
  const auto q = extract_fluxes(m, k, 1.0, p, bc);
  for (Index f = 0; f < m.num_faces(); ++f) {
    const Face& face = m.face(f);
    if (face.axis == 0) CHECK(q[f] * face.normal_sign == doctest::Approx(1.0 / 3.0));
    else CHECK(q[f] == 0.0);
  }
}

TEST_CASE("two-cell contrast uses the harmonic transmissibility") {
  const auto m = build_grid(2, std::vector<Index>{2, 1}, std::vector<double>{0.5, 0.5});
  const auto k = diffusion_from_cells({{4, 4, 1}, {1, 1, 1}}, m);
  const auto bc = column_ends(m, 1.0, 0.0);
  const auto p = solve_pressure(assemble_pressure(m, k, 2.0, bc));
  const auto q = extract_fluxes(m, k, 2.0, p, bc);
  for (Index f = 0; f < m.num_faces(); ++f) {
    if (!m.face(f).is_boundary()) CHECK(q[f] == doctest::Approx(1.6 / 2.0 * (p[0] - p[1])));
  }
  const auto bal = flux_balance(m, q, bc);
  CHECK(bal.max_imbalance <= 1e-12 * bal.max_flux);
}

TEST_CASE("equal Dirichlet pressures give zero flux") {
  const auto m = build_grid(3, std::vector<Index>{3, 2, 2}, std::vector<double>{1, 2, 1});
  std::mt19937_64 rng(41);
  std::lognormal_distribution<double> ln(0.0, 1.0);
  std::vector<std::array<double, 3>> kv(12);
  for (auto& v : kv) v = {ln(rng), ln(rng), ln(rng)};
  const auto k = diffusion_from_cells(kv, m);
  const auto bc = BoundarySpec::all_dirichlet(m, [](const Point&, double) { return 7.0; });
  const auto p = solve_pressure(assemble_pressure(m, k, 1.0, bc));
  const auto q = extract_fluxes(m, k, 1.0, p, bc);
  for (double v : q.values) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("checkerboard permeability is divergence-free") {
  const auto m = build_grid(2, std::vector<Index>{4, 4}, std::vector<double>{1, 1});
  std::vector<std::array<double, 3>> kv(16);
  for (Index i = 0; i < 16; ++i) {
    const auto c = m.cell_coords(i);
    const double v = (c[0] + c[1]) % 2 == 0 ? 1000.0 : 1.0;
    kv[static_cast<std::size_t>(i)] = {v, v, 1.0};
  }
  const auto k = diffusion_from_cells(kv, m);
  const auto bc = corner_columns(m, 0.0, 1.0);
  const auto q = extract_fluxes(m, k, 1.0, solve_pressure(assemble_pressure(m, k, 1.0, bc)), bc);
  const auto bal = flux_balance(m, q, bc);
  CHECK(bal.max_flux > 0.0);
  CHECK(bal.max_imbalance <= 1e-10 * bal.max_flux);
}

TEST_CASE("all no-flow boundaries are rejected") {
  const auto m = build_grid(2, std::vector<Index>{2, 2}, std::vector<double>{1, 1});
  CHECK_THROWS_AS(assemble_pressure(m, constant_diffusion(m, 1.0), 1.0, BoundarySpec::all_neumann(m)), ConfigError);
  CHECK_THROWS_AS(assemble_pressure(m, constant_diffusion(m, 1.0), 0.0, corner_columns(m, 0, 1)), InvalidArgument);
}

TEST_CASE("single cell") {
  const auto m = build_grid(2, std::vector<Index>{1, 1}, std::vector<double>{1, 1});
  const auto bc = column_ends(m, 2.0, 4.0);
  const auto p = solve_pressure(assemble_pressure(m, constant_diffusion(m, 1.0), 1.0, bc));
  CHECK(p[0] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("random SPD system against a dense solve") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  Eigen::MatrixXd b = Eigen::MatrixXd::NullaryExpr(50, 50, [&] { return g(rng); });
  const Eigen::MatrixXd a = b * b.transpose() + 50.0 * Eigen::MatrixXd::Identity(50, 50);
  PressureSystem sys;
  sys.matrix = a.sparseView();
  sys.rhs = Vector::NullaryExpr(50, [&] { return g(rng); });
  const Vector ref = a.llt().solve(sys.rhs);
  const auto p = solve_pressure(sys);
  const Vector pv = Eigen::Map<const Vector>(p.data(), 50);
  CHECK(testing::rel_err(pv, ref) <= 1e-9);

  sys.direct_limit = 0; // iterative path
  const auto pi = solve_pressure(sys);
  CHECK(testing::rel_err(Eigen::Map<const Vector>(pi.data(), 50), ref) <= 1e-9);

}

TEST_CASE("iteration cap surfaces as a solver error") {
  const auto m = build_grid(2, std::vector<Index>{40, 40}, std::vector<double>{1.0, 1.0});
  auto sys = assemble_pressure(m, constant_diffusion(m, 1.0), 1.0, column_ends(m, 1.0, 0.0));
  sys.direct_limit = 0;
  sys.max_iterations = 1;
  CHECK_THROWS_AS(solve_pressure(sys), SolverError);
}

TEST_CASE("pressure is monotone along a heterogeneous column") {
  std::mt19937_64 rng(43);
  std::lognormal_distribution<double> ln(0.0, 2.0);
  const auto m = build_grid(2, std::vector<Index>{30, 1}, std::vector<double>{0.1, 1.0});
  std::vector<std::array<double, 3>> kv(30);
  for (auto& v : kv) v = {ln(rng), 1.0, 1.0};
  const auto k = diffusion_from_cells(kv, m);
  const auto p = solve_pressure(assemble_pressure(m, k, 1.0, column_ends(m, 5.0, -1.0)));
  for (std::size_t i = 0; i + 1 < p.size(); ++i) CHECK(p[i] >= p[i + 1]);
  CHECK(p.front() <= 5.0);
  CHECK(p.back() >= -1.0);
}

TEST_CASE("reservoir analogue with corner-column pressures") {
  const RunConfig cfg = spe10_analogue_config();
  CHECK(cfg.fields.pressure_low == doctest::Approx(3998.96 * 6894.757293168361));
  CHECK(cfg.fields.pressure_high == doctest::Approx(7997.92 * 6894.757293168361));
  CHECK(cfg.fields.viscosity == doctest::Approx(0.3e-3));
  const auto m = mesh_from_config(cfg);
  const auto sol = solve_darcy(cfg, m);
  CHECK(sol.balance.max_imbalance <= 1e-10 * sol.balance.max_flux);
  for (double p : sol.pressure) {
    CHECK(p >= cfg.fields.pressure_low * (1 - 1e-12));
    CHECK(p <= cfg.fields.pressure_high * (1 + 1e-12));
  }
  // random divergence-free check on several configs
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rm = testing::random_mesh(rng, 6);
    std::lognormal_distribution<double> ln(0.0, 2.0);
    std::vector<std::array<double, 3>> kv(static_cast<std::size_t>(rm.num_cells()));
    for (auto& v : kv) v = {ln(rng), ln(rng), ln(rng)};
    const auto k = diffusion_from_cells(kv, rm);
    const auto bc = corner_columns(rm, 1.0, 3.0);
    const auto q = extract_fluxes(rm, k, 1e-3, solve_pressure(assemble_pressure(rm, k, 1e-3, bc)), bc);
    const auto bal = flux_balance(rm, q, bc);
    CHECK(bal.max_imbalance <= 1e-10 * bal.max_flux);
  }
}

TEST_CASE("corner columns select the faces touching the two vertical edges") {
  const auto m = build_grid(3, std::vector<Index>{3, 4, 2}, std::vector<double>{1, 1, 1});
  const auto bc = corner_columns(m, 0.0, 1.0);
  int low = 0, high = 0;
  for (Index f = 0; f < m.num_faces(); ++f) {
    if (bc[f].kind != BoundaryKind::Dirichlet) continue;
    const Face& face = m.face(f);
    CHECK(face.axis < 2);
    (bc[f].value(face.center, 0.0) == 0.0 ? low : high) += 1;
  }
  // one x-face and one y-face per layer at each column
  CHECK(low == 4);
  CHECK(high == 4);
}
