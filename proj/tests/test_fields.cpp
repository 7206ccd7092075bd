#include <doctest.h>

#include <random>

#include "fvetd/error.hpp"
#include "fvetd/fields.hpp"
#include "support.hpp"

using namespace fvetd;

TEST_CASE("constant tensor is reproduced exactly") {
  const auto m = build_grid(3, std::vector<Index>{2, 3, 2}, std::vector<double>{0.3, 0.7, 1.1});
  const auto d = average_diffusion([](const Point&) { return std::array<double, 3>{1.0, 1.0, 1.0}; }, m);
  for (const auto& v : d.values) CHECK(v == std::array<double, 3>{1.0, 1.0, 1.0});
  const auto c = constant_diffusion(m, 2.5);
  for (const auto& v : c.values) CHECK(v == std::array<double, 3>{2.5, 2.5, 2.5});
}

TEST_CASE("curved shear diffusion sampled at a cell center") {
  // D11 = D0 u0^2 x^2 with D0 = 0.1, u0 = 2; the cell [1.4, 1.6] x [1.4, 1.6] is centered at 1.5
  const auto m = build_grid(2, std::vector<Index>{1, 1}, std::vector<double>{0.2, 0.2}, std::vector<double>{1.4, 1.4});
  const auto d = average_diffusion(
      [](const Point& x) { return std::array<double, 3>{0.1 * 4 * x[0] * x[0], 0.1 * 4 * x[1] * x[1], 1.0}; }, m);
  CHECK(d.normal_component(0, 0) == doctest::Approx(0.9));
}

TEST_CASE("midpoint average of x^2 is second-order accurate") {
  // exact cell average of x^2 on [a, b] is (b^3 - a^3) / (3 (b - a)); the midpoint error is h^2/12
  double prev = 0.0;
  for (Index n : {4, 8, 16, 32}) {
    const double h = 1.0 / static_cast<double>(n);
    const auto m = build_grid(2, std::vector<Index>{n, 1}, std::vector<double>{h, 1.0}, std::vector<double>{1.0, 0.0});
    const auto d = average_diffusion([](const Point& x) { return std::array<double, 3>{x[0] * x[0], 1.0, 1.0}; }, m);
    double err = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double a = 1.0 + h * static_cast<double>(i), b = a + h;
      err = std::max(err, std::abs(d.normal_component(i, 0) - (b * b * b - a * a * a) / (3 * h)));
    }
    CHECK(err == doctest::Approx(h * h / 12.0).epsilon(1e-6));
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(1e-6));
    prev = err;
  }
}

TEST_CASE("non-positive diffusion is rejected") {
  const auto m = build_grid(2, std::vector<Index>{2, 2}, std::vector<double>{1, 1}, std::vector<double>{-1, -1});
  CHECK_THROWS_AS(average_diffusion([](const Point& x) { return std::array<double, 3>{x[0], 1.0, 1.0}; }, m),
                  InvalidArgument);
  CHECK_THROWS_AS(diffusion_from_cells({{1, 1, 1}, {1, 0, 1}, {1, 1, 1}, {1, 1, 1}}, m), InvalidArgument);
  CHECK_THROWS_AS(diffusion_from_cells({{1, 1, 1}}, m), InvalidArgument);
}

TEST_CASE("face fluxes from a velocity field") {
  // q = (u0 x, -u0 y), u0 = 2: the face at x = 1 with mes = 0.5 carries 0.5 * 2 * 1 = 1
  const auto m = build_grid(2, std::vector<Index>{2, 1}, std::vector<double>{0.5, 0.5}, std::vector<double>{0.5, 0.0});
  const auto q = face_fluxes_from_velocity(
      [](const Point& x) { return std::array<double, 3>{2.0 * x[0], -2.0 * x[1], 0.0}; }, m);
  bool found = false;
  for (Index f = 0; f < m.num_faces(); ++f) {
    const Face& face = m.face(f);
    if (face.axis == 0 && std::abs(face.center[0] - 1.0) < 1e-12) {
      CHECK(q[f] == doctest::Approx(1.0));
      found = true;
    }
  }
  CHECK(found);

  const auto z = zero_fluxes(m);
  for (double v : z.values) CHECK(v == 0.0);
}

TEST_CASE("affine divergence-free velocity gives zero cell imbalance") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = testing::random_mesh(rng, 5);
    const auto q = face_fluxes_from_velocity(
        [](const Point& x) { return std::array<double, 3>{x[0] + 2 * x[1], -x[1] + x[2], 3 * x[0]}; }, m);
    double scale = 0.0;
    for (double v : q.values) scale = std::max(scale, std::abs(v));
    for (double r : cell_flux_imbalance(q, m)) CHECK(std::abs(r) <= 1e-12 * scale);
  }
}

TEST_CASE("interior fluxes are antisymmetric by storage") {
  std::mt19937_64 rng(5);
  const auto m = testing::random_mesh(rng, 4);
  const auto q = testing::divergence_free_fluxes(m, rng);
  for (Index i = 0; i < m.num_cells(); ++i) {
    for (const auto& cf : m.faces_of_cell(i)) {
      if (cf.neighbor == kBoundary) continue;
      double other = 0.0;
      for (const auto& cg : m.faces_of_cell(cf.neighbor)) {
        if (cg.face == cf.face) other = q.outward(cg.face, cg.sign);
      }
      CHECK(q.outward(cf.face, cf.sign) == -other);
    }
  }
}

TEST_CASE("langmuir isotherm") {
  const auto r = langmuir(1.0, 1e-3);
  CHECK(r({}, 0.0, 0.0) == 0.0);
  CHECK(r({}, 0.0, 1.0) == doctest::Approx(5e-4));
  CHECK(r.lipschitz == doctest::Approx(1e-3));
  CHECK(sample_lipschitz(r, 10.0, 10000, 11) <= r.lipschitz * (1 + 1e-12));
  CHECK_THROWS_AS(r({}, 0.0, -1.0), SolverError);
  CHECK_THROWS(langmuir(-1.0, 1.0));
}

TEST_CASE("lipschitz sampling over a grid of pairs") {
  const auto r = langmuir(1.0, 1e-3);
  double worst = 0.0;
  for (int a = 0; a <= 100; ++a) {
    for (int b = 0; b < a; ++b) {
      const double u = 0.05 * a, v = 0.05 * b;
      worst = std::max(worst, std::abs(r({}, 0, u) - r({}, 0, v)) / (u - v));
    }
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("simple reactions") {
  CHECK(no_reaction()({}, 1.0, 5.0) == 0.0);
  CHECK(constant_reaction(2.5)({}, 1.0, 5.0) == 2.5);
  CHECK(constant_reaction(2.5).lipschitz == 0.0);
}

TEST_CASE("boundary specification") {
  const auto m = build_grid(2, std::vector<Index>{2, 2}, std::vector<double>{1, 1});
  BoundarySpec spec(m);
  CHECK_THROWS_AS(spec.validate(m), ConfigError);
  auto d = BoundarySpec::all_dirichlet(m, [](const Point&, double t) { return t; });
  CHECK_NOTHROW(d.validate(m));
  auto n = BoundarySpec::all_neumann(m);
  CHECK_NOTHROW(n.validate(m));
  for (Index f = 0; f < m.num_faces(); ++f) {
    if (m.face(f).is_boundary()) {
      CHECK(d[f].kind == BoundaryKind::Dirichlet);
      CHECK(d[f].value({}, 3.0) == 3.0);
      CHECK(n[f].kind == BoundaryKind::Neumann);
    }
  }
}
