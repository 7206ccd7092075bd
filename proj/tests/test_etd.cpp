#include <doctest.h>

#include <random>

#include "fvetd/dense_expm.hpp"
#include "fvetd/error.hpp"
#include "fvetd/etd.hpp"
#include "support.hpp"

using namespace fvetd;

namespace {

SemilinearSystem linear_system(const DenseMatrix& a, Vector forcing) {
  SemilinearSystem s;
  s.op = make_operator(a);
  s.reaction = [forcing = std::move(forcing)](double, const Vector&, Vector& r) { r = forcing; };
  return s;
}

StateVector one_step(const SemilinearSystem& s, const Vector& x0, double dt) {
  EtdStepper st(s, PhiActionConfig{});
  return st.step({x0, 0.0}, dt);
}

} // namespace

TEST_CASE("scalar steps") {
  const DenseMatrix one = DenseMatrix::Identity(1, 1);
  const DenseMatrix zero = DenseMatrix::Zero(1, 1);
  CHECK(one_step(linear_system(one, Vector::Zero(1)), Vector::Ones(1), 0.1).values[0] ==
        doctest::Approx(0.904837418).epsilon(1e-9));
  CHECK(one_step(linear_system(zero, Vector::Constant(1, 2.5)), Vector::Constant(1, 1.0), 0.1).values[0] ==
        doctest::Approx(1.25).epsilon(1e-12));
  CHECK(one_step(linear_system(one, Vector::Ones(1)), Vector::Zero(1), 0.5).values[0] ==
        doctest::Approx(0.393469340).epsilon(1e-9));
}

TEST_CASE("one phi_1 action per step") {
  const DenseMatrix a = DenseMatrix::Identity(3, 3);
  RunPlan plan;
  plan.dt = 0.1;
  plan.final_time = 1.0;
  const auto tr = run(linear_system(a, Vector::Ones(3)), Vector::Zero(3), plan);
  CHECK(tr.steps == 10);
  CHECK(tr.phi_calls == tr.steps);
}

TEST_CASE("snapshot bookkeeping") {
  const DenseMatrix a = DenseMatrix::Identity(2, 2);
  RunPlan plan;
  plan.dt = 0.25;
  plan.final_time = 0.75;
  plan.snapshot_every = 1;
  const auto tr = run(linear_system(a, Vector::Zero(2)), Vector::Ones(2), plan);
  REQUIRE(tr.snapshots.size() == 4);
  CHECK(tr.snapshots.front().state.t == 0.0);
  CHECK(tr.snapshots.back().state.t == doctest::Approx(0.75));
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(tr.snapshots[k].step == static_cast<long long>(k));
    CHECK(tr.snapshots[k].state.values[0] == doctest::Approx(std::exp(-0.25 * k)).epsilon(1e-6));
  }

  int seen = 0;
  plan.snapshot_every = 0;
  const auto lean = run(linear_system(a, Vector::Zero(2)), Vector::Ones(2), plan,
                        [&](const Snapshot&) { ++seen; }, false);
  CHECK(seen == 2);
  CHECK(lean.snapshots.size() == 1);
  CHECK(lean.snapshots.back().step == 3);

  plan.snapshot_times = {0.5};
  CHECK(run(linear_system(a, Vector::Zero(2)), Vector::Ones(2), plan).snapshots.size() == 3);
  plan.snapshot_times = {2.0};
  CHECK_THROWS_AS(run(linear_system(a, Vector::Zero(2)), Vector::Ones(2), plan), InvalidArgument);
}

TEST_CASE("run plan validation") {
  RunPlan p;
  p.dt = 0.3;
  p.final_time = 1.0;
  CHECK_THROWS_AS(p.step_count(), InvalidArgument);
  p.dt = -1.0;
  CHECK_THROWS_AS(p.step_count(), InvalidArgument);
  p.dt = 2.0;
  CHECK_THROWS_AS(p.step_count(), InvalidArgument);
  p.dt = 1.0 / 3.0;
  CHECK(p.step_count() == 3);
  p.t0 = 0.01;
  p.final_time = 1.0;
  p.dt = 1.0 / 3000.0;
  CHECK(p.step_count() == 2970);
}

TEST_CASE("constant forcing is integrated exactly for any step size") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 5; ++trial) {
    const Index n = 12;
    const DenseMatrix a = testing::random_stable_dense(n, rng, 0.3, 1.0);
    const Vector b = Vector::NullaryExpr(n, [&] { return g(rng); });
    const Vector x0 = Vector::NullaryExpr(n, [&] { return g(rng); });
    const double T = 1.0;
    const DenseMatrix e = (-T * a).exp();
    const Vector exact = e * x0 + a.partialPivLu().solve(b - e * b);
    for (double dt : {1.0, 0.1, 0.01}) {
      RunPlan plan;
      plan.dt = dt;
      plan.final_time = T;
      const auto tr = run(linear_system(a, b), x0, plan);
      CHECK(testing::rel_err(tr.snapshots.back().state.values, exact) <= 10 * plan.phi.tol);
    }
  }
}

TEST_CASE("Langmuir reaction converges at first order in dt") {
  // 1D diffusion with Dirichlet 1 on the right and sorption; self-convergence against dt/64
  const auto m = build_grid(2, std::vector<Index>{20, 1}, std::vector<double>{0.05, 1.0});
  BoundarySpec bc = BoundarySpec::all_neumann(m);
  for (Index f = 0; f < m.num_faces(); ++f) {
    const Face& face = m.face(f);
    if (face.is_boundary() && face.axis == 0 && face.center[0] > 0.5) {
      bc[f] = {BoundaryKind::Dirichlet, [](const Point&, double) { return 1.0; }};
    }
  }
  const auto op = assemble(m, constant_diffusion(m, 0.05), zero_fluxes(m), ScalarCellField(20, 1.0), bc);
  const auto reaction = langmuir(5.0, -2.0); // strong enough to dominate the time error
  auto final_state = [&](double dt) {
    RunPlan plan;
    plan.dt = dt;
    plan.final_time = 1.0;
    plan.phi.tol = 1e-10;
    return run(make_system(op, m, reaction), Vector::Zero(20), plan).snapshots.back().state.values;
  };
  const Vector ref = final_state(1.0 / 512);
  const double e1 = l2_norm(final_state(1.0 / 8) - ref, m);
  const double e2 = l2_norm(final_state(1.0 / 16) - ref, m);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.3));
}

TEST_CASE("a failing step reports the last good state") {
  const DenseMatrix a = DenseMatrix::Identity(2, 2);
  SemilinearSystem s;
  s.op = make_operator(a);
  s.reaction = [](double t, const Vector& x, Vector& r) {
    r = Vector::Zero(x.size());
    if (t > 0.25) r[0] = std::nan("");
  };
  RunPlan plan;
  plan.dt = 0.1;
  plan.final_time = 1.0;
  try {
    run(s, Vector::Ones(2), plan);
    FAIL("expected a step failure");
  } catch (const StepFailure& e) {
    CHECK(e.step() == 4);
    CHECK(e.last_good().t == doctest::Approx(0.3));
    CHECK(e.last_good().values[1] == doctest::Approx(std::exp(-0.3)).epsilon(1e-6));
  }
}

TEST_CASE("Dirichlet data enters through the source at the start of the step") {
  // pure diffusion toward g(t) = t on both ends of a 1-cell column
  const auto m = build_grid(2, std::vector<Index>{1, 1}, std::vector<double>{1.0, 1.0});
  BoundarySpec bc = BoundarySpec::all_neumann(m);
  for (Index f = 0; f < m.num_faces(); ++f) {
    if (m.face(f).axis == 0) bc[f] = {BoundaryKind::Dirichlet, [](const Point&, double t) { return t; }};
  }
  const auto op = assemble(m, constant_diffusion(m, 1.0), zero_fluxes(m), ScalarCellField(1, 1.0), bc);
  // A = 4, M^{-1} b(t) = 4 t; one step from t = 1: X1 = X0 + dt phi1(-4 dt)(-4 X0 + 4)
  EtdStepper st(make_system(op, m, no_reaction()), PhiActionConfig{});
  const auto x1 = st.step({Vector::Zero(1), 1.0}, 0.5);
  CHECK(x1.values[0] == doctest::Approx(0.5 * phi1_scalar(-2.0) * 4.0).epsilon(1e-8));
  CHECK(x1.t == 1.5);
}
