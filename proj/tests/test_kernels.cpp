#include <doctest.h>

#include <random>

#include "fvetd/kernels.hpp"

using namespace fvetd;

namespace {

SparseMatrix random_sparse(Index n, std::mt19937_64& rng) {
  std::uniform_int_distribution<Index> col(0, n - 1);
  std::normal_distribution<double> g;
  std::vector<Eigen::Triplet<double>> t;
  for (Index i = 0; i < n; ++i) {
    for (int k = 0; k < 7; ++k) t.emplace_back(i, col(rng), g(rng));
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

} // namespace

TEST_CASE("parallel kernels match the serial references") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (Index n : {1, 17, 5000, 40000}) {
    const SparseMatrix a = random_sparse(n, rng);
    Vector x = Vector::NullaryExpr(n, [&] { return g(rng); });
    Vector y0 = Vector::NullaryExpr(n, [&] { return g(rng); });
    Vector y1(n), y2(n);
    kernels::spmv(a, kernels::view(x), kernels::view(y1));
    kernels::spmv_serial(a, kernels::view(x), kernels::view(y2));
    CHECK((y1 - y2).cwiseAbs().maxCoeff() == 0.0);
    CHECK((y1 - a * x).norm() <= 1e-12 * (1.0 + y1.norm()));

    // the serial reference sums in index order, the parallel one in fixed blocks
    const double ds = kernels::dot_serial(kernels::view(x), kernels::view(y0));
    CHECK(std::abs(kernels::dot(kernels::view(x), kernels::view(y0)) - ds) <=
          1e-13 * x.norm() * y0.norm());
    CHECK(kernels::dot(x, y0) == doctest::Approx(x.dot(y0)).epsilon(1e-12));

    Vector z1 = y0, z2 = y0;
    kernels::axpy(0.37, kernels::view(x), kernels::view(z1));
    kernels::axpy_serial(0.37, kernels::view(x), kernels::view(z2));
    CHECK((z1 - z2).cwiseAbs().maxCoeff() == 0.0);
    CHECK((z1 - (y0 + 0.37 * x)).cwiseAbs().maxCoeff() <= 1e-15 * (1 + z1.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("reductions do not depend on the thread count") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  const Index n = 100003;
  Vector x = Vector::NullaryExpr(n, [&] { return g(rng); });
  Vector w = Vector::NullaryExpr(n, [&] { return std::abs(g(rng)); });
  const int before = kernels::max_threads();
  kernels::set_threads(1);
  const double d1 = kernels::dot(x, x);
  const double n1 = kernels::weighted_sq_norm(kernels::view(w), kernels::view(x));
  kernels::set_threads(4);
  CHECK(kernels::dot(x, x) == d1);
  CHECK(kernels::weighted_sq_norm(kernels::view(w), kernels::view(x)) == n1);
  kernels::set_threads(before);
}

TEST_CASE("thread cap from the environment") {
  setenv("FV_ETD_THREADS", "1", 1);
  CHECK(kernels::configure_threads_from_env() == 1);
  setenv("FV_ETD_THREADS", "0", 1);
  CHECK(kernels::configure_threads_from_env() >= 1);
  unsetenv("FV_ETD_THREADS");
}
