#include "fvetd/kernels.hpp"

#include <cstdlib>
#include <string>
#include <vector>

#include <omp.h>

#include "fvetd/error.hpp"

namespace fvetd::kernels {

namespace {

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                          " vs " + std::to_string(b) + ")");
  }
}

template <class BlockFn>
double blocked_sum(std::ptrdiff_t n, BlockFn&& block) {
  const std::ptrdiff_t nblocks = (n + kReductionBlock - 1) / kReductionBlock;
  if (nblocks <= 1) return n > 0 ? block(0, n) : 0.0;
  std::vector<double> partial(static_cast<std::size_t>(nblocks));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    const std::ptrdiff_t lo = b * kReductionBlock;
    const std::ptrdiff_t hi = std::min(n, lo + kReductionBlock);
    partial[static_cast<std::size_t>(b)] = block(lo, hi);
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

} // namespace

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  check_sizes(static_cast<std::size_t>(a.cols()), x.size(), "spmv");
  check_sizes(static_cast<std::size_t>(a.rows()), y.size(), "spmv");
  const auto* outer = a.outerIndexPtr();
  const auto* inner = a.innerIndexPtr();
  const double* val = a.valuePtr();
  const auto* nnz = a.innerNonZeroPtr();
  const std::ptrdiff_t rows = a.rows();
#pragma omp parallel for schedule(static) if (rows > 4096)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const auto begin = outer[r];
    const auto end = nnz ? begin + nnz[r] : outer[r + 1];
    double s = 0.0;
    for (auto k = begin; k < end; ++k) s += val[k] * x[static_cast<std::size_t>(inner[k])];
    y[static_cast<std::size_t>(r)] = s;
  }
}

void spmv_serial(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  check_sizes(static_cast<std::size_t>(a.cols()), x.size(), "spmv");
  check_sizes(static_cast<std::size_t>(a.rows()), y.size(), "spmv");
  for (std::ptrdiff_t r = 0; r < a.rows(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      s += it.value() * x[static_cast<std::size_t>(it.col())];
    }
    y[static_cast<std::size_t>(r)] = s;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  check_sizes(x.size(), y.size(), "dot");
  return blocked_sum(static_cast<std::ptrdiff_t>(x.size()), [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    double s = 0.0;
    for (auto i = lo; i < hi; ++i) s += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    return s;
  });
}

double dot_serial(std::span<const double> x, std::span<const double> y) {
  check_sizes(x.size(), y.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size(), "axpy");
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (n > 16384)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] += alpha * x[static_cast<std::size_t>(i)];
  }
}

void axpy_serial(double alpha, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double weighted_sq_norm(std::span<const double> w, std::span<const double> x) {
  check_sizes(w.size(), x.size(), "weighted_sq_norm");
  return blocked_sum(static_cast<std::ptrdiff_t>(x.size()), [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    double s = 0.0;
    for (auto i = lo; i < hi; ++i) {
      const auto k = static_cast<std::size_t>(i);
      s += w[k] * x[k] * x[k];
    }
    return s;
  });
}

int configure_threads_from_env() {
  if (const char* env = std::getenv("FV_ETD_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 0) {
      throw ConfigError(std::string("FV_ETD_THREADS must be a non-negative integer, got '") + env + "'");
    }
    if (n > 0) omp_set_num_threads(static_cast<int>(n));
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) { omp_set_num_threads(n > 0 ? n : omp_get_num_procs()); }

} // namespace fvetd::kernels
