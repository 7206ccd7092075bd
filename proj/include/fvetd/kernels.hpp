#pragma once

#include <cmath>
#include <span>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace fvetd {

using Index = std::ptrdiff_t;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Data-parallel inner loops. Every kernel has an `_serial` reference used by
/// the tests and the benchmark. Reductions are summed in fixed-size blocks
/// whose partial sums are combined in block order, so results do not depend
/// on the thread count.
namespace kernels {

inline constexpr std::ptrdiff_t kReductionBlock = 2048;

/// y = A x
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
void spmv_serial(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> x, std::span<const double> y);
double dot_serial(std::span<const double> x, std::span<const double> y);

/// y += alpha x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void axpy_serial(double alpha, std::span<const double> x, std::span<double> y);

/// Weighted squared norm sum_i w_i x_i^2.
double weighted_sq_norm(std::span<const double> w, std::span<const double> x);

inline std::span<const double> view(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
inline std::span<double> view(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

inline Vector spmv(const SparseMatrix& a, const Vector& x) {
  Vector y(a.rows());
  spmv(a, view(x), view(y));
  return y;
}
inline double dot(const Vector& x, const Vector& y) { return dot(view(x), view(y)); }
inline double norm(const Vector& x) { return std::sqrt(dot(x, x)); }

/// Applies FV_ETD_THREADS (0 or unset = OpenMP default). Returns the thread
/// count in effect.
int configure_threads_from_env();
int max_threads();
void set_threads(int n);

} // namespace kernels
} // namespace fvetd
