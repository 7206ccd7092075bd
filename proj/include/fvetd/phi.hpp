#pragma once

#include <functional>
#include <optional>
#include <string>

#include "fvetd/kernels.hpp"
#include "fvetd/leja.hpp"

namespace fvetd {

enum class PhiMethod { Krylov, Leja, Dense };

PhiMethod parse_phi_method(const std::string& name);
std::string to_string(PhiMethod method);

struct PhiActionConfig {
  double tol = 1e-6;
  int krylov_dim = 8;
  PhiMethod method = PhiMethod::Krylov;
  int max_substeps = 32;            // maximum number of dt halvings
  double leja_interval_safety = 1.1;
  int leja_max_degree = 100;

  void validate() const;
};

/// Matrix-free view of A with the spectral data the methods need.
struct LinearOperator {
  Index size = 0;
  std::function<void(const Vector&, Vector&)> apply;
  /// Bounds on the real part of the field of values of A (Gershgorin on the
  /// symmetric part). Required by the Leja path.
  std::optional<std::pair<double, double>> real_bounds;
  /// Any upper bound on ||A||; scales the Arnoldi breakdown test.
  double norm_estimate = 1.0;
  /// Materialised matrix for the dense path (optional).
  std::function<DenseMatrix()> dense;
};

/// The operator refers to `a`, which must outlive it.
LinearOperator make_operator(const SparseMatrix& a);
LinearOperator make_operator(const DenseMatrix& a);

/// Orthonormal basis V (n x (k+1)) and Hessenberg H ((k+1) x k) with
/// A V_k = V_{k+1} H. On breakdown V has k columns and H is k x k.
struct ArnoldiFactorization {
  DenseMatrix basis;
  DenseMatrix hessenberg;
  double beta = 0.0; // ||v||
  bool breakdown = false;
  double residual = 0.0; // h_{k+1,k}
  int dim = 0;           // k
};

/// Arnoldi with modified Gram-Schmidt and one reorthogonalisation pass.
ArnoldiFactorization arnoldi(const LinearOperator& op, const Vector& v, int m);

struct PhiDiagnostics {
  double error_estimate = 0.0; // worst relative estimate over the substeps
  int substeps = 0;
  int halvings = 0;
  int matvecs = 0;
  int max_degree = 0; // Krylov dimension or Leja degree reached
};

struct PhiResult {
  Vector w;
  PhiDiagnostics diagnostics;
};

/// w ~= phi_1(-dt A) v.
PhiResult phi1_action(const LinearOperator& op, double dt, const Vector& v,
                      const PhiActionConfig& config);

/// w ~= exp(-dt A) v.
PhiResult expm_action(const LinearOperator& op, double dt, const Vector& v,
                      const PhiActionConfig& config);

/// Interpolant of phi_1 used by the Leja path for the interval [lo, hi] of
/// z = -dt * lambda.
LejaInterpolant phi1_leja_interpolant(double lo, double hi, int max_degree);

} // namespace fvetd
