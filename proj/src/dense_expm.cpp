#include "fvetd/dense_expm.hpp"

#include <array>
#include <cmath>

#include <Eigen/LU>

#include "fvetd/error.hpp"

namespace fvetd {

namespace {

constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

} // namespace

DenseMatrix expm(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("expm: matrix must be square");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  if (!a.allFinite()) throw SolverError("expm: non-finite matrix entry");

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  const DenseMatrix x = a * std::ldexp(1.0, -squarings);

  const auto& b = kPade13;
  const DenseMatrix id = DenseMatrix::Identity(n, n);
  const DenseMatrix x2 = x * x;
  const DenseMatrix x4 = x2 * x2;
  const DenseMatrix x6 = x4 * x2;
  const DenseMatrix u_inner = x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 +
                              b[5] * x4 + b[3] * x2 + b[1] * id;
  const DenseMatrix u = x * u_inner;
  const DenseMatrix v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 +
                        b[2] * x2 + b[0] * id;
  DenseMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

DenseMatrix phi_columns(const DenseMatrix& m, int p) {
  const Eigen::Index n = m.rows();
  if (p < 1) throw InvalidArgument("phi_columns: p must be >= 1");
  DenseMatrix aug = DenseMatrix::Zero(n + p, n + p);
  aug.topLeftCorner(n, n) = m;
  aug(0, n) = 1.0;
  for (int k = 1; k < p; ++k) aug(n + k - 1, n + k) = 1.0;
  const DenseMatrix e = expm(aug);
  return e.block(0, n, n, p);
}

double phi1_scalar(double z) {
  if (std::abs(z) >= 1e-2) return std::expm1(z) / z;
  // |z| < 1e-2: terms beyond z^7/8! are below 1e-20.
  double term = 1.0;
  double sum = 1.0;
  for (int k = 2; k <= 9; ++k) {
    term *= z / k;
    sum += term;
  }
  return sum;
}

} // namespace fvetd
