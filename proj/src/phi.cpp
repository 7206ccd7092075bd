#include "fvetd/phi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

#include "fvetd/dense_expm.hpp"
#include "fvetd/error.hpp"

namespace fvetd {

namespace {

enum class PhiFunction { Exp, Phi1 };

std::span<double> col(DenseMatrix& m, Eigen::Index j) {
  return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

struct PieceResult {
  Vector w;
  double rel_error = 0.0;
  int degree = 0;
  int matvecs = 0;
  bool ok = false;
};

double relative(double err, const Vector& w) {
  const double nw = kernels::norm(w);
  if (nw == 0.0) return err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return err / nw;
}

/// exp(M) of the Hessenberg augmented with p phi-columns, see phi_columns().
DenseMatrix augmented_exp(const DenseMatrix& m, int p) {
  const Eigen::Index n = m.rows();
  DenseMatrix aug = DenseMatrix::Zero(n + p, n + p);
  aug.topLeftCorner(n, n) = m;
  aug(0, n) = 1.0;
  for (int k = 1; k < p; ++k) aug(n + k - 1, n + k) = 1.0;
  return expm(aug);
}

PieceResult krylov_piece(PhiFunction fn, const ArnoldiFactorization& fac, double s) {
  const int k = fac.dim;
  const DenseMatrix h = fac.hessenberg.topLeftCorner(k, k);
  const DenseMatrix e = augmented_exp(-s * h, 2);
  // e.col(0) = exp(-sH) e1, e.col(k) = phi1(-sH) e1, e.col(k+1) = phi2(-sH) e1
  Vector coeffs;
  double tail = 0.0;
  if (fn == PhiFunction::Exp) {
    coeffs = e.col(0).head(k);
    tail = e(k - 1, k);
  } else {
    coeffs = e.col(k).head(k);
    tail = e(k - 1, k + 1);
  }
  PieceResult r;
  r.w = fac.beta * (fac.basis.leftCols(k) * coeffs);
  const double err = fac.breakdown ? 0.0 : fac.beta * s * fac.residual * std::abs(tail);
  r.rel_error = relative(err, r.w);
  r.degree = k;
  return r;
}

LejaInterpolant leja_interpolant(PhiFunction fn, double lo, double hi, int max_degree) {
  LejaInterpolant li;
  li.lo = lo;
  li.hi = hi;
  li.center = 0.5 * (lo + hi);
  li.half_width = std::max(0.25 * (hi - lo), 1e-3 * std::max(1.0, std::abs(li.center)));
  const auto pts = fast_leja_points(max_degree + 1);
  li.nodes.assign(pts.begin(), pts.end());
  // Divided differences of g(zeta) = f(c + hw zeta) are the first column of
  // g(L), L lower bidiagonal with the nodes on the diagonal and ones below.
  const Eigen::Index n = static_cast<Eigen::Index>(li.nodes.size());
  DenseMatrix m = DenseMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = li.center + li.half_width * li.nodes[static_cast<std::size_t>(i)];
    if (i > 0) m(i, i - 1) = li.half_width;
  }
  Vector d;
  if (fn == PhiFunction::Exp) {
    d = expm(m).col(0);
  } else {
    d = augmented_exp(m, 1).col(n).head(n);
  }
  li.divided_differences.assign(d.data(), d.data() + n);
  li.degree_used = max_degree;
  return li;
}

struct LejaCache {
  PhiFunction fn{};
  double lo = 0.0;
  double hi = 0.0;
  int degree = -1;
  LejaInterpolant interpolant;
};

const LejaInterpolant& cached_leja(PhiFunction fn, double lo, double hi, int max_degree) {
  thread_local LejaCache cache;
  if (cache.degree != max_degree || cache.fn != fn || cache.lo != lo || cache.hi != hi) {
    cache.interpolant = leja_interpolant(fn, lo, hi, max_degree);
    cache.fn = fn;
    cache.lo = lo;
    cache.hi = hi;
    cache.degree = max_degree;
  }
  return cache.interpolant;
}

PieceResult leja_piece(PhiFunction fn, const LinearOperator& op, double s, const Vector& v,
                       const PhiActionConfig& cfg) {
  const auto [bmin, bmax] = *op.real_bounds;
  // z = -s * lambda, Re(lambda) in [bmin, bmax]
  const double zc = -0.5 * s * (bmin + bmax);
  const double zr = 0.5 * s * (bmax - bmin) * cfg.leja_interval_safety;
  PieceResult r;
  const LejaInterpolant& li = cached_leja(fn, zc - zr, zc + zr, cfg.leja_max_degree);
  if (li.half_width > 0.25 * cfg.leja_max_degree) return r; // interval too wide for the degree cap

  const auto& d = li.divided_differences;
  const double c = li.center;
  const double hw = li.half_width;
  Vector basis = v;
  Vector av(v.size());
  r.w = d[0] * v;
  std::array<double, 3> recent{};
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= cfg.leja_max_degree; ++k) {
    op.apply(basis, av);
    ++r.matvecs;
    // basis <- ((-s A - c I)/hw - zeta_{k-1}) basis
    const double shift = -c / hw - li.nodes[static_cast<std::size_t>(k - 1)];
    basis = (-s / hw) * av + shift * basis;
    kernels::axpy(d[static_cast<std::size_t>(k)], kernels::view(basis), kernels::view(r.w));
    const double term = std::abs(d[static_cast<std::size_t>(k)]) * kernels::norm(basis);
    recent[static_cast<std::size_t>(k % 3)] = term;
    r.degree = k;
    if (!std::isfinite(term)) return r;
    best = std::min(best, term);
    if (k >= 3) {
      const double avg = (recent[0] + recent[1] + recent[2]) / 3.0;
      r.rel_error = relative(avg, r.w);
      if (r.rel_error <= cfg.tol) {
        r.ok = true;
        return r;
      }
      if (k > 10 && term > 1e6 * best) return r; // diverging
    }
  }
  return r;
}

void check_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw SolverError(std::string(what) + ": non-finite value encountered");
}

PhiResult dense_action(PhiFunction fn, const LinearOperator& op, double dt, const Vector& v) {
  DenseMatrix a = op.dense ? op.dense() : DenseMatrix();
  if (!op.dense) {
    const Index n = op.size;
    a.resize(n, n);
    Vector e = Vector::Zero(n);
    Vector out(n);
    for (Index j = 0; j < n; ++j) {
      e[j] = 1.0;
      op.apply(e, out);
      a.col(j) = out;
      e[j] = 0.0;
    }
  }
  PhiResult res;
  res.diagnostics.substeps = 1;
  if (fn == PhiFunction::Exp) {
    res.w = expm(-dt * a) * v;
  } else {
    const Index n = a.rows();
    DenseMatrix aug = DenseMatrix::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = -dt * a;
    aug.topRightCorner(n, 1) = v;
    res.w = expm(aug).topRightCorner(n, 1);
  }
  check_finite(res.w, "dense phi action");
  return res;
}

PhiResult action(PhiFunction fn, const LinearOperator& op, double dt, const Vector& v,
                 const PhiActionConfig& cfg) {
  cfg.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("phi action: dt must be > 0");
  if (v.size() != op.size) throw InvalidArgument("phi action: vector length mismatch");
  check_finite(v, "phi action input");
  if (cfg.method == PhiMethod::Dense) return dense_action(fn, op, dt, v);
  if (cfg.method == PhiMethod::Leja && !op.real_bounds) {
    throw InvalidArgument("Leja path needs real spectral bounds of the operator");
  }

  PhiResult res;
  auto& diag = res.diagnostics;
  Vector state = fn == PhiFunction::Exp ? v : Vector::Zero(v.size()); // u or y
  Vector av(v.size());
  int level = 0;
  double s = dt;
  long long remaining = 1;
  bool first_piece = true;

  auto halve = [&]() {
    if (level >= cfg.max_substeps) {
      char msg[160];
      std::snprintf(msg, sizeof msg, "phi action: tolerance %g not reached after %d halvings of dt=%g (last estimate %g)",
                    cfg.tol, level, dt, diag.error_estimate);
      throw SolverError(msg);
    }
    ++level;
    ++diag.halvings;
    s *= 0.5;
    remaining *= 2;
  };

  while (remaining > 0) {
    Vector vec;
    if (fn == PhiFunction::Exp) {
      vec = state;
    } else if (first_piece) {
      vec = v;
    } else {
      op.apply(state, av);
      ++diag.matvecs;
      vec = v - av;
    }

    PieceResult piece;
    if (kernels::norm(vec) == 0.0) {
      piece.w = Vector::Zero(vec.size());
      piece.ok = true;
    } else if (cfg.method == PhiMethod::Krylov) {
      const ArnoldiFactorization fac = arnoldi(op, vec, std::min<Index>(cfg.krylov_dim, op.size));
      diag.matvecs += fac.dim;
      while (true) {
        piece = krylov_piece(fn, fac, s);
        diag.error_estimate = piece.rel_error;
        if (piece.rel_error <= cfg.tol) break;
        halve();
      }
      piece.ok = true;
    } else {
      while (true) {
        piece = leja_piece(fn, op, s, vec, cfg);
        diag.matvecs += piece.matvecs;
        diag.error_estimate = piece.rel_error;
        if (piece.ok) break;
        halve();
      }
    }
    check_finite(piece.w, "phi action");
    diag.max_degree = std::max(diag.max_degree, piece.degree);
    ++diag.substeps;

    if (fn == PhiFunction::Exp) {
      state = std::move(piece.w);
    } else if (first_piece && remaining == 1) {
      res.w = std::move(piece.w); // single piece: w is the answer
      return res;
    } else {
      kernels::axpy(s, kernels::view(piece.w), kernels::view(state));
    }
    first_piece = false;
    --remaining;
  }
  res.w = fn == PhiFunction::Exp ? std::move(state) : Vector(state / dt);
  check_finite(res.w, "phi action");
  return res;
}

} // namespace

PhiMethod parse_phi_method(const std::string& name) {
  if (name == "krylov") return PhiMethod::Krylov;
  if (name == "leja") return PhiMethod::Leja;
  if (name == "dense") return PhiMethod::Dense;
  throw InvalidArgument("unknown phi method '" + name + "' (expected krylov, leja or dense)");
}

std::string to_string(PhiMethod method) {
  switch (method) {
    case PhiMethod::Krylov: return "krylov";
    case PhiMethod::Leja: return "leja";
    case PhiMethod::Dense: return "dense";
  }
  return "unknown";
}

void PhiActionConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("phi config: tol must be > 0");
  if (krylov_dim < 1) throw InvalidArgument("phi config: krylov_dim must be >= 1");
  if (max_substeps < 0) throw InvalidArgument("phi config: max_substeps must be >= 0");
  if (!(leja_interval_safety >= 1.0)) {
    throw InvalidArgument("phi config: leja_interval_safety must be >= 1");
  }
  if (leja_max_degree < 3) throw InvalidArgument("phi config: leja_max_degree must be >= 3");
}

LinearOperator make_operator(const SparseMatrix& a) {
  LinearOperator op;
  op.size = a.rows();
  op.apply = [&a](const Vector& x, Vector& y) {
    y.resize(a.rows());
    kernels::spmv(a, kernels::view(x), kernels::view(y));
  };
  const SparseMatrix at = a.transpose();
  const SparseMatrix sym = 0.5 * (a + at);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Index r = 0; r < sym.rows(); ++r) {
    double center = 0.0;
    double radius = 0.0;
    for (SparseMatrix::InnerIterator it(sym, r); it; ++it) {
      if (it.col() == r) {
        center = it.value();
      } else {
        radius += std::abs(it.value());
      }
    }
    lo = std::min(lo, center - radius);
    hi = std::max(hi, center + radius);
  }
  if (sym.rows() > 0) op.real_bounds = std::pair{lo, hi};
  double norm_inf = 0.0;
  for (Index r = 0; r < a.rows(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) s += std::abs(it.value());
    norm_inf = std::max(norm_inf, s);
  }
  double norm_one = 0.0;
  for (Index r = 0; r < at.rows(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(at, r); it; ++it) s += std::abs(it.value());
    norm_one = std::max(norm_one, s);
  }
  op.norm_estimate = std::sqrt(norm_inf * norm_one);
  op.dense = [&a]() { return DenseMatrix(a); };
  return op;
}

LinearOperator make_operator(const DenseMatrix& a) {
  LinearOperator op;
  op.size = a.rows();
  op.apply = [&a](const Vector& x, Vector& y) { y.noalias() = a * x; };
  const DenseMatrix sym = 0.5 * (a + a.transpose());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Index r = 0; r < sym.rows(); ++r) {
    const double radius = sym.row(r).cwiseAbs().sum() - std::abs(sym(r, r));
    lo = std::min(lo, sym(r, r) - radius);
    hi = std::max(hi, sym(r, r) + radius);
  }
  if (sym.rows() > 0) op.real_bounds = std::pair{lo, hi};
  const double norm_inf = a.rows() ? a.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
  const double norm_one = a.rows() ? a.cwiseAbs().colwise().sum().maxCoeff() : 0.0;
  op.norm_estimate = std::sqrt(norm_inf * norm_one);
  op.dense = [&a]() { return a; };
  return op;
}

ArnoldiFactorization arnoldi(const LinearOperator& op, const Vector& v, int m) {
  if (m < 1) throw InvalidArgument("arnoldi: m must be >= 1");
  if (v.size() != op.size) throw InvalidArgument("arnoldi: vector length mismatch");
  ArnoldiFactorization fac;
  fac.beta = kernels::norm(v);
  if (!(fac.beta > 0.0)) throw InvalidArgument("arnoldi: zero starting vector");

  const Index n = op.size;
  fac.basis = DenseMatrix::Zero(n, m + 1);
  fac.hessenberg = DenseMatrix::Zero(m + 1, m);
  fac.basis.col(0) = v / fac.beta;
  const double breakdown_tol = 1e-14 * std::max(op.norm_estimate, std::numeric_limits<double>::min());

  Vector w(n);
  for (int j = 0; j < m; ++j) {
    op.apply(fac.basis.col(j), w);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        const double hij = kernels::dot(col(fac.basis, i), kernels::view(w));
        kernels::axpy(-hij, col(fac.basis, i), kernels::view(w));
        fac.hessenberg(i, j) += hij;
      }
    }
    const double hn = kernels::norm(w);
    fac.hessenberg(j + 1, j) = hn;
    fac.residual = hn;
    fac.dim = j + 1;
    if (hn <= breakdown_tol) {
      fac.breakdown = true;
      fac.basis.conservativeResize(n, j + 1);
      fac.hessenberg.conservativeResize(j + 1, j + 1);
      return fac;
    }
    fac.basis.col(j + 1) = w / hn;
  }
  return fac;
}

PhiResult phi1_action(const LinearOperator& op, double dt, const Vector& v,
                      const PhiActionConfig& config) {
  return action(PhiFunction::Phi1, op, dt, v, config);
}

PhiResult expm_action(const LinearOperator& op, double dt, const Vector& v,
                      const PhiActionConfig& config) {
  return action(PhiFunction::Exp, op, dt, v, config);
}

LejaInterpolant phi1_leja_interpolant(double lo, double hi, int max_degree) {
  return leja_interpolant(PhiFunction::Phi1, lo, hi, max_degree);
}

} // namespace fvetd
