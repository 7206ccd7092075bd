#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fvetd/etd.hpp"
#include "fvetd/fields.hpp"
#include "fvetd/mesh.hpp"
#include "fvetd/phi.hpp"

namespace fvetd {

/// Coefficients of the curved shear flow test and the manufactured solution
/// placed on top of them:
///   D = D0 u0^2 diag(x^2, y^2),  q = (u0 x, -u0 y),  R(X) = -decay X + f,
///   X*(x, t) = amp s0/s(t) exp(-|x - c|^2 / (2 s(t))),  s(t) = s0 + 2 kappa t.
/// With `constant` set, X* is the constant `amp` instead.
struct CurvedShearParams {
  double d0 = 0.1;
  double u0 = 2.0;
  double lo = 0.01;
  double hi = 2.0;
  double t0 = 0.01;
  double final_time = 1.0;
  double x0 = 1.5;
  double y0 = 1.5;
  double amplitude = 1.0;
  double s0 = 0.1;
  double kappa = 0.05;
  double decay = 0.1;
  bool constant = false;
};

template <class T>
T curved_shear_solution(const T& x, const T& y, const T& t, const CurvedShearParams& p) {
  if (p.constant) return T(p.amplitude);
  using std::exp;
  const T s = p.s0 + 2.0 * p.kappa * t;
  const T dx = x - p.x0;
  const T dy = y - p.y0;
  return p.amplitude * (p.s0 / s) * exp(-(dx * dx + dy * dy) / (2.0 * s));
}

struct ManufacturedCase {
  std::string name;
  int dim = 2;
  Point origin{};
  Point extent{};
  double t0 = 0.0;
  double final_time = 1.0;
  std::function<double(const Point&, double)> exact;
  std::function<double(const Point&, double)> forcing;
  TensorFunction diffusion;
  VectorFunction velocity;
  ReactionModel base_reaction; // R(x, t, X) without the forcing

  /// base_reaction + forcing, what the solver integrates.
  ReactionModel solver_reaction() const;
};

ManufacturedCase curved_shear_case(const CurvedShearParams& params = {});

struct ConvergencePoint {
  double parameter = 0.0;
  double error = 0.0;
};

struct ConvergenceReport {
  std::string name;
  std::string parameter = "h";
  std::vector<ConvergencePoint> points;
  std::optional<double> slope;
  std::string notice;
  std::map<std::string, std::string> metadata;
};

/// Least-squares slope of log(error) against log(parameter).
double fit_slope(const std::vector<ConvergencePoint>& points);

/// Runs the case on N x N grids for every N in `cells_per_axis`, error in the
/// discrete L2 norm at the final time against X* sampled at cell centers.
ConvergenceReport space_convergence(const ManufacturedCase& mms,
                                    const std::vector<Index>& cells_per_axis, double dt,
                                    const PhiActionConfig& phi);

/// Everything a temporal study needs besides the step sizes.
struct TimeStudySetup {
  std::string name;
  std::function<SemilinearSystem()> make_system;
  std::function<double(const Vector&)> norm; // discrete L2 norm on the mesh
  Vector initial;
  double t0 = 0.0;
  double final_time = 0.0;
  PhiActionConfig phi;
};

/// Errors of each dt-run against the reference_dt run at the final time.
ConvergenceReport time_convergence(const TimeStudySetup& setup, const std::vector<double>& dts,
                                   double reference_dt);

} // namespace fvetd
