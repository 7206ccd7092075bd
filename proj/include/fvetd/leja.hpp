#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fvetd {

/// First `count` fast Leja points on [-2, 2], starting 2, -2, 0. Each new
/// point is the candidate midpoint (between consecutive existing points)
/// that maximises the product of distances to the points chosen so far.
std::span<const double> fast_leja_points(int count);

/// Newton interpolant of f(center + half_width * zeta) at the fast Leja
/// points zeta_k on [-2, 2], i.e. of f on [center - 2 hw, center + 2 hw].
struct LejaInterpolant {
  double lo = 0.0;
  double hi = 0.0;
  double center = 0.0;
  double half_width = 0.0; // scale factor applied to [-2, 2]
  std::vector<double> nodes;              // zeta_k on [-2, 2]
  std::vector<double> divided_differences; // in the zeta variable
  int degree_used = 0;
  double error_estimate = 0.0;

  /// Newton form evaluated at a real z.
  double evaluate(double z) const;
};

/// Builds the interpolant of `f` for `[lo, hi]` with `max_degree + 1` nodes.
/// A degenerate interval is widened to a small positive width.
LejaInterpolant make_leja_interpolant(const std::function<double(double)>& f, double lo, double hi,
                                      int max_degree);

} // namespace fvetd
