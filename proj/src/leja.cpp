#include "fvetd/leja.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "fvetd/error.hpp"

namespace fvetd {

namespace {

constexpr int kMaxLejaPoints = 512;

std::vector<double> generate_fast_leja(int count) {
  std::vector<double> pts{2.0, -2.0, 0.0};
  // Candidate midpoints of the current sub-intervals, with the log-product of
  // distances to the chosen points maintained incrementally.
  struct Candidate {
    double x;
    double left;
    double right;
    double logprod;
  };
  auto logprod = [&](double x) {
    double s = 0.0;
    for (double p : pts) s += std::log(std::abs(x - p));
    return s;
  };
  std::vector<Candidate> cands;
  for (auto [l, r] : {std::pair{-2.0, 0.0}, std::pair{0.0, 2.0}}) {
    const double m = 0.5 * (l + r);
    cands.push_back({m, l, r, logprod(m)});
  }
  while (static_cast<int>(pts.size()) < count) {
    auto best = std::max_element(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
      return a.logprod < b.logprod;
    });
    const Candidate chosen = *best;
    cands.erase(best);
    for (auto& c : cands) c.logprod += std::log(std::abs(c.x - chosen.x));
    pts.push_back(chosen.x);
    for (auto [l, r] : {std::pair{chosen.left, chosen.x}, std::pair{chosen.x, chosen.right}}) {
      const double m = 0.5 * (l + r);
      cands.push_back({m, l, r, logprod(m)});
    }
  }
  pts.resize(static_cast<std::size_t>(count));
  return pts;
}

} // namespace

std::span<const double> fast_leja_points(int count) {
  static const std::vector<double> points = generate_fast_leja(kMaxLejaPoints);
  if (count < 0 || count > kMaxLejaPoints) {
    throw InvalidArgument("fast_leja_points: at most " + std::to_string(kMaxLejaPoints) +
                          " points available");
  }
  return {points.data(), static_cast<std::size_t>(count)};
}

double LejaInterpolant::evaluate(double z) const {
  const double zeta = (z - center) / half_width;
  double result = 0.0;
  double basis = 1.0;
  for (std::size_t k = 0; k < divided_differences.size(); ++k) {
    result += divided_differences[k] * basis;
    basis *= zeta - nodes[k];
  }
  return result;
}

LejaInterpolant make_leja_interpolant(const std::function<double(double)>& f, double lo, double hi,
                                      int max_degree) {
  if (!(hi >= lo)) throw InvalidArgument("leja: empty interval");
  LejaInterpolant li;
  li.lo = lo;
  li.hi = hi;
  li.center = 0.5 * (lo + hi);
  li.half_width = std::max(0.25 * (hi - lo), 1e-3 * std::max(1.0, std::abs(li.center)));
  const auto pts = fast_leja_points(max_degree + 1);
  li.nodes.assign(pts.begin(), pts.end());
  auto& d = li.divided_differences;
  d.resize(li.nodes.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = f(li.center + li.half_width * li.nodes[k]);
  for (std::size_t j = 1; j < d.size(); ++j) {
    for (std::size_t i = d.size() - 1; i >= j; --i) {
      d[i] = (d[i] - d[i - 1]) / (li.nodes[i] - li.nodes[i - j]);
    }
  }
  li.degree_used = max_degree;
  return li;
}

} // namespace fvetd
