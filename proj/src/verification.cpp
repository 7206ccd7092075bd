#include "fvetd/verification.hpp"

#include <algorithm>
#include <sstream>

#include "fvetd/error.hpp"
#include "fvetd/tpfa.hpp"

namespace fvetd {

namespace {

std::string fmt17(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Errors below this fraction of the solution norm are treated as round-off.
constexpr double kSpaceFloor = 1e-10;
// Errors below this multiple of tol (relative) are the phi-action floor.
constexpr double kTimeFloorFactor = 100.0;

} // namespace

ReactionModel ManufacturedCase::solver_reaction() const {
  auto base = base_reaction;
  auto f = forcing;
  return {[base, f](const Point& x, double t, double v) { return base(x, t, v) + f(x, t); },
          base.lipschitz, name + "+forcing"};
}

ManufacturedCase curved_shear_case(const CurvedShearParams& p) {
  ManufacturedCase mms;
  mms.name = p.constant ? "curved-shear-constant" : "curved-shear";
  mms.dim = 2;
  mms.origin = {p.lo, p.lo, 0.0};
  mms.extent = {p.hi - p.lo, p.hi - p.lo, 1.0};
  mms.t0 = p.t0;
  mms.final_time = p.final_time;
  const double c = p.d0 * p.u0 * p.u0;

  mms.exact = [p](const Point& x, double t) { return curved_shear_solution(x[0], x[1], t, p); };
  mms.diffusion = [c](const Point& x) { return std::array<double, 3>{c * x[0] * x[0], c * x[1] * x[1], 1.0}; };
  mms.velocity = [u0 = p.u0](const Point& x) { return std::array<double, 3>{u0 * x[0], -u0 * x[1], 0.0}; };
  mms.base_reaction = {[k = p.decay](const Point&, double, double v) { return -k * v; }, p.decay,
                       "linear-decay"};

  mms.forcing = [p, c](const Point& pt, double t) {
    const double x = pt[0];
    const double y = pt[1];
    const double u = curved_shear_solution(x, y, t, p);
    if (p.constant) return p.decay * u; // all derivatives vanish
    const double s = p.s0 + 2.0 * p.kappa * t;
    const double dx = x - p.x0;
    const double dy = y - p.y0;
    const double r2 = dx * dx + dy * dy;
    const double ut = u * (-2.0 * p.kappa / s + p.kappa * r2 / (s * s));
    const double ux = -u * dx / s;
    const double uy = -u * dy / s;
    const double uxx = u * (dx * dx / (s * s) - 1.0 / s);
    const double uyy = u * (dy * dy / (s * s) - 1.0 / s);
    const double diffusion = c * (2.0 * x * ux + x * x * uxx) + c * (2.0 * y * uy + y * y * uyy);
    const double advection = p.u0 * x * ux - p.u0 * y * uy; // div q = 0
    return ut - diffusion + advection + p.decay * u;
  };
  return mms;
}

double fit_slope(const std::vector<ConvergencePoint>& points) {
  if (points.size() < 2) throw InvalidArgument("fit_slope: need at least 2 points");
  double sx = 0.0, sy = 0.0;
  for (const auto& pt : points) {
    if (!(pt.parameter > 0.0) || !(pt.error > 0.0)) {
      throw InvalidArgument("fit_slope: parameters and errors must be positive");
    }
    sx += std::log(pt.parameter);
    sy += std::log(pt.error);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& pt : points) {
    const double dx = std::log(pt.parameter) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(pt.error) - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit_slope: all parameters are equal");
  return sxy / sxx;
}

ConvergenceReport space_convergence(const ManufacturedCase& mms,
                                    const std::vector<Index>& cells_per_axis, double dt,
                                    const PhiActionConfig& phi) {
  ConvergenceReport report;
  report.name = mms.name;
  report.parameter = "h";
  report.metadata["dt"] = fmt17(dt);
  report.metadata["final_time"] = fmt17(mms.final_time);
  report.metadata["method"] = to_string(phi.method);
  report.metadata["norm"] = "l2_0h";

  std::vector<Index> grids = cells_per_axis;
  std::sort(grids.begin(), grids.end());
  double worst_relative = 0.0;
  for (Index n : grids) {
    std::array<Index, 3> counts{n, n, 1};
    std::array<double, 3> sizes{mms.extent[0] / static_cast<double>(n),
                                mms.extent[1] / static_cast<double>(n), 1.0};
    const StructuredMesh mesh(mms.dim, counts, sizes, mms.origin);
    const auto diffusion = average_diffusion(mms.diffusion, mesh);
    const auto fluxes = face_fluxes_from_velocity(mms.velocity, mesh);
    const auto boundary = BoundarySpec::all_dirichlet(mesh, mms.exact);
    const ScalarCellField porosity(static_cast<std::size_t>(mesh.num_cells()), 1.0);
    const DiscreteOperator op = assemble(mesh, diffusion, fluxes, porosity, boundary);

    Vector x0(mesh.num_cells());
    Vector exact(mesh.num_cells());
    for (Index i = 0; i < mesh.num_cells(); ++i) {
      x0[i] = mms.exact(mesh.cell_center(i), mms.t0);
      exact[i] = mms.exact(mesh.cell_center(i), mms.final_time);
    }
    RunPlan plan;
    plan.dt = dt;
    plan.t0 = mms.t0;
    plan.final_time = mms.final_time;
    plan.phi = phi;
    Trajectory traj;
    try {
      traj = run(make_system(op, mesh, mms.solver_reaction()), x0, plan, {}, false);
    } catch (const SolverError& e) {
      report.notice = "sweep aborted at " + std::to_string(n) + "^2: " + e.what();
      return report;
    }
    const Vector err = traj.snapshots.back().state.values - exact;
    const double e = l2_norm(err, mesh);
    report.points.push_back({mesh.h(), e});
    worst_relative = std::max(worst_relative, e / std::max(l2_norm(exact, mesh), 1e-300));
  }
  if (worst_relative <= kSpaceFloor) {
    report.notice = "errors at the round-off floor; slope fit skipped";
  } else if (report.points.size() >= 3) {
    report.slope = fit_slope(report.points);
  } else {
    report.notice = "fewer than 3 points; slope fit skipped";
  }
  return report;
}

ConvergenceReport time_convergence(const TimeStudySetup& setup, const std::vector<double>& dts,
                                   double reference_dt) {
  if (dts.empty()) throw InvalidArgument("time_convergence: no step sizes given");
  const double dt_min = *std::min_element(dts.begin(), dts.end());
  if (!(reference_dt > 0.0) || reference_dt > dt_min / 4.0 * (1.0 + 1e-12)) {
    throw InvalidArgument("time_convergence: reference dt must be <= min(dts)/4");
  }
  ConvergenceReport report;
  report.name = setup.name;
  report.parameter = "dt";
  report.metadata["reference_dt"] = fmt17(reference_dt);
  report.metadata["final_time"] = fmt17(setup.final_time);
  report.metadata["method"] = to_string(setup.phi.method);
  report.metadata["norm"] = "l2_0h";

  auto solve = [&](double dt) {
    RunPlan plan;
    plan.dt = dt;
    plan.t0 = setup.t0;
    plan.final_time = setup.final_time;
    plan.phi = setup.phi;
    return run(setup.make_system(), setup.initial, plan, {}, false).snapshots.back().state.values;
  };

  Vector reference;
  try {
    reference = solve(reference_dt);
  } catch (const SolverError& e) {
    report.notice = std::string("reference run failed: ") + e.what();
    return report;
  }
  const double ref_norm = setup.norm(reference);

  std::vector<double> sorted = dts;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double worst_relative = 0.0;
  for (double dt : sorted) {
    Vector x;
    try {
      x = solve(dt);
    } catch (const SolverError& e) {
      report.notice = "sweep aborted at dt=" + fmt17(dt) + ": " + e.what();
      return report;
    }
    const double e = setup.norm(x - reference);
    report.points.push_back({dt, e});
    worst_relative = std::max(worst_relative, ref_norm > 0.0 ? e / ref_norm : e);
  }
  if (worst_relative <= kTimeFloorFactor * setup.phi.tol) {
    report.notice = "errors at the phi-action tolerance floor; slope fit skipped";
  } else if (report.points.size() >= 3) {
    report.slope = fit_slope(report.points);
  } else {
    report.notice = "fewer than 3 points; slope fit skipped";
  }
  return report;
}

} // namespace fvetd
