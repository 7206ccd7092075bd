#include "fvetd/etd.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "fvetd/error.hpp"

namespace fvetd {

SemilinearSystem make_system(const DiscreteOperator& op, const StructuredMesh& mesh,
                             ReactionModel reaction) {
  SemilinearSystem sys;
  sys.op = make_operator(op.scaled);
  if (!op.boundary_terms.empty()) {
    sys.source = [&op](double t) { return op.source(t); };
  }
  std::vector<Point> centers(static_cast<std::size_t>(mesh.num_cells()));
  for (Index i = 0; i < mesh.num_cells(); ++i) centers[static_cast<std::size_t>(i)] = mesh.cell_center(i);
  sys.reaction = [centers = std::move(centers), reaction = std::move(reaction)](
                     double t, const Vector& x, Vector& r) {
    r.resize(x.size());
    for (Index i = 0; i < x.size(); ++i) r[i] = reaction(centers[static_cast<std::size_t>(i)], t, x[i]);
  };
  return sys;
}

long long RunPlan::step_count() const {
  if (!(dt > 0.0)) throw InvalidArgument("run plan: dt must be > 0");
  const double span = final_time - t0;
  if (!(span >= dt * (1.0 - 1e-12))) throw InvalidArgument("run plan: final time must be >= t0 + dt");
  const double steps = span / dt;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
    throw InvalidArgument("run plan: (T - t0)/dt = " + std::to_string(steps) + " is not an integer");
  }
  return static_cast<long long>(rounded);
}

EtdStepper::EtdStepper(SemilinearSystem system, PhiActionConfig config)
    : system_(std::move(system)), config_(config) {
  config_.validate();
}

StateVector EtdStepper::step(const StateVector& x, double dt) {
  if (x.values.size() != system_.op.size) throw InvalidArgument("etd1: state length mismatch");
  Vector g(x.values.size());
  system_.op.apply(x.values, g);
  g = -g;
  if (system_.source) g += system_.source(x.t);
  if (system_.reaction) {
    system_.reaction(x.t, x.values, scratch_);
    if (!scratch_.allFinite()) throw SolverError("etd1: non-finite reaction value");
    g += scratch_;
  }
  const PhiResult phi = phi1_action(system_.op, dt, g, config_);
  ++phi_calls_;
  matvecs_ += phi.diagnostics.matvecs + 1;
  last_ = phi.diagnostics;
  StateVector next{x.values + dt * phi.w, x.t + dt};
  return next;
}

Trajectory run(SemilinearSystem system, const Vector& initial, const RunPlan& plan,
               const SnapshotSink& sink, bool keep_snapshots) {
  const long long nsteps = plan.step_count();
  std::set<long long> marks{0, nsteps};
  if (plan.snapshot_every > 0) {
    for (long long k = 0; k <= nsteps; k += plan.snapshot_every) marks.insert(k);
  }
  for (double t : plan.snapshot_times) {
    const long long k = std::llround((t - plan.t0) / plan.dt);
    if (k < 0 || k > nsteps) throw InvalidArgument("run plan: snapshot time outside [t0, T]");
    marks.insert(k);
  }

  Trajectory traj;
  EtdStepper stepper(std::move(system), plan.phi);
  StateVector state{initial, plan.t0};
  auto emit = [&](long long k) {
    if (!marks.count(k)) return;
    Snapshot snap{k, state};
    if (sink) sink(snap);
    if (keep_snapshots || k == nsteps) traj.snapshots.push_back(std::move(snap));
  };
  emit(0);
  for (long long k = 1; k <= nsteps; ++k) {
    try {
      state = stepper.step(state, plan.dt);
    } catch (const SolverError& e) {
      throw StepFailure("step " + std::to_string(k) + " failed: " + e.what(), k, state);
    }
    // t stays on the step grid t0 + k dt
    state.t = plan.t0 + static_cast<double>(k) * plan.dt;
    emit(k);
  }
  traj.steps = nsteps;
  traj.phi_calls = stepper.phi_calls();
  traj.matvecs = stepper.matvecs();
  return traj;
}

} // namespace fvetd
