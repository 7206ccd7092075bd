#pragma once

#include <functional>
#include <vector>

#include "fvetd/error.hpp"
#include "fvetd/fields.hpp"
#include "fvetd/phi.hpp"
#include "fvetd/tpfa.hpp"

namespace fvetd {

/// X' = -A X + s(t) + r(t, X), the form ETD1 integrates.
struct SemilinearSystem {
  LinearOperator op;
  std::function<Vector(double)> source;                       // M^{-1} b(t); may be empty
  std::function<void(double, const Vector&, Vector&)> reaction; // nodal R; may be empty
};

/// Binds an assembled operator and a reaction model. The reaction is sampled
/// at cell centers. `op` and `mesh` must outlive the result.
SemilinearSystem make_system(const DiscreteOperator& op, const StructuredMesh& mesh,
                             ReactionModel reaction);

struct StateVector {
  Vector values;
  double t = 0.0;
};

struct RunPlan {
  double dt = 0.0;
  double t0 = 0.0;
  double final_time = 0.0;
  int snapshot_every = 0;             // steps between snapshots; 0 = first and last only
  std::vector<double> snapshot_times; // extra times, rounded to the nearest step
  PhiActionConfig phi;

  /// Number of steps to reach final_time; throws if (T - t0)/dt is not
  /// within 1e-9 of an integer or dt > T - t0.
  long long step_count() const;
};

struct Snapshot {
  long long step = 0;
  StateVector state;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  long long steps = 0;
  long long phi_calls = 0;
  long long matvecs = 0;
};

/// Raised when a step fails; carries the last good state.
class StepFailure : public SolverError {
public:
  StepFailure(const std::string& what, long long step, StateVector last)
      : SolverError(what), step_(step), last_(std::move(last)) {}
  long long step() const { return step_; }
  const StateVector& last_good() const { return last_; }

private:
  long long step_;
  StateVector last_;
};

/// Sequential ETD1 integrator: one phi_1 action per step,
///   X_{m+1} = X_m + dt phi_1(-dt A) (-A X_m + s(t_m) + r(t_m, X_m)).
class EtdStepper {
public:
  EtdStepper(SemilinearSystem system, PhiActionConfig config);

  StateVector step(const StateVector& x, double dt);

  long long phi_calls() const { return phi_calls_; }
  long long matvecs() const { return matvecs_; }
  const PhiDiagnostics& last_diagnostics() const { return last_; }

private:
  SemilinearSystem system_;
  PhiActionConfig config_;
  long long phi_calls_ = 0;
  long long matvecs_ = 0;
  PhiDiagnostics last_;
  Vector scratch_;
};

using SnapshotSink = std::function<void(const Snapshot&)>;

/// Steps from plan.t0 to plan.final_time. With keep_snapshots = false only
/// the final state is retained (the sink still sees every snapshot).
Trajectory run(SemilinearSystem system, const Vector& initial, const RunPlan& plan,
               const SnapshotSink& sink = {}, bool keep_snapshots = true);

} // namespace fvetd
