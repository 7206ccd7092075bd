#pragma once

#include <functional>
#include <vector>

#include "fvetd/fields.hpp"
#include "fvetd/kernels.hpp"
#include "fvetd/mesh.hpp"

namespace fvetd {

/// Denominator of the interior transmissibility.
///   Harmonic:     D_i d_j + D_j d_i   (distance-weighted harmonic mean)
///   SelfWeighted: D_i d_i + D_j d_j
/// The two agree whenever d_i == d_j, which holds on every grid built here.
enum class TransmissibilityForm { Harmonic, SelfWeighted };

/// tau_sigma, so that the diffusive flux out of the first neighbor is
/// tau_sigma * (X_first - X_second). Boundary faces: mes(sigma) D_i / d_i.
double transmissibility(const Face& face, const CellDiffusionField& diffusion,
                        TransmissibilityForm form = TransmissibilityForm::Harmonic);

/// mu_sigma = tau_sigma * d_sigma / mes(sigma).
double mu_factor(const Face& face, const CellDiffusionField& diffusion,
                 TransmissibilityForm form = TransmissibilityForm::Harmonic);

/// r_sigma = (sign(q) + 1) / 2 with sign(0) = +1.
inline int upwind_coefficient(double q_out) { return q_out >= 0.0 ? 1 : 0; }

struct AssemblyOptions {
  double c0 = 0.0;
  TransmissibilityForm form = TransmissibilityForm::Harmonic;
};

/// Semidiscrete operator of
///   M dX/dt = -(M A) X + b(t) + M R(x, t, X),  M = diag(phi_i mes(i)).
///
/// `scaled` is A (rows divided by M_ii, plus c0 I) and is what the time
/// integrator exponentiates. `unscaled` is M A and `diffusion` is the
/// diffusive part of M A alone, both kept for diagnostics and tests.
/// b(t) collects Dirichlet data: tau g for diffusion and -q g on inflow faces.
class DiscreteOperator {
public:
  struct BoundaryTerm {
    Index cell;
    Index face;
    double coeff;
    std::function<double(const Point&, double)> value;
    Point where;
  };

  SparseMatrix scaled;
  SparseMatrix unscaled;
  SparseMatrix diffusion;
  Vector mass;
  double c0 = 0.0;
  std::vector<BoundaryTerm> boundary_terms;
  std::vector<bool> dirichlet_face;

  Index size() const { return scaled.rows(); }

  /// A x
  Vector apply(const Vector& x) const;
  /// A x - M^{-1} b(t)
  Vector apply(const Vector& x, double t) const;
  /// b(t)
  Vector boundary_vector(double t) const;
  /// M^{-1} b(t)
  Vector source(double t) const;
};

DiscreteOperator assemble(const StructuredMesh& mesh, const CellDiffusionField* diffusion,
                          const FaceFluxField& fluxes, const ScalarCellField& porosity,
                          const BoundarySpec& boundary, const AssemblyOptions& options = {});

inline DiscreteOperator assemble(const StructuredMesh& mesh, const CellDiffusionField& diffusion,
                                 const FaceFluxField& fluxes, const ScalarCellField& porosity,
                                 const BoundarySpec& boundary, const AssemblyOptions& options = {}) {
  return assemble(mesh, &diffusion, fluxes, porosity, boundary, options);
}

struct DiscreteNorms {
  double l2 = 0.0; // ||u||_{0,h}
  double h1 = 0.0; // ||u||_{1,T}
};

/// Cell-measure weighted L2 norm and the face-jump H1 seminorm. Dirichlet
/// faces contribute |u_i|; Neumann faces are left out.
DiscreteNorms discrete_norms(const Vector& u, const StructuredMesh& mesh,
                             const DiscreteOperator& op);

/// Cell-measure weighted L2 norm alone.
double l2_norm(const Vector& u, const StructuredMesh& mesh);

} // namespace fvetd
