#pragma once

#include "fvetd/fields.hpp"
#include "fvetd/kernels.hpp"
#include "fvetd/tpfa.hpp"

namespace fvetd {

/// TPFA discretisation of div(q) = 0, q = -(K/mu) grad p, with Dirichlet
/// pressures on part of the boundary and no-flow elsewhere.
struct PressureSystem {
  Eigen::SparseMatrix<double> matrix; // symmetric positive definite
  Vector rhs;
  double tolerance = 1e-10; // relative residual target
  int max_iterations = 20000;
  Index direct_limit = 250000; // direct Cholesky up to this many cells
};

/// Mobility K/mu per cell.
CellDiffusionField mobility(const CellDiffusionField& permeability, double viscosity);

PressureSystem assemble_pressure(const StructuredMesh& mesh, const CellDiffusionField& permeability,
                                 double viscosity, const BoundarySpec& boundary,
                                 TransmissibilityForm form = TransmissibilityForm::Harmonic);

/// Throws SolverError if the residual target is not met.
ScalarCellField solve_pressure(const PressureSystem& system);

/// q_sigma out of the first neighbor: tau (p_first - p_second) inside,
/// tau (p_i - g) on Dirichlet faces, 0 on no-flow faces.
FaceFluxField extract_fluxes(const StructuredMesh& mesh, const CellDiffusionField& permeability,
                             double viscosity, const ScalarCellField& pressure,
                             const BoundarySpec& boundary,
                             TransmissibilityForm form = TransmissibilityForm::Harmonic);

struct FluxBalance {
  double max_imbalance = 0.0; // over cells without Dirichlet faces
  double max_flux = 0.0;
};

FluxBalance flux_balance(const StructuredMesh& mesh, const FaceFluxField& fluxes,
                         const BoundarySpec& boundary);

} // namespace fvetd
