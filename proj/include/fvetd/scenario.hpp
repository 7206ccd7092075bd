#pragma once

#include <memory>
#include <optional>

#include "fvetd/config.hpp"
#include "fvetd/darcy.hpp"
#include "fvetd/etd.hpp"
#include "fvetd/verification.hpp"

namespace fvetd {

/// Boundary faces whose closure contains a segment of the vertical line
/// x = x_line, y = y_line (the x- and y-normal faces of the corner column).
/// Matching uses a tolerance of 1e-9 h.
bool touches_vertical_line(const StructuredMesh& mesh, const Face& face, double x_line, double y_line);

/// Dirichlet `low` on the column at (x_min, y_min), `high` on the column at
/// (x_max, y_max), no-flow elsewhere.
BoundarySpec corner_columns(const StructuredMesh& mesh, double low, double high);

/// Layered synthetic permeability (SI, m^2): horizontal values vary by layer
/// with a smooth lateral modulation, vertical = 0.1 * horizontal.
CellDiffusionField spe10_layered_permeability(const StructuredMesh& mesh);
ScalarCellField spe10_layered_porosity(const StructuredMesh& mesh);

struct DarcySolution {
  CellDiffusionField permeability;
  BoundarySpec boundary;
  ScalarCellField pressure;
  FaceFluxField fluxes;
  FluxBalance balance;
};

/// Everything needed to run the transport problem a config describes.
/// Not movable: systems built from it keep references into it.
struct Scenario {
  explicit Scenario(StructuredMesh m) : mesh(std::move(m)), boundary(mesh) {}
  Scenario(const Scenario&) = delete;
  Scenario& operator=(const Scenario&) = delete;

  StructuredMesh mesh;
  CellDiffusionField diffusion;
  FaceFluxField fluxes;
  ScalarCellField porosity;
  BoundarySpec boundary;
  ReactionModel reaction;
  AssemblyOptions options;
  Vector initial;
  DiscreteOperator op;
  std::optional<DarcySolution> darcy;
  std::optional<ManufacturedCase> manufactured;

  SemilinearSystem system() const { return make_system(op, mesh, reaction); }
};

StructuredMesh mesh_from_config(const RunConfig& cfg);

/// Solves the pressure problem described by [fields] (permeability,
/// viscosity, pressure_low/high on the corner columns).
DarcySolution solve_darcy(const RunConfig& cfg, const StructuredMesh& mesh);

std::unique_ptr<Scenario> build_scenario(const RunConfig& cfg);

/// Desk-scale analogue of the layered reservoir study: 12 x 22 x 4 cells over
/// 1200 x 2200 x 40 ft, Darcy flow between the corner columns, Langmuir
/// sorption (lambda = 1, beta = 1e-3), D = 1e-6 I, X0 = 0, T = 4096 s.
RunConfig spe10_analogue_config();

/// The time-convergence setup of a scenario.
TimeStudySetup time_study(const Scenario& scenario, const RunConfig& cfg);

} // namespace fvetd
