#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fvetd/mesh.hpp"

namespace fvetd {

/// One value per cell: porosity, pressure, concentration snapshots.
using ScalarCellField = std::vector<double>;

/// Diagonal tensor per cell, one entry per axis. Unused axes hold 1.
struct CellDiffusionField {
  std::vector<std::array<double, 3>> values;

  Index size() const { return static_cast<Index>(values.size()); }
  /// |D_i n| for an axis-aligned unit normal.
  double normal_component(Index cell, int axis) const {
    return values[static_cast<std::size_t>(cell)][static_cast<std::size_t>(axis)];
  }
};

using TensorFunction = std::function<std::array<double, 3>(const Point&)>;
using VectorFunction = std::function<std::array<double, 3>(const Point&)>;

/// Per-cell average of D by one-point (midpoint) quadrature at the cell center.
/// Throws InvalidArgument if any sampled entry is not strictly positive.
CellDiffusionField average_diffusion(const TensorFunction& tensor, const StructuredMesh& mesh);

/// Same as above from per-cell values (rasters). Same positivity check.
CellDiffusionField diffusion_from_cells(std::vector<std::array<double, 3>> values,
                                        const StructuredMesh& mesh);

CellDiffusionField constant_diffusion(const StructuredMesh& mesh, double value);

/// Normal flux per face, signed along the face normal (out of `Face::first`).
/// The value seen by the second neighbor is the negation, so interior
/// antisymmetry holds by storage.
struct FaceFluxField {
  std::vector<double> values;

  /// q_{i,sigma} for the cell that sees the face normal with `sign`.
  double outward(Index f, int sign) const { return sign * values[static_cast<std::size_t>(f)]; }
  double operator[](Index f) const { return values[static_cast<std::size_t>(f)]; }
};

/// q_sigma = mes(sigma) * q(x_sigma) . n_sigma
FaceFluxField face_fluxes_from_velocity(const VectorFunction& velocity,
                                        const StructuredMesh& mesh);

FaceFluxField zero_fluxes(const StructuredMesh& mesh);

/// Net outward flux of each cell, sum over faces of q_{i,sigma}.
std::vector<double> cell_flux_imbalance(const FaceFluxField& fluxes, const StructuredMesh& mesh);

/// Pointwise reaction rate R(x, t, X). Evaluators must be pure.
struct ReactionModel {
  std::function<double(const Point&, double, double)> rate;
  double lipschitz = 0.0;
  std::string name;

  double operator()(const Point& x, double t, double value) const { return rate(x, t, value); }
};

ReactionModel no_reaction();
ReactionModel constant_reaction(double value);

/// Langmuir isotherm lambda*beta*X / (1 + lambda*X). Throws SolverError when
/// evaluated at the pole X = -1/lambda.
ReactionModel langmuir(double lambda, double beta);

/// Largest difference quotient |R(u)-R(v)|/|u-v| seen over `samples` random
/// pairs in [0, value_max]. Spot check only.
double sample_lipschitz(const ReactionModel& reaction, double value_max, int samples,
                        unsigned seed, const Point& x = {}, double t = 0.0);

enum class BoundaryKind { Unset, Dirichlet, Neumann };

struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::Unset;
  std::function<double(const Point&, double)> value; // Dirichlet data g(x, t)
};

/// One condition per face; interior entries are ignored.
struct BoundarySpec {
  std::vector<BoundaryCondition> faces;

  explicit BoundarySpec(const StructuredMesh& mesh) : faces(static_cast<std::size_t>(mesh.num_faces())) {}

  const BoundaryCondition& operator[](Index f) const { return faces[static_cast<std::size_t>(f)]; }
  BoundaryCondition& operator[](Index f) { return faces[static_cast<std::size_t>(f)]; }

  /// Throws ConfigError naming the first boundary face left Unset.
  void validate(const StructuredMesh& mesh) const;

  static BoundarySpec all_dirichlet(const StructuredMesh& mesh,
                                    std::function<double(const Point&, double)> g);
  static BoundarySpec all_neumann(const StructuredMesh& mesh);
};

} // namespace fvetd
