#include "fvetd/darcy.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "fvetd/error.hpp"

namespace fvetd {

CellDiffusionField mobility(const CellDiffusionField& permeability, double viscosity) {
  if (!(viscosity > 0.0)) throw InvalidArgument("viscosity must be > 0");
  CellDiffusionField m = permeability;
  for (auto& k : m.values) {
    for (double& v : k) v /= viscosity;
  }
  return m;
}

PressureSystem assemble_pressure(const StructuredMesh& mesh, const CellDiffusionField& permeability,
                                 double viscosity, const BoundarySpec& boundary,
                                 TransmissibilityForm form) {
  boundary.validate(mesh);
  if (permeability.size() != mesh.num_cells()) {
    throw InvalidArgument("permeability field does not match the cell count");
  }
  const CellDiffusionField mob = mobility(permeability, viscosity);
  const Index n = mesh.num_cells();
  PressureSystem sys;
  sys.rhs = Vector::Zero(n);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n * (2 * mesh.dim() + 1)));
  bool any_dirichlet = false;
  for (Index fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& f = mesh.face(fi);
    const double tau = transmissibility(f, mob, form);
    if (!f.is_boundary()) {
      trip.emplace_back(f.first, f.first, tau);
      trip.emplace_back(f.second, f.second, tau);
      trip.emplace_back(f.first, f.second, -tau);
      trip.emplace_back(f.second, f.first, -tau);
    } else if (boundary[fi].kind == BoundaryKind::Dirichlet) {
      any_dirichlet = true;
      trip.emplace_back(f.first, f.first, tau);
      sys.rhs[f.first] += tau * boundary[fi].value(f.center, 0.0);
    }
  }
  if (!any_dirichlet) {
    throw ConfigError("pressure system is singular: no Dirichlet boundary face (all no-flow)");
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.matrix.makeCompressed();
  return sys;
}

ScalarCellField solve_pressure(const PressureSystem& system) {
  const Index n = system.matrix.rows();
  Vector p;
  if (n <= system.direct_limit) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(system.matrix);
    if (ldlt.info() != Eigen::Success) throw SolverError("pressure: factorization failed");
    p = ldlt.solve(system.rhs);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>>
        cg;
    cg.setTolerance(system.tolerance * 1e-2);
    cg.setMaxIterations(system.max_iterations);
    cg.compute(system.matrix);
    p = cg.solve(system.rhs);
  }
  const double bnorm = system.rhs.norm();
  const double rnorm = (system.matrix * p - system.rhs).norm();
  if (!p.allFinite() || rnorm > system.tolerance * (bnorm > 0.0 ? bnorm : 1.0)) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "pressure: relative residual %g above target %g", rnorm / bnorm,
                  system.tolerance);
    throw SolverError(msg);
  }
  return ScalarCellField(p.data(), p.data() + p.size());
}

FaceFluxField extract_fluxes(const StructuredMesh& mesh, const CellDiffusionField& permeability,
                             double viscosity, const ScalarCellField& pressure,
                             const BoundarySpec& boundary, TransmissibilityForm form) {
  if (static_cast<Index>(pressure.size()) != mesh.num_cells()) {
    throw InvalidArgument("pressure field does not match the cell count");
  }
  const CellDiffusionField mob = mobility(permeability, viscosity);
  FaceFluxField q = zero_fluxes(mesh);
  for (Index fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& f = mesh.face(fi);
    const double pi = pressure[static_cast<std::size_t>(f.first)];
    if (!f.is_boundary()) {
      q.values[static_cast<std::size_t>(fi)] =
          transmissibility(f, mob, form) * (pi - pressure[static_cast<std::size_t>(f.second)]);
    } else if (boundary[fi].kind == BoundaryKind::Dirichlet) {
      q.values[static_cast<std::size_t>(fi)] =
          transmissibility(f, mob, form) * (pi - boundary[fi].value(f.center, 0.0));
    }
  }
  return q;
}

FluxBalance flux_balance(const StructuredMesh& mesh, const FaceFluxField& fluxes,
                         const BoundarySpec& boundary) {
  FluxBalance out;
  for (double v : fluxes.values) out.max_flux = std::max(out.max_flux, std::abs(v));
  for (Index i = 0; i < mesh.num_cells(); ++i) {
    double net = 0.0;
    bool touches_dirichlet = false;
    for (const CellFace& cf : mesh.faces_of_cell(i)) {
      if (cf.neighbor == kBoundary && boundary[cf.face].kind == BoundaryKind::Dirichlet) {
        touches_dirichlet = true;
      }
      net += fluxes.outward(cf.face, cf.sign);
    }
    if (!touches_dirichlet) out.max_imbalance = std::max(out.max_imbalance, std::abs(net));
  }
  return out;
}

} // namespace fvetd
