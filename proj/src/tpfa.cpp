#include "fvetd/tpfa.hpp"

#include <cmath>
#include <string>

#include "fvetd/error.hpp"

namespace fvetd {

double transmissibility(const Face& face, const CellDiffusionField& diffusion,
                        TransmissibilityForm form) {
  if (!(face.dist_first > 0.0) || (!face.is_boundary() && !(face.dist_second > 0.0))) {
    throw InvalidArgument("transmissibility: zero cell-to-face distance");
  }
  const double di = diffusion.normal_component(face.first, face.axis);
  if (face.is_boundary()) return face.measure * di / face.dist_first;
  const double dj = diffusion.normal_component(face.second, face.axis);
  const double denom = form == TransmissibilityForm::Harmonic
                           ? di * face.dist_second + dj * face.dist_first
                           : di * face.dist_first + dj * face.dist_second;
  return face.measure * di * dj / denom;
}

double mu_factor(const Face& face, const CellDiffusionField& diffusion, TransmissibilityForm form) {
  return transmissibility(face, diffusion, form) * face.distance() / face.measure;
}

DiscreteOperator assemble(const StructuredMesh& mesh, const CellDiffusionField* diffusion,
                          const FaceFluxField& fluxes, const ScalarCellField& porosity,
                          const BoundarySpec& boundary, const AssemblyOptions& options) {
  const Index n = mesh.num_cells();
  if (static_cast<Index>(porosity.size()) != n) {
    throw InvalidArgument("porosity field length " + std::to_string(porosity.size()) +
                          " does not match cell count " + std::to_string(n));
  }
  if (static_cast<Index>(fluxes.values.size()) != mesh.num_faces()) {
    throw InvalidArgument("face flux field does not match the mesh face count");
  }
  if (diffusion && diffusion->size() != n) {
    throw InvalidArgument("diffusion field does not match the cell count");
  }
  if (options.c0 < 0.0) throw InvalidArgument("c0 must be >= 0");
  boundary.validate(mesh);

  DiscreteOperator op;
  op.c0 = options.c0;
  op.mass.resize(n);
  for (Index i = 0; i < n; ++i) {
    const double phi = porosity[static_cast<std::size_t>(i)];
    if (!(phi > 0.0)) {
      throw InvalidArgument("porosity must be > 0 (cell " + std::to_string(i) + ")");
    }
    op.mass[i] = phi * mesh.cell_measure(i);
  }
  op.dirichlet_face.assign(static_cast<std::size_t>(mesh.num_faces()), false);

  using Triplet = Eigen::Triplet<double, Eigen::Index>;
  std::vector<Triplet> full;
  std::vector<Triplet> diff;
  full.reserve(static_cast<std::size_t>(n * (2 * mesh.dim() + 1)));

  for (Index i = 0; i < n; ++i) {
    full.emplace_back(i, i, options.c0 * op.mass[i]);
    diff.emplace_back(i, i, 0.0);
  }

  for (Index fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& f = mesh.face(fi);
    const double tau = diffusion ? transmissibility(f, *diffusion, options.form) : 0.0;
    const double q = fluxes[fi]; // out of f.first
    if (!f.is_boundary()) {
      const Index i = f.first;
      const Index j = f.second;
      // Row i sees q_{i,sigma} = q, row j sees -q.
      const int ri = upwind_coefficient(q);
      const int rj = upwind_coefficient(-q);
      full.emplace_back(i, i, tau + q * ri);
      full.emplace_back(i, j, -tau + q * (1 - ri));
      full.emplace_back(j, j, tau - q * rj);
      full.emplace_back(j, i, -tau - q * (1 - rj));
      diff.emplace_back(i, i, tau);
      diff.emplace_back(i, j, -tau);
      diff.emplace_back(j, j, tau);
      diff.emplace_back(j, i, -tau);
      continue;
    }

    const Index i = f.first;
    const BoundaryCondition& bc = boundary[fi];
    if (bc.kind == BoundaryKind::Dirichlet) {
      op.dirichlet_face[static_cast<std::size_t>(fi)] = true;
      const int r = upwind_coefficient(q);
      full.emplace_back(i, i, tau + q * r);
      diff.emplace_back(i, i, tau);
      const double coeff = tau - q * (1 - r);
      if (coeff != 0.0) op.boundary_terms.push_back({i, fi, coeff, bc.value, f.center});
    } else {
      // Homogeneous Neumann: no diffusive flux, the face value is X_i.
      full.emplace_back(i, i, q);
    }
  }

  op.unscaled.resize(n, n);
  op.unscaled.setFromTriplets(full.begin(), full.end());
  op.unscaled.makeCompressed();
  op.diffusion.resize(n, n);
  op.diffusion.setFromTriplets(diff.begin(), diff.end());
  op.diffusion.makeCompressed();

  op.scaled = op.unscaled;
  for (Index r = 0; r < n; ++r) {
    for (SparseMatrix::InnerIterator it(op.scaled, r); it; ++it) it.valueRef() /= op.mass[r];
  }
  return op;
}

Vector DiscreteOperator::apply(const Vector& x) const {
  if (x.size() != scaled.cols()) {
    throw InvalidArgument("apply: state length " + std::to_string(x.size()) +
                          " does not match operator size " + std::to_string(scaled.cols()));
  }
  return kernels::spmv(scaled, x);
}

Vector DiscreteOperator::apply(const Vector& x, double t) const {
  Vector y = apply(x);
  y -= source(t);
  return y;
}

Vector DiscreteOperator::boundary_vector(double t) const {
  Vector b = Vector::Zero(size());
  for (const auto& term : boundary_terms) b[term.cell] += term.coeff * term.value(term.where, t);
  return b;
}

Vector DiscreteOperator::source(double t) const {
  return boundary_vector(t).cwiseQuotient(mass);
}

DiscreteNorms discrete_norms(const Vector& u, const StructuredMesh& mesh,
                             const DiscreteOperator& op) {
  if (u.size() != mesh.num_cells()) throw InvalidArgument("discrete_norms: size mismatch");
  DiscreteNorms out;
  out.l2 = l2_norm(u, mesh);
  double s = 0.0;
  for (Index fi = 0; fi < mesh.num_faces(); ++fi) {
    const Face& f = mesh.face(fi);
    double jump = 0.0;
    if (!f.is_boundary()) {
      jump = u[f.second] - u[f.first];
    } else if (op.dirichlet_face[static_cast<std::size_t>(fi)]) {
      jump = u[f.first];
    } else {
      continue;
    }
    s += f.measure / f.distance() * jump * jump;
  }
  out.h1 = std::sqrt(s);
  return out;
}

double l2_norm(const Vector& u, const StructuredMesh& mesh) {
  double s = 0.0;
  for (Index i = 0; i < mesh.num_cells(); ++i) s += mesh.cell_measure(i) * u[i] * u[i];
  return std::sqrt(s);
}

} // namespace fvetd
