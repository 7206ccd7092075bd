#include "fvetd/fields.hpp"

#include <cmath>
#include <random>
#include <string>

#include "fvetd/error.hpp"

namespace fvetd {

namespace {

void check_positive(const std::array<double, 3>& d, int dim, Index cell) {
  for (int a = 0; a < dim; ++a) {
    const double v = d[static_cast<std::size_t>(a)];
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("ellipticity violated: tensor entry " + std::to_string(a) +
                            " at cell " + std::to_string(cell) + " is not positive");
    }
  }
}

} // namespace

CellDiffusionField average_diffusion(const TensorFunction& tensor, const StructuredMesh& mesh) {
  CellDiffusionField field;
  field.values.resize(static_cast<std::size_t>(mesh.num_cells()));
  for (Index i = 0; i < mesh.num_cells(); ++i) {
    auto d = tensor(mesh.cell_center(i));
    check_positive(d, mesh.dim(), i);
    for (int a = mesh.dim(); a < 3; ++a) d[static_cast<std::size_t>(a)] = 1.0;
    field.values[static_cast<std::size_t>(i)] = d;
  }
  return field;
}

CellDiffusionField diffusion_from_cells(std::vector<std::array<double, 3>> values,
                                        const StructuredMesh& mesh) {
  if (static_cast<Index>(values.size()) != mesh.num_cells()) {
    throw InvalidArgument("diffusion field has " + std::to_string(values.size()) +
                          " cells, mesh has " + std::to_string(mesh.num_cells()));
  }
  for (Index i = 0; i < mesh.num_cells(); ++i) {
    auto& d = values[static_cast<std::size_t>(i)];
    check_positive(d, mesh.dim(), i);
    for (int a = mesh.dim(); a < 3; ++a) d[static_cast<std::size_t>(a)] = 1.0;
  }
  return CellDiffusionField{std::move(values)};
}

CellDiffusionField constant_diffusion(const StructuredMesh& mesh, double value) {
  return average_diffusion(
      [value](const Point&) { return std::array<double, 3>{value, value, value}; }, mesh);
}

FaceFluxField face_fluxes_from_velocity(const VectorFunction& velocity,
                                        const StructuredMesh& mesh) {
  FaceFluxField q;
  q.values.reserve(static_cast<std::size_t>(mesh.num_faces()));
  for (const Face& f : mesh.faces()) {
    const auto v = velocity(f.center);
    q.values.push_back(f.measure * f.normal_sign * v[static_cast<std::size_t>(f.axis)]);
  }
  return q;
}

FaceFluxField zero_fluxes(const StructuredMesh& mesh) {
  return FaceFluxField{std::vector<double>(static_cast<std::size_t>(mesh.num_faces()), 0.0)};
}

std::vector<double> cell_flux_imbalance(const FaceFluxField& fluxes, const StructuredMesh& mesh) {
  std::vector<double> net(static_cast<std::size_t>(mesh.num_cells()), 0.0);
  for (Index i = 0; i < mesh.num_cells(); ++i) {
    double s = 0.0;
    for (const CellFace& cf : mesh.faces_of_cell(i)) s += fluxes.outward(cf.face, cf.sign);
    net[static_cast<std::size_t>(i)] = s;
  }
  return net;
}

ReactionModel no_reaction() {
  return {[](const Point&, double, double) { return 0.0; }, 0.0, "none"};
}

ReactionModel constant_reaction(double value) {
  return {[value](const Point&, double, double) { return value; }, 0.0, "constant"};
}

ReactionModel langmuir(double lambda, double beta) {
  if (!(lambda >= 0.0) || !std::isfinite(beta)) {
    throw InvalidArgument("langmuir: lambda must be >= 0 and beta finite");
  }
  auto rate = [lambda, beta](const Point&, double, double x) {
    const double denom = 1.0 + lambda * x;
    if (denom == 0.0) {
      throw SolverError("langmuir: evaluated at the pole X = -1/lambda");
    }
    return lambda * beta * x / denom;
  };
  return {rate, std::abs(lambda * beta), "langmuir"};
}

double sample_lipschitz(const ReactionModel& reaction, double value_max, int samples,
                        unsigned seed, const Point& x, double t) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, value_max);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double u = dist(rng);
    const double v = dist(rng);
    if (u == v) continue;
    worst = std::max(worst, std::abs(reaction(x, t, u) - reaction(x, t, v)) / std::abs(u - v));
  }
  return worst;
}

void BoundarySpec::validate(const StructuredMesh& mesh) const {
  if (static_cast<Index>(faces.size()) != mesh.num_faces()) {
    throw ConfigError("boundary specification does not match the mesh face count");
  }
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    const auto& bc = faces[static_cast<std::size_t>(f)];
    if (!mesh.face(f).is_boundary()) continue;
    if (bc.kind == BoundaryKind::Unset) {
      throw ConfigError("boundary face " + std::to_string(f) + " has no boundary condition");
    }
    if (bc.kind == BoundaryKind::Dirichlet && !bc.value) {
      throw ConfigError("Dirichlet boundary face " + std::to_string(f) + " has no data");
    }
  }
}

BoundarySpec BoundarySpec::all_dirichlet(const StructuredMesh& mesh,
                                         std::function<double(const Point&, double)> g) {
  BoundarySpec spec(mesh);
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face(f).is_boundary()) spec[f] = {BoundaryKind::Dirichlet, g};
  }
  return spec;
}

BoundarySpec BoundarySpec::all_neumann(const StructuredMesh& mesh) {
  BoundarySpec spec(mesh);
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face(f).is_boundary()) spec[f] = {BoundaryKind::Neumann, {}};
  }
  return spec;
}

} // namespace fvetd
