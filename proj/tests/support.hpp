// Oracles and generators shared by the unit and acceptance tests. Nothing
// here calls into the assembly or phi code under test.
#pragma once

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "fvetd/fields.hpp"
#include "fvetd/mesh.hpp"

namespace fvetd::testing {

inline StructuredMesh random_mesh(std::mt19937_64& rng, Index max_count = 4) {
  std::uniform_int_distribution<int> dim_d(2, 3);
  std::uniform_int_distribution<Index> count_d(1, max_count);
  std::uniform_real_distribution<double> size_d(0.2, 2.0);
  const int dim = dim_d(rng);
  std::vector<Index> c;
  std::vector<double> s;
  std::vector<double> o;
  for (int a = 0; a < dim; ++a) {
    c.push_back(count_d(rng));
    s.push_back(size_d(rng));
    o.push_back(size_d(rng) - 1.0);
  }
  return build_grid(dim, c, s, o);
}

/// Face index from index arithmetic alone: faces of axis a live on a grid
/// with one extra plane along a, grouped axis by axis.
inline Index face_id(const std::array<Index, 3>& n, int axis, std::array<Index, 3> ijk_lo_plane) {
  Index offset = 0;
  for (int b = 0; b < axis; ++b) {
    std::array<Index, 3> m = n;
    m[static_cast<std::size_t>(b)] += 1;
    offset += m[0] * m[1] * m[2];
  }
  std::array<Index, 3> m = n;
  m[static_cast<std::size_t>(axis)] += 1;
  return offset + ijk_lo_plane[0] + m[0] * (ijk_lo_plane[1] + m[1] * ijk_lo_plane[2]);
}

/// Divergence-free face fluxes with zero normal flux on the boundary.
/// 2D: differences of a nodal stream function. 3D: circulation of an edge
/// vector potential around each face. Boundary nodes/edges carry zero.
inline FaceFluxField divergence_free_fluxes(const StructuredMesh& mesh, std::mt19937_64& rng,
                                            double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  const auto n = mesh.counts();
  FaceFluxField q{std::vector<double>(static_cast<std::size_t>(mesh.num_faces()), 0.0)};
  const Index nx = n[0], ny = n[1], nz = n[2];
  auto on_boundary = [&](Index i, Index j, Index k, int d) {
    bool b = i == 0 || i == nx || j == 0 || j == ny;
    if (d == 3) b = b || k == 0 || k == nz;
    return b;
  };
  if (mesh.dim() == 2) {
    std::vector<double> psi(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    auto node = [&](Index i, Index j) -> double& { return psi[static_cast<std::size_t>(i + (nx + 1) * j)]; };
    for (Index j = 0; j <= ny; ++j)
      for (Index i = 0; i <= nx; ++i) node(i, j) = on_boundary(i, j, 0, 2) ? 0.0 : g(rng);
    for (Index j = 0; j < ny; ++j)
      for (Index i = 0; i <= nx; ++i)
        q.values[static_cast<std::size_t>(face_id(n, 0, {i, j, 0}))] = node(i, j + 1) - node(i, j);
    for (Index j = 0; j <= ny; ++j)
      for (Index i = 0; i < nx; ++i)
        q.values[static_cast<std::size_t>(face_id(n, 1, {i, j, 0}))] = -(node(i + 1, j) - node(i, j));
    return q;
  }
  // Edge potentials: edges along axis e start at node (i,j,k).
  auto edge_count = [&](int e) {
    std::array<Index, 3> m{nx + 1, ny + 1, nz + 1};
    m[static_cast<std::size_t>(e)] -= 1;
    return m;
  };
  std::array<std::vector<double>, 3> pot;
  for (int e = 0; e < 3; ++e) {
    const auto m = edge_count(e);
    pot[static_cast<std::size_t>(e)].resize(static_cast<std::size_t>(m[0] * m[1] * m[2]));
    for (Index k = 0; k < m[2]; ++k)
      for (Index j = 0; j < m[1]; ++j)
        for (Index i = 0; i < m[0]; ++i) {
          // an edge is on the boundary when both of its end nodes are on a common boundary plane
          std::array<Index, 3> a{i, j, k};
          bool bnd = false;
          for (int b = 0; b < 3; ++b) {
            if (b == e) continue;
            const Index v = a[static_cast<std::size_t>(b)];
            const Index top = b == 0 ? nx : (b == 1 ? ny : nz);
            bnd = bnd || v == 0 || v == top;
          }
          pot[static_cast<std::size_t>(e)][static_cast<std::size_t>(i + m[0] * (j + m[1] * k))] =
              bnd ? 0.0 : g(rng);
        }
  }
  auto A = [&](int e, Index i, Index j, Index k) {
    const auto m = edge_count(e);
    return pot[static_cast<std::size_t>(e)][static_cast<std::size_t>(i + m[0] * (j + m[1] * k))];
  };
  // flux through the face normal to axis a = circulation of the potential
  // around its boundary (right-handed about +a)
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    std::array<Index, 3> m = n;
    m[static_cast<std::size_t>(a)] += 1;
    for (Index k = 0; k < m[2]; ++k)
      for (Index j = 0; j < m[1]; ++j)
        for (Index i = 0; i < m[0]; ++i) {
          std::array<Index, 3> p{i, j, k};
          auto shift = [&](int axis) {
            auto r = p;
            r[static_cast<std::size_t>(axis)] += 1;
            return r;
          };
          const auto pb = shift(b), pc = shift(c);
          const double circ = A(b, p[0], p[1], p[2]) + A(c, pb[0], pb[1], pb[2]) -
                              A(b, pc[0], pc[1], pc[2]) - A(c, p[0], p[1], p[2]);
          q.values[static_cast<std::size_t>(face_id(n, a, p))] = circ;
        }
  }
  return q;
}

/// A x for a symmetric-positive-part random dense matrix generator.
inline Eigen::MatrixXd random_stable_dense(Eigen::Index n, std::mt19937_64& rng, double density,
                                          double scale) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && u(rng) < density) b(i, j) = g(rng);
  Eigen::MatrixXd a = b;
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = b.row(i).cwiseAbs().sum() + b.col(i).cwiseAbs().sum() + 0.1 + u(rng);
  }
  return scale * a;
}

/// phi_1(-dt A) v = (dt A)^{-1} (I - exp(-dt A)) v via Eigen's matrix exponential.
inline Eigen::VectorXd phi1_oracle(const Eigen::MatrixXd& a, double dt, const Eigen::VectorXd& v) {
  const Eigen::MatrixXd e = (-dt * a).exp();
  return (dt * a).partialPivLu().solve(v - e * v);
}

inline Eigen::VectorXd exp_oracle(const Eigen::MatrixXd& a, double dt, const Eigen::VectorXd& v) {
  const Eigen::MatrixXd e = (-dt * a).exp();
  return e * v;
}

inline double rel_err(const Eigen::VectorXd& x, const Eigen::VectorXd& ref) {
  const double d = ref.norm();
  return d > 0.0 ? (x - ref).norm() / d : (x - ref).norm();
}

/// Brute-force M A and b built cell by cell from index arithmetic: loop over
/// every cell and both sides along each axis, neighbors from coordinates,
/// distances h/2, face measures from the other sizes. `dirichlet[f]` and
/// `g[f]` describe boundary faces by the arithmetic face id.
struct DenseAssembly {
  Eigen::MatrixXd ma;
  Eigen::MatrixXd diffusion;
  Eigen::VectorXd b;
};

inline DenseAssembly dense_assembly(const StructuredMesh& mesh, const CellDiffusionField& d,
                                    const FaceFluxField& q, const std::vector<double>& porosity,
                                    const std::vector<bool>& dirichlet, const std::vector<double>& g,
                                    double c0) {
  const auto n = mesh.counts();
  const auto h = mesh.sizes();
  const int dim = mesh.dim();
  const Index cells = n[0] * n[1] * n[2];
  DenseAssembly out{Eigen::MatrixXd::Zero(cells, cells), Eigen::MatrixXd::Zero(cells, cells),
                    Eigen::VectorXd::Zero(cells)};
  double vol = 1.0;
  for (int a = 0; a < dim; ++a) vol *= h[static_cast<std::size_t>(a)];
  auto id = [&](std::array<Index, 3> c) { return c[0] + n[0] * (c[1] + n[1] * c[2]); };
  for (Index k = 0; k < n[2]; ++k)
    for (Index j = 0; j < n[1]; ++j)
      for (Index i = 0; i < n[0]; ++i) {
        const std::array<Index, 3> c{i, j, k};
        const Index row = id(c);
        out.ma(row, row) += c0 * porosity[static_cast<std::size_t>(row)] * vol;
        for (int a = 0; a < dim; ++a) {
          const auto ua = static_cast<std::size_t>(a);
          const double mes = vol / h[ua];
          const double half = 0.5 * h[ua];
          const double di = d.values[static_cast<std::size_t>(row)][ua];
          for (int side : {-1, 1}) {
            auto plane = c;
            if (side == 1) plane[ua] += 1;
            const Index f = face_id(n, a, plane);
            const double stored = q.values[static_cast<std::size_t>(f)];
            auto nb = c;
            nb[ua] += side;
            const bool boundary = nb[ua] < 0 || nb[ua] >= n[ua];
            // outward flux: the low-plane boundary face stores its outward value directly
            const double qo = (side == 1 || boundary) ? stored : -stored;
            if (!boundary) {
              const Index col = id(nb);
              const double dj = d.values[static_cast<std::size_t>(col)][ua];
              const double tau = mes * di * dj / (di * half + dj * half);
              out.ma(row, row) += tau;
              out.ma(row, col) -= tau;
              out.diffusion(row, row) += tau;
              out.diffusion(row, col) -= tau;
              if (qo >= 0.0) out.ma(row, row) += qo;
              else out.ma(row, col) += qo;
            } else if (dirichlet[static_cast<std::size_t>(f)]) {
              const double tau = mes * di / half;
              out.ma(row, row) += tau;
              out.diffusion(row, row) += tau;
              out.b(row) += tau * g[static_cast<std::size_t>(f)];
              if (qo >= 0.0) out.ma(row, row) += qo;
              else out.b(row) -= qo * g[static_cast<std::size_t>(f)];
            } else {
              out.ma(row, row) += qo;
            }
          }
        }
      }
  return out;
}

/// Minimal legacy VTK reader for STRUCTURED_POINTS cell data.
struct VtkFile {
  std::array<long, 3> dims{};
  std::array<double, 3> origin{};
  std::array<double, 3> spacing{};
  long cell_count = 0;
  std::vector<std::pair<std::string, std::vector<double>>> scalars;
  bool ok = false;
};

inline VtkFile read_vtk(const std::string& path) {
  VtkFile out;
  std::ifstream in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# vtk DataFile", 0) != 0) return out;
  std::getline(in, line); // title
  std::getline(in, line);
  if (line != "ASCII") return out;
  std::string tok;
  while (in >> tok) {
    if (tok == "DATASET") {
      in >> tok;
      if (tok != "STRUCTURED_POINTS") return out;
    } else if (tok == "DIMENSIONS") {
      in >> out.dims[0] >> out.dims[1] >> out.dims[2];
    } else if (tok == "ORIGIN") {
      in >> out.origin[0] >> out.origin[1] >> out.origin[2];
    } else if (tok == "SPACING") {
      in >> out.spacing[0] >> out.spacing[1] >> out.spacing[2];
    } else if (tok == "CELL_DATA") {
      in >> out.cell_count;
    } else if (tok == "SCALARS") {
      std::string name, type;
      int comps = 1;
      in >> name >> type >> comps;
      std::string lt, table;
      in >> lt >> table;
      if (lt != "LOOKUP_TABLE") return out;
      std::vector<double> vals(static_cast<std::size_t>(out.cell_count));
      for (auto& v : vals) {
        if (!(in >> v)) return out;
      }
      out.scalars.emplace_back(name, std::move(vals));
    } else {
      return out;
    }
  }
  out.ok = true;
  return out;
}

/// Closed-form least-squares slope for log-log data.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace fvetd::testing
