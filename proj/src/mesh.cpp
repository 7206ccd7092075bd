#include "fvetd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fvetd/error.hpp"

namespace fvetd {

StructuredMesh::StructuredMesh(int dim, std::array<Index, 3> counts, std::array<double, 3> sizes,
                               Point origin)
    : dim_(dim), counts_(counts), sizes_(sizes), origin_(origin) {
  if (dim != 2 && dim != 3) {
    throw InvalidArgument("mesh dimension must be 2 or 3, got " + std::to_string(dim));
  }
  for (int a = 0; a < dim; ++a) {
    if (counts_[a] < 1) {
      throw InvalidArgument("cell count along axis " + std::to_string(a) + " must be >= 1");
    }
    if (!(sizes_[a] > 0.0) || !std::isfinite(sizes_[a])) {
      throw InvalidArgument("cell size along axis " + std::to_string(a) + " must be > 0");
    }
  }
  for (int a = dim; a < 3; ++a) {
    counts_[a] = 1;
    sizes_[a] = 1.0;
    origin_[a] = 0.0;
  }

  num_cells_ = counts_[0] * counts_[1] * counts_[2];
  cell_measure_ = 1.0;
  for (int a = 0; a < dim_; ++a) cell_measure_ *= sizes_[a];

  Index total = 0;
  for (int a = 0; a < dim_; ++a) {
    face_offset_[a] = total;
    auto planes = counts_;
    planes[a] += 1;
    total += planes[0] * planes[1] * planes[2];
  }
  faces_.reserve(static_cast<std::size_t>(total));

  for (int a = 0; a < dim_; ++a) {
    auto planes = counts_;
    planes[a] += 1;
    double face_measure = 1.0;
    for (int b = 0; b < dim_; ++b) {
      if (b != a) face_measure *= sizes_[b];
    }
    for (Index k = 0; k < planes[2]; ++k) {
      for (Index j = 0; j < planes[1]; ++j) {
        for (Index i = 0; i < planes[0]; ++i) {
          std::array<Index, 3> ijk{i, j, k};
          const Index plane = ijk[a];
          Face f;
          f.axis = a;
          f.measure = face_measure;
          for (int b = 0; b < 3; ++b) {
            f.center[b] = (b == a) ? origin_[b] + sizes_[b] * static_cast<double>(ijk[b])
                                   : origin_[b] + sizes_[b] * (static_cast<double>(ijk[b]) + 0.5);
          }
          if (dim_ == 2) f.center[2] = 0.0;
          const double half = 0.5 * sizes_[a];
          auto lo = ijk;
          lo[a] = plane - 1;
          if (plane == 0) {
            f.first = cell_index(ijk[0], ijk[1], ijk[2]);
            f.second = kBoundary;
            f.normal_sign = -1;
            f.dist_first = half;
          } else if (plane == counts_[a]) {
            f.first = cell_index(lo[0], lo[1], lo[2]);
            f.second = kBoundary;
            f.normal_sign = 1;
            f.dist_first = half;
          } else {
            f.first = cell_index(lo[0], lo[1], lo[2]);
            f.second = cell_index(ijk[0], ijk[1], ijk[2]);
            f.normal_sign = 1;
            f.dist_first = half;
            f.dist_second = half;
          }
          faces_.push_back(f);
        }
      }
    }
  }
}

Point StructuredMesh::extent() const {
  Point e{1.0, 1.0, 1.0};
  for (int a = 0; a < dim_; ++a) e[a] = sizes_[a] * static_cast<double>(counts_[a]);
  return e;
}

std::array<Index, 3> StructuredMesh::cell_coords(Index cell) const {
  const Index ix = cell % counts_[0];
  const Index rest = cell / counts_[0];
  return {ix, rest % counts_[1], rest / counts_[1]};
}

Point StructuredMesh::cell_center(Index cell) const {
  const auto c = cell_coords(cell);
  Point x{};
  for (int a = 0; a < dim_; ++a) {
    x[a] = origin_[a] + sizes_[a] * (static_cast<double>(c[a]) + 0.5);
  }
  return x;
}

double StructuredMesh::h() const {
  double s = 0.0;
  for (int a = 0; a < dim_; ++a) s += sizes_[a] * sizes_[a];
  return std::sqrt(s);
}

Index StructuredMesh::face_index(Index cell, int axis, bool high) const {
  auto c = cell_coords(cell);
  if (high) c[axis] += 1;
  auto planes = counts_;
  planes[axis] += 1;
  return face_offset_[axis] + c[0] + planes[0] * (c[1] + planes[1] * c[2]);
}

std::vector<CellFace> StructuredMesh::faces_of_cell(Index cell) const {
  if (cell < 0 || cell >= num_cells_) {
    throw InvalidArgument("cell index " + std::to_string(cell) + " out of range [0, " +
                          std::to_string(num_cells_) + ")");
  }
  std::vector<CellFace> out;
  out.reserve(static_cast<std::size_t>(2 * dim_));
  for (int a = 0; a < dim_; ++a) {
    for (bool high : {false, true}) {
      const Index fi = face_index(cell, a, high);
      const Face& f = faces_[static_cast<std::size_t>(fi)];
      if (f.first == cell) {
        out.push_back({fi, f.second, 1});
      } else {
        out.push_back({fi, f.first, -1});
      }
    }
  }
  return out;
}

StructuredMesh build_grid(int dim, std::span<const Index> counts, std::span<const double> sizes,
                          std::span<const double> origin) {
  if (dim != 2 && dim != 3) {
    throw InvalidArgument("mesh dimension must be 2 or 3, got " + std::to_string(dim));
  }
  const auto d = static_cast<std::size_t>(dim);
  if (counts.size() != d || sizes.size() != d || (!origin.empty() && origin.size() != d)) {
    throw InvalidArgument("mesh counts/sizes/origin must have one entry per axis");
  }
  std::array<Index, 3> c{1, 1, 1};
  std::array<double, 3> s{1.0, 1.0, 1.0};
  Point o{0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < d; ++a) {
    c[a] = counts[a];
    s[a] = sizes[a];
    if (!origin.empty()) o[a] = origin[a];
  }
  return StructuredMesh(dim, c, s, o);
}

MeshRegularityReport check_regularity(const StructuredMesh& mesh,
                                      const RegularityThresholds& thresholds) {
  MeshRegularityReport r;
  r.h = mesh.h();
  const int d = mesh.dim();
  const double hd = std::pow(r.h, d);
  const double hd1 = std::pow(r.h, d - 1);

  auto widen = [](RegularityBounds& b, double v, bool first) {
    if (first) {
      b.lo = b.hi = v;
    } else {
      b.lo = std::min(b.lo, v);
      b.hi = std::max(b.hi, v);
    }
  };
  for (Index i = 0; i < mesh.num_cells(); ++i) widen(r.cells, mesh.cell_measure(i) / hd, i == 0);
  bool first = true;
  for (const Face& f : mesh.faces()) {
    widen(r.faces, f.measure / hd1, first);
    widen(r.distances, f.distance() / r.h, first);
    first = false;
  }
  r.zeta1 = std::min({r.cells.lo, r.faces.lo, r.distances.lo});
  r.zeta2 = std::max({r.cells.hi, r.faces.hi, r.distances.hi});
  r.pass = r.zeta1 >= thresholds.zeta1_min && r.zeta2 <= thresholds.zeta2_max;
  return r;
}

} // namespace fvetd
