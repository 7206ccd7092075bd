#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace fvetd {

using Point = std::array<double, 3>;
using Index = std::ptrdiff_t;

inline constexpr Index kBoundary = -1;

/// One face of the grid. The face normal is the unit vector along `axis`
/// pointing out of `first`; for interior faces `first` is the cell on the
/// low side of the face, so the normal points along +axis.
struct Face {
  int axis = 0;
  Index first = 0;
  Index second = kBoundary;
  int normal_sign = 1;  // sign of the normal relative to +axis
  double measure = 0.0; // mes(sigma)
  Point center{};
  double dist_first = 0.0;  // d_{first,sigma}
  double dist_second = 0.0; // d_{second,sigma}; 0 on boundary faces

  bool is_boundary() const { return second == kBoundary; }
  /// d_sigma: center-to-center distance, or center-to-face on the boundary.
  double distance() const { return dist_first + dist_second; }
};

/// Entry of faces_of_cell(): the face, the cell across it and the sign of
/// the face normal as seen from the queried cell (+1 outward).
struct CellFace {
  Index face;
  Index neighbor; // kBoundary for boundary faces
  int sign;
};

/// Axis-aligned rectangular (2D) or parallelepiped (3D) grid.
///
/// Cells are numbered row-major with the first axis fastest:
/// `cell = ix + nx * (iy + ny * iz)`. Faces are grouped by axis (all x-normal
/// faces, then y, then z); inside a group they are numbered the same way over
/// the (n_axis + 1) face planes. Interior faces appear once. The object is
/// immutable after construction.
class StructuredMesh {
public:
  StructuredMesh(int dim, std::array<Index, 3> counts, std::array<double, 3> sizes,
                 Point origin);

  int dim() const { return dim_; }
  Index num_cells() const { return num_cells_; }
  Index num_faces() const { return static_cast<Index>(faces_.size()); }
  const std::array<Index, 3>& counts() const { return counts_; }
  const std::array<double, 3>& sizes() const { return sizes_; }
  const Point& origin() const { return origin_; }
  /// Domain extent along each axis (1.0 on unused axes).
  Point extent() const;

  double cell_measure() const { return cell_measure_; }
  double cell_measure(Index) const { return cell_measure_; }
  Point cell_center(Index cell) const;
  const Face& face(Index f) const { return faces_[static_cast<std::size_t>(f)]; }
  std::span<const Face> faces() const { return faces_; }

  /// Largest cell diameter.
  double h() const;

  Index cell_index(Index ix, Index iy, Index iz = 0) const {
    return ix + counts_[0] * (iy + counts_[1] * iz);
  }
  std::array<Index, 3> cell_coords(Index cell) const;

  /// Index of the face on the `high` (or low) side of `cell` along `axis`.
  Index face_index(Index cell, int axis, bool high) const;

  /// The 2*dim faces of a cell ordered (axis 0 low, axis 0 high, axis 1 low, ...).
  std::vector<CellFace> faces_of_cell(Index cell) const;

private:
  int dim_;
  std::array<Index, 3> counts_;
  std::array<double, 3> sizes_;
  Point origin_;
  Index num_cells_;
  double cell_measure_;
  std::array<Index, 3> face_offset_{};
  std::vector<Face> faces_;
};

StructuredMesh build_grid(int dim, std::span<const Index> counts, std::span<const double> sizes,
                          std::span<const double> origin = {});

struct RegularityThresholds {
  double zeta1_min = 0.0;
  double zeta2_max = std::numeric_limits<double>::infinity();
};

struct RegularityBounds {
  double lo = 0.0;
  double hi = 0.0;
};

/// Tightest constants with zeta1 h^d <= mes(i) <= zeta2 h^d,
/// zeta1 h^(d-1) <= mes(sigma) <= zeta2 h^(d-1) and zeta1 h <= d_sigma <= zeta2 h.
struct MeshRegularityReport {
  double h = 0.0;
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  RegularityBounds cells;
  RegularityBounds faces;
  RegularityBounds distances;
  bool pass = false;
};

MeshRegularityReport check_regularity(const StructuredMesh& mesh,
                                      const RegularityThresholds& thresholds = {});

} // namespace fvetd
