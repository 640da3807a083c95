#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "ogp/error.hpp"

namespace ogp {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

// Ego-relative rectangular grid, aligned with the ego heading. Cells are
// half-open boxes [low, high) indexed 1-based; the linearized class space
// appends one out-of-boundary class after the m_x*m_y cells.
struct GridGeometry {
  int m_x = 36;
  int m_y = 21;
  double cell_length = 5.0;   // longitudinal cell extent (m)
  double cell_width = 0.875;  // lateral cell extent (m)
  double x_min = 0.0;
  double y_min = -9.1875;

  int total_cells() const { return m_x * m_y; }
  int total_classes() const { return m_x * m_y + 1; }
  double x_max() const { return x_min + m_x * cell_length; }
  double y_max() const { return y_min + m_y * cell_width; }

  void validate() const {
    if (m_x < 1 || m_y < 1) {
      throw ArgumentError("grid geometry needs at least one cell per axis");
    }
    if (!(cell_length > 0.0) || !(cell_width > 0.0)) {
      throw ArgumentError("grid cell extents must be positive");
    }
  }

  bool operator==(const GridGeometry&) const = default;
};

// 1-based cell index (longitudinal, lateral).
struct GridIndex {
  int i_x = 1;
  int i_y = 1;
  bool operator==(const GridIndex&) const = default;
};

// A grid cell or the out-of-boundary class.
class CellLabel {
 public:
  CellLabel() = default;

  static CellLabel in_grid(GridIndex idx) {
    CellLabel l;
    l.oob_ = false;
    l.idx_ = idx;
    return l;
  }
  static CellLabel in_grid(int i_x, int i_y) { return in_grid(GridIndex{i_x, i_y}); }
  static CellLabel out_of_boundary() {
    CellLabel l;
    l.oob_ = true;
    return l;
  }

  bool is_oob() const { return oob_; }

  GridIndex index() const {
    if (oob_) throw IndexError("out-of-boundary label has no grid index");
    return idx_;
  }

  // 0-based class id in [0, m_x*m_y]; out-of-boundary maps to m_x*m_y.
  int linear_class(const GridGeometry& g) const {
    if (oob_) return g.total_cells();
    return (idx_.i_x - 1) * g.m_y + (idx_.i_y - 1);
  }

  static CellLabel from_linear_class(int cls, const GridGeometry& g) {
    if (cls < 0 || cls > g.total_cells()) {
      throw IndexError("linear class out of range");
    }
    if (cls == g.total_cells()) return out_of_boundary();
    return in_grid(cls / g.m_y + 1, cls % g.m_y + 1);
  }

  bool operator==(const CellLabel&) const = default;

 private:
  bool oob_ = true;
  GridIndex idx_{};
};

// Probability field over the grid plus the out-of-boundary class. A softmax
// head produces a distribution (sums to 1); a fused map holds independent
// per-cell occupancy probabilities and need not sum to 1.
struct OccupancyMap {
  GridGeometry geometry;
  std::vector<double> p;  // total_cells() entries, CellLabel::linear_class order
  double p_oob = 0.0;

  OccupancyMap() = default;
  explicit OccupancyMap(const GridGeometry& g)
      : geometry(g), p(static_cast<std::size_t>(g.total_cells()), 0.0) {}

  double& at(GridIndex idx) {
    return p[static_cast<std::size_t>(CellLabel::in_grid(idx).linear_class(geometry))];
  }
  double at(GridIndex idx) const {
    return p[static_cast<std::size_t>(CellLabel::in_grid(idx).linear_class(geometry))];
  }

  double in_grid_mass() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
  }
};

// Maps an ego-relative coordinate to its cell, or to out-of-boundary when it
// falls outside the grid. Points on an upper cell edge belong to the higher
// cell; the grid's outer upper edge is out-of-boundary.
inline CellLabel coord_to_label(const GridGeometry& g, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw InvalidCoordinateError("coord_to_label: non-finite coordinate");
  }
  double bx = std::floor((x - g.x_min) / g.cell_length);
  double by = std::floor((y - g.y_min) / g.cell_width);
  if (bx < 0.0 || bx >= g.m_x || by < 0.0 || by >= g.m_y) {
    return CellLabel::out_of_boundary();
  }
  return CellLabel::in_grid(static_cast<int>(bx) + 1, static_cast<int>(by) + 1);
}

// Midpoint of the cell rectangle; inverse of coord_to_label on cell centers.
inline Point2 cell_center(const GridGeometry& g, GridIndex idx) {
  if (idx.i_x < 1 || idx.i_x > g.m_x || idx.i_y < 1 || idx.i_y > g.m_y) {
    throw IndexError("cell_center: index outside geometry");
  }
  return {g.x_min + (idx.i_x - 0.5) * g.cell_length,
          g.y_min + (idx.i_y - 0.5) * g.cell_width};
}

// Combines per-vehicle maps into the probability that any vehicle occupies a
// cell: P = 1 - prod_i (1 - P_i). Factors are multiplied in sorted order so
// the result is bit-identical under any permutation of the inputs.
inline OccupancyMap fuse_maps(const std::vector<OccupancyMap>& maps) {
  if (maps.empty()) throw ArgumentError("fuse_maps: empty map list");
  for (const OccupancyMap& m : maps) {
    if (!(m.geometry == maps.front().geometry)) {
      throw FusionError("fuse_maps: geometry mismatch between maps");
    }
  }
  if (maps.size() == 1) return maps.front();

  OccupancyMap out(maps.front().geometry);
  std::vector<double> factors(maps.size());
  auto fuse_cell = [&](auto&& get) {
    for (std::size_t i = 0; i < maps.size(); ++i) factors[i] = 1.0 - get(maps[i]);
    std::sort(factors.begin(), factors.end());
    double prod = 1.0;
    for (double f : factors) prod *= f;
    return 1.0 - prod;
  };

  for (std::size_t c = 0; c < out.p.size(); ++c) {
    out.p[c] = fuse_cell([c](const OccupancyMap& m) { return m.p[c]; });
  }
  out.p_oob = fuse_cell([](const OccupancyMap& m) { return m.p_oob; });
  return out;
}

}  // namespace ogp
