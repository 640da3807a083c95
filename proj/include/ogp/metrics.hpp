#pragma once

#include <cmath>
#include <vector>

#include "ogp/error.hpp"
#include "ogp/grid.hpp"

namespace ogp {

struct MaeResult {
  double mae = 0.0;    // Euclidean index (or meter) distance
  double mae_x = 0.0;  // longitudinal component
  double mae_y = 0.0;  // lateral component
};

// Expected grid-index distance between each predicted occupancy distribution
// and its labeled cell, averaged over examples. Only in-grid mass is scored;
// it is renormalized to 1 per map, so labels must all be in-grid (callers
// exclude out-of-boundary examples upstream).
inline MaeResult weighted_mae(const std::vector<OccupancyMap>& predictions,
                              const std::vector<CellLabel>& labels) {
  if (predictions.size() != labels.size()) {
    throw ArgumentError("weighted_mae: predictions/labels length mismatch");
  }
  if (predictions.empty()) throw ArgumentError("weighted_mae: empty input");

  MaeResult r;
  for (std::size_t n = 0; n < predictions.size(); ++n) {
    if (labels[n].is_oob()) {
      throw ArgumentError("weighted_mae: out-of-boundary label not scoreable");
    }
    const OccupancyMap& map = predictions[n];
    const GridGeometry& g = map.geometry;
    const GridIndex want = labels[n].index();

    double mass = map.in_grid_mass();
    if (mass < 1e-12) {
      throw DegenerateMapError("weighted_mae: map has zero in-grid mass");
    }
    double e = 0.0, ex = 0.0, ey = 0.0;
    std::size_t c = 0;
    for (int ix = 1; ix <= g.m_x; ++ix) {
      for (int iy = 1; iy <= g.m_y; ++iy, ++c) {
        double w = map.p[c];
        if (w == 0.0) continue;
        double dx = ix - want.i_x;
        double dy = iy - want.i_y;
        e += std::sqrt(dx * dx + dy * dy) * w;
        ex += std::abs(dx) * w;
        ey += std::abs(dy) * w;
      }
    }
    r.mae += e / mass;
    r.mae_x += ex / mass;
    r.mae_y += ey / mass;
  }
  double inv = 1.0 / static_cast<double>(predictions.size());
  r.mae *= inv;
  r.mae_x *= inv;
  r.mae_y *= inv;
  return r;
}

// Mean absolute error of point predictions in meters: componentwise absolute
// means plus the mean Euclidean distance.
inline MaeResult regression_mae(const std::vector<Point2>& predicted,
                                const std::vector<Point2>& actual) {
  if (predicted.size() != actual.size()) {
    throw ArgumentError("regression_mae: length mismatch");
  }
  if (predicted.empty()) throw ArgumentError("regression_mae: empty input");

  MaeResult r;
  for (std::size_t n = 0; n < predicted.size(); ++n) {
    double dx = predicted[n].x - actual[n].x;
    double dy = predicted[n].y - actual[n].y;
    r.mae += std::sqrt(dx * dx + dy * dy);
    r.mae_x += std::abs(dx);
    r.mae_y += std::abs(dy);
  }
  double inv = 1.0 / static_cast<double>(predicted.size());
  r.mae *= inv;
  r.mae_x *= inv;
  r.mae_y *= inv;
  return r;
}

}  // namespace ogp
