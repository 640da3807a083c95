#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "ogp/grid.hpp"

namespace ogp {

inline std::string format_double(double v, const char* fmt = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

// Plain-text PGM (P2): m_x columns by m_y rows, probabilities scaled to
// 0-255, first row is i_y = 1.
inline void write_map_pgm(std::ostream& os, const OccupancyMap& map) {
  const GridGeometry& g = map.geometry;
  os << "P2\n" << g.m_x << " " << g.m_y << "\n255\n";
  for (int iy = 1; iy <= g.m_y; ++iy) {
    for (int ix = 1; ix <= g.m_x; ++ix) {
      int v = static_cast<int>(std::lround(map.at(GridIndex{ix, iy}) * 255.0));
      os << std::clamp(v, 0, 255);
      os << (ix == g.m_x ? '\n' : ' ');
    }
  }
}

// CSV with one row per cell, in linear class order.
inline void write_map_csv(std::ostream& os, const OccupancyMap& map) {
  const GridGeometry& g = map.geometry;
  os << "i_x,i_y,p\n";
  for (int ix = 1; ix <= g.m_x; ++ix) {
    for (int iy = 1; iy <= g.m_y; ++iy) {
      os << ix << ',' << iy << ',' << format_double(map.at(GridIndex{ix, iy}))
         << '\n';
    }
  }
}

struct TopCell {
  GridIndex index;
  double p = 0.0;
  Point2 center;
};

// The k most probable cells, ties broken by linear class order.
inline std::vector<TopCell> top_cells(const OccupancyMap& map, int k) {
  const GridGeometry& g = map.geometry;
  std::vector<int> order(map.p.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return map.p[a] > map.p[b]; });
  std::vector<TopCell> out;
  int n = std::min<int>(k, static_cast<int>(order.size()));
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    GridIndex idx{order[i] / g.m_y + 1, order[i] % g.m_y + 1};
    out.push_back({idx, map.p[static_cast<std::size_t>(order[i])], cell_center(g, idx)});
  }
  return out;
}

inline void write_top_cells(std::ostream& os, const OccupancyMap& map, int k) {
  os << "rank,i_x,i_y,p,x_center,y_center\n";
  int rank = 1;
  for (const TopCell& c : top_cells(map, k)) {
    os << rank++ << ',' << c.index.i_x << ',' << c.index.i_y << ','
       << format_double(c.p) << ',' << format_double(c.center.x) << ','
       << format_double(c.center.y) << '\n';
  }
}

}  // namespace ogp
