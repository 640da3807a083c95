#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ogp/error.hpp"

namespace ogp {

using Vec = std::vector<double>;

// Dense row-major matrix of doubles. Small and allocation-backed; all the
// heavy math in this library is matrix-vector products over these.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

  const double* row(int r) const { return a.data() + static_cast<std::size_t>(r) * cols; }
  double* row(int r) { return a.data() + static_cast<std::size_t>(r) * cols; }

  std::size_t size() const { return a.size(); }
  bool operator==(const Matrix&) const = default;
};

inline void check_shape(bool ok, const char* what) {
  if (!ok) throw ShapeError(std::string("shape mismatch in ") + what);
}

// y = W x
inline void matvec(const Matrix& W, const Vec& x, Vec& y) {
  check_shape(static_cast<int>(x.size()) == W.cols, "matvec");
  y.assign(static_cast<std::size_t>(W.rows), 0.0);
  for (int r = 0; r < W.rows; ++r) {
    const double* wr = W.row(r);
    double s = 0.0;
    for (int c = 0; c < W.cols; ++c) s += wr[c] * x[static_cast<std::size_t>(c)];
    y[static_cast<std::size_t>(r)] = s;
  }
}

// y += W x
inline void matvec_add(const Matrix& W, const Vec& x, Vec& y) {
  check_shape(static_cast<int>(x.size()) == W.cols, "matvec_add");
  check_shape(static_cast<int>(y.size()) == W.rows, "matvec_add");
  for (int r = 0; r < W.rows; ++r) {
    const double* wr = W.row(r);
    double s = 0.0;
    for (int c = 0; c < W.cols; ++c) s += wr[c] * x[static_cast<std::size_t>(c)];
    y[static_cast<std::size_t>(r)] += s;
  }
}

// out += W^T d
inline void matvec_transpose_add(const Matrix& W, const Vec& d, Vec& out) {
  check_shape(static_cast<int>(d.size()) == W.rows, "matvec_transpose_add");
  check_shape(static_cast<int>(out.size()) == W.cols, "matvec_transpose_add");
  for (int r = 0; r < W.rows; ++r) {
    const double* wr = W.row(r);
    double dr = d[static_cast<std::size_t>(r)];
    if (dr == 0.0) continue;
    for (int c = 0; c < W.cols; ++c) out[static_cast<std::size_t>(c)] += wr[c] * dr;
  }
}

// G += d x^T
inline void outer_add(Matrix& G, const Vec& d, const Vec& x) {
  check_shape(static_cast<int>(d.size()) == G.rows, "outer_add");
  check_shape(static_cast<int>(x.size()) == G.cols, "outer_add");
  for (int r = 0; r < G.rows; ++r) {
    double* gr = G.row(r);
    double dr = d[static_cast<std::size_t>(r)];
    if (dr == 0.0) continue;
    for (int c = 0; c < G.cols; ++c) gr[c] += dr * x[static_cast<std::size_t>(c)];
  }
}

inline void add_to(Vec& y, const Vec& x) {
  check_shape(x.size() == y.size(), "add_to");
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += x[i];
}

inline void ensure_finite(const Vec& v, const std::string& where) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw NumericError("non-finite activation in " + where);
    }
  }
}

}  // namespace ogp
