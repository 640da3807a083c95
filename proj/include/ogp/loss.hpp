#pragma once

#include <cmath>

#include "ogp/grid.hpp"
#include "ogp/network.hpp"

namespace ogp {

inline constexpr double kLogClamp = 1e-12;

// Omega(w) = 1/2 sum ||W||^2 over fully-connected and head weights only.
inline double l2_penalty(const NetworkParams& p) {
  double s = 0.0;
  for (const ConstTensorRef& t : tensor_refs(p)) {
    if (!is_regularized(t.kind)) continue;
    for (double v : t.m->a) s += v * v;
  }
  return 0.5 * s;
}

// Negative log-likelihood of a one-hot label under the softmax output,
// summed as a binary cross-entropy over every class, plus lambda * Omega(w).
// The categorical form keeps only the -log z_label term.
inline double classification_loss(const OccupancyMap& output, const CellLabel& label,
                                  const NetworkParams& params, double lambda,
                                  LossForm form = LossForm::PaperBce) {
  const int classes = output.geometry.total_classes();
  const int want = label.linear_class(output.geometry);
  double data = 0.0;
  for (int m = 0; m < classes; ++m) {
    double z = (m < output.geometry.total_cells())
                   ? output.p[static_cast<std::size_t>(m)]
                   : output.p_oob;
    if (z < 0.0 || z > 1.0) {
      throw NumericError("classification_loss: probability outside [0,1]");
    }
    if (m == want) {
      data -= std::log(std::max(z, kLogClamp));
    } else if (form == LossForm::PaperBce) {
      data -= std::log(std::max(1.0 - z, kLogClamp));
    }
  }
  return data + lambda * l2_penalty(params);
}

// 1/2 squared error per coordinate plus lambda * Omega(w).
inline double regression_loss(Point2 predicted, Point2 target,
                              const NetworkParams& params, double lambda) {
  if (!std::isfinite(predicted.x) || !std::isfinite(predicted.y) ||
      !std::isfinite(target.x) || !std::isfinite(target.y)) {
    throw NumericError("regression_loss: non-finite input");
  }
  double dx = target.x - predicted.x;
  double dy = target.y - predicted.y;
  return 0.5 * (dx * dx + dy * dy) + lambda * l2_penalty(params);
}

}  // namespace ogp
