#pragma once

#include <cmath>
#include <vector>

#include "ogp/loss.hpp"
#include "ogp/network.hpp"

namespace ogp {

namespace detail {

// dL/dout -> dL/din through one dense layer, accumulating weight gradients.
inline void dense_backward(const DenseLayer& d, const DenseCache& cache, Vec& dout,
                           DenseLayer& grad, Vec& din) {
  if (d.act == Activation::Tanh) {
    for (std::size_t k = 0; k < dout.size(); ++k) {
      dout[k] *= 1.0 - cache.out[k] * cache.out[k];
    }
  }
  outer_add(grad.W, dout, cache.in);
  add_to(grad.b, dout);
  din.assign(cache.in.size(), 0.0);
  matvec_transpose_add(d.W, dout, din);
}

// Backward through one LSTM layer over the whole sequence. dh_ext[t] is the
// gradient arriving at h_t from above (may be empty meaning zero); dx[t]
// receives the gradient with respect to the layer input at step t.
inline void lstm_backward(const LstmLayerParams& p,
                          const std::vector<StepTape>& steps, int layer,
                          const std::vector<Vec>& dh_ext, LstmLayerParams& grad,
                          std::vector<Vec>& dx) {
  const int H = p.hidden_size();
  const std::size_t T = steps.size();
  dx.assign(T, Vec());

  Vec dh_rec(static_cast<std::size_t>(H), 0.0);
  Vec dc_rec(static_cast<std::size_t>(H), 0.0);
  Vec dh(static_cast<std::size_t>(H));
  Vec dc(static_cast<std::size_t>(H));
  Vec da_i(static_cast<std::size_t>(H)), da_f(static_cast<std::size_t>(H));
  Vec da_o(static_cast<std::size_t>(H)), da_g(static_cast<std::size_t>(H));

  for (std::size_t tt = T; tt-- > 0;) {
    const LstmStepCache& s = steps[tt].lstm[static_cast<std::size_t>(layer)];
    for (int k = 0; k < H; ++k) {
      std::size_t u = static_cast<std::size_t>(k);
      dh[u] = dh_rec[u] + (dh_ext[tt].empty() ? 0.0 : dh_ext[tt][u]);
      dc[u] = dc_rec[u] + dh[u] * s.o[u] * (1.0 - s.tanh_c[u] * s.tanh_c[u]);
      da_o[u] = dh[u] * s.tanh_c[u] * s.o[u] * (1.0 - s.o[u]);
      da_f[u] = dc[u] * s.c_prev[u] * s.f[u] * (1.0 - s.f[u]);
      da_i[u] = dc[u] * s.g[u] * s.i[u] * (1.0 - s.i[u]);
      da_g[u] = dc[u] * s.i[u] * (1.0 - s.g[u] * s.g[u]);
      dc_rec[u] = dc[u] * s.f[u];
    }

    outer_add(grad.W_xi, da_i, s.x);
    outer_add(grad.W_hi, da_i, s.h_prev);
    outer_add(grad.W_xf, da_f, s.x);
    outer_add(grad.W_hf, da_f, s.h_prev);
    outer_add(grad.W_xo, da_o, s.x);
    outer_add(grad.W_ho, da_o, s.h_prev);
    outer_add(grad.W_xc, da_g, s.x);
    outer_add(grad.W_hc, da_g, s.h_prev);
    add_to(grad.b_i, da_i);
    add_to(grad.b_f, da_f);
    add_to(grad.b_o, da_o);
    add_to(grad.b_c, da_g);

    dx[tt].assign(s.x.size(), 0.0);
    matvec_transpose_add(p.W_xi, da_i, dx[tt]);
    matvec_transpose_add(p.W_xf, da_f, dx[tt]);
    matvec_transpose_add(p.W_xo, da_o, dx[tt]);
    matvec_transpose_add(p.W_xc, da_g, dx[tt]);

    dh_rec.assign(static_cast<std::size_t>(H), 0.0);
    matvec_transpose_add(p.W_hi, da_i, dh_rec);
    matvec_transpose_add(p.W_hf, da_f, dh_rec);
    matvec_transpose_add(p.W_ho, da_o, dh_rec);
    matvec_transpose_add(p.W_hc, da_g, dh_rec);
  }
}

inline void check_tape(const NetworkParams& p, const Tape& tape) {
  if (tape.steps.empty()) throw StateError("backward: empty tape");
  if (tape.steps.front().fc.size() != p.input_fc.size()) {
    throw StateError("backward: tape input stack does not match params");
  }
  for (int l = 0; l < kLstmLayers; ++l) {
    if (static_cast<int>(tape.steps.front().lstm[static_cast<std::size_t>(l)].h.size()) !=
        p.lstm[static_cast<std::size_t>(l)].hidden_size()) {
      throw StateError("backward: tape hidden size does not match params");
    }
  }
  if (static_cast<int>(tape.head_out.size()) != p.head.out_size()) {
    throw StateError("backward: tape head size does not match params");
  }
}

// Core reverse pass given dL/d(head output); accumulates into grads.
inline void backprop_from_head(const NetworkParams& p, const Tape& tape, Vec dhead,
                               NetworkParams& grads) {
  DenseCache head_cache{tape.head_in, tape.head_out};
  Vec d;
  dense_backward(p.head, head_cache, dhead, grads.head, d);

  for (std::size_t i = p.output_fc.size(); i-- > 0;) {
    Vec din;
    dense_backward(p.output_fc[i], tape.output_fc[i], d, grads.output_fc[i], din);
    d = std::move(din);
  }

  const std::size_t T = tape.steps.size();
  std::vector<Vec> dh_ext(T);
  dh_ext[T - 1] = std::move(d);  // loss touches only the final hidden state

  std::vector<Vec> dx_upper;
  lstm_backward(p.lstm[1], tape.steps, 1, dh_ext, grads.lstm[1], dx_upper);
  std::vector<Vec> dx_lower;
  lstm_backward(p.lstm[0], tape.steps, 0, dx_upper, grads.lstm[0], dx_lower);

  for (std::size_t t = 0; t < T; ++t) {
    Vec dout = std::move(dx_lower[t]);
    for (std::size_t i = p.input_fc.size(); i-- > 0;) {
      Vec din;
      dense_backward(p.input_fc[i], tape.steps[t].fc[i], dout, grads.input_fc[i], din);
      dout = std::move(din);
    }
  }
}

}  // namespace detail

// Gradient of the classification data term with respect to the logits.
// g_m = dL/dz_m of the chosen loss form (respecting the log clamp), pushed
// through the softmax Jacobian: da_k = z_k (g_k - sum_m g_m z_m).
inline Vec classification_logit_gradient(const Vec& probs, int label_class,
                                         LossForm form) {
  const std::size_t n = probs.size();
  Vec g(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    double z = probs[m];
    if (static_cast<int>(m) == label_class) {
      g[m] = (z > kLogClamp) ? -1.0 / z : 0.0;
    } else if (form == LossForm::PaperBce) {
      g[m] = (1.0 - z > kLogClamp) ? 1.0 / (1.0 - z) : 0.0;
    }
  }
  double dot = 0.0;
  for (std::size_t m = 0; m < n; ++m) dot += g[m] * probs[m];
  Vec da(n);
  for (std::size_t k = 0; k < n; ++k) da[k] = probs[k] * (g[k] - dot);
  return da;
}

// Adds lambda * W for every regularized tensor.
inline void add_l2_gradient(const NetworkParams& p, double lambda, NetworkParams& grads) {
  if (lambda == 0.0) return;
  auto src = tensor_refs(p);
  auto dst = tensor_refs(grads);
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (!is_regularized(src[i].kind) || !src[i].m) continue;
    for (std::size_t k = 0; k < src[i].m->a.size(); ++k) {
      dst[i].m->a[k] += lambda * src[i].m->a[k];
    }
  }
}

// Data-term gradients only, accumulated into grads (used by the batch loop).
inline void accumulate_backward(const NetworkParams& p, const Tape& tape,
                                const CellLabel& label, NetworkParams& grads,
                                LossForm form = LossForm::PaperBce) {
  detail::check_tape(p, tape);
  if (p.head_kind != HeadKind::Grid) {
    throw StateError("backward: classification target on a regression head");
  }
  Vec dlogits = classification_logit_gradient(
      tape.probs, label.linear_class(p.geometry), form);
  detail::backprop_from_head(p, tape, std::move(dlogits), grads);
}

inline void accumulate_backward(const NetworkParams& p, const Tape& tape,
                                Point2 target, NetworkParams& grads) {
  detail::check_tape(p, tape);
  if (p.head_kind != HeadKind::Regression) {
    throw StateError("backward: point target on a grid head");
  }
  Point2 z{tape.last_pos.x + tape.head_out[0], tape.last_pos.y + tape.head_out[1]};
  Vec dhead = {z.x - target.x, z.y - target.y};
  detail::backprop_from_head(p, tape, std::move(dhead), grads);
}

// Full analytic gradient of the per-example loss, including the L2 term.
inline NetworkParams backward(const NetworkParams& p, const Tape& tape,
                              const CellLabel& label, double lambda,
                              LossForm form = LossForm::PaperBce) {
  NetworkParams grads = zeros_like(p);
  accumulate_backward(p, tape, label, grads, form);
  add_l2_gradient(p, lambda, grads);
  return grads;
}

inline NetworkParams backward(const NetworkParams& p, const Tape& tape, Point2 target,
                              double lambda) {
  NetworkParams grads = zeros_like(p);
  accumulate_backward(p, tape, target, grads);
  add_l2_gradient(p, lambda, grads);
  return grads;
}

}  // namespace ogp
