#pragma once

#include <cmath>

#include "ogp/matrix.hpp"

namespace ogp {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// One LSTM layer: four gates, each with an input transform, a recurrent
// transform and a bias.
struct LstmLayerParams {
  Matrix W_xi, W_hi;
  Matrix W_xf, W_hf;
  Matrix W_xo, W_ho;
  Matrix W_xc, W_hc;
  Vec b_i, b_f, b_o, b_c;

  int hidden_size() const { return static_cast<int>(b_i.size()); }
  int input_size() const { return W_xi.cols; }
};

struct LstmLayerState {
  Vec c;  // cell state
  Vec h;  // hidden state

  static LstmLayerState zero(int hidden) {
    return {Vec(static_cast<std::size_t>(hidden), 0.0),
            Vec(static_cast<std::size_t>(hidden), 0.0)};
  }
};

// Everything the backward pass needs about one step.
struct LstmStepCache {
  Vec x, h_prev, c_prev;
  Vec i, f, o, g;  // gate activations
  Vec c, tanh_c, h;
};

// Single recurrence step:
//   i = sigma(W_xi x + W_hi h + b_i)      f = sigma(W_xf x + W_hf h + b_f)
//   o = sigma(W_xo x + W_ho h + b_o)      g = tanh (W_xc x + W_hc h + b_c)
//   c' = f*c + i*g                        h' = o * tanh(c')
inline LstmLayerState lstm_step(const LstmLayerParams& p, const LstmLayerState& s,
                                const Vec& input, LstmStepCache* cache = nullptr) {
  const int H = p.hidden_size();
  check_shape(static_cast<int>(input.size()) == p.input_size(), "lstm_step input");
  check_shape(static_cast<int>(s.h.size()) == H && static_cast<int>(s.c.size()) == H,
              "lstm_step state");

  Vec ai = p.b_i, af = p.b_f, ao = p.b_o, ag = p.b_c;
  matvec_add(p.W_xi, input, ai);
  matvec_add(p.W_hi, s.h, ai);
  matvec_add(p.W_xf, input, af);
  matvec_add(p.W_hf, s.h, af);
  matvec_add(p.W_xo, input, ao);
  matvec_add(p.W_ho, s.h, ao);
  matvec_add(p.W_xc, input, ag);
  matvec_add(p.W_hc, s.h, ag);

  LstmLayerState next = LstmLayerState::zero(H);
  Vec tanh_c(static_cast<std::size_t>(H));
  for (int k = 0; k < H; ++k) {
    std::size_t u = static_cast<std::size_t>(k);
    double i = sigmoid(ai[u]);
    double f = sigmoid(af[u]);
    double o = sigmoid(ao[u]);
    double g = std::tanh(ag[u]);
    double c = f * s.c[u] + i * g;
    double tc = std::tanh(c);
    next.c[u] = c;
    next.h[u] = o * tc;
    tanh_c[u] = tc;
    ai[u] = i;  // reuse the buffers to hold activations
    af[u] = f;
    ao[u] = o;
    ag[u] = g;
  }

  if (cache) {
    cache->x = input;
    cache->h_prev = s.h;
    cache->c_prev = s.c;
    cache->i = std::move(ai);
    cache->f = std::move(af);
    cache->o = std::move(ao);
    cache->g = std::move(ag);
    cache->c = next.c;
    cache->tanh_c = std::move(tanh_c);
    cache->h = next.h;
  }
  return next;
}

}  // namespace ogp
