#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ogp/feature.hpp"
#include "ogp/grid.hpp"
#include "ogp/lstm.hpp"
#include "ogp/matrix.hpp"
#include "ogp/rng.hpp"

namespace ogp {

enum class Activation { Tanh, Identity };

struct DenseLayer {
  Matrix W;
  Vec b;
  Activation act = Activation::Tanh;

  int in_size() const { return W.cols; }
  int out_size() const { return W.rows; }
};

enum class HeadKind { Grid, Regression };

// The paper-form loss sums a binary cross-entropy over every softmax output;
// the categorical form is the usual single -log p(label).
enum class LossForm { PaperBce, CategoricalCe };

inline const char* to_string(HeadKind h) {
  return h == HeadKind::Grid ? "grid" : "regression";
}
inline const char* to_string(LossForm f) {
  return f == LossForm::PaperBce ? "paper_bce" : "categorical_ce";
}

// Architecture knobs; sizes are hidden-layer widths in order.
struct NetworkConfig {
  std::vector<int> input_fc = {64};
  int lstm_size = 128;
  std::vector<int> output_fc = {256};
  HeadKind head = HeadKind::Grid;
};

constexpr int kLstmLayers = 2;

// Full parameter set for one prediction horizon. Also carries everything a
// checkpoint needs to make inference reproducible: feature normalization,
// grid geometry, horizon and window length.
struct NetworkParams {
  std::vector<DenseLayer> input_fc;
  std::array<LstmLayerParams, kLstmLayers> lstm;
  std::vector<DenseLayer> output_fc;
  DenseLayer head;  // Identity activation
  HeadKind head_kind = HeadKind::Grid;

  Vec feat_offset = Vec(FeatureVector::kCount, 0.0);
  Vec feat_scale = Vec(FeatureVector::kCount, 1.0);  // u = (f - offset) / scale

  GridGeometry geometry;
  double delta = 1.0;  // seconds ahead this parameter set predicts
  int window = 20;     // maximum (and training) sequence length
  LossForm loss_form = LossForm::PaperBce;
  std::string init_recipe;

  int feature_count() const { return FeatureVector::kCount; }
  int head_outputs() const { return head.out_size(); }
};

enum class ParamKind { FcWeight, FcBias, LstmWeight, LstmBias, HeadWeight, HeadBias };

// L2 regularization touches only fully-connected and head weights.
inline bool is_regularized(ParamKind k) {
  return k == ParamKind::FcWeight || k == ParamKind::HeadWeight;
}

template <typename MatrixT, typename VecT>
struct TensorRefT {
  std::string name;
  ParamKind kind;
  MatrixT* m = nullptr;
  VecT* v = nullptr;
};

using TensorRef = TensorRefT<Matrix, Vec>;
using ConstTensorRef = TensorRefT<const Matrix, const Vec>;

namespace detail {

template <typename R, typename P>
std::vector<R> list_tensors(P& p) {
  std::vector<R> out;
  auto add_m = [&](const std::string& name, ParamKind k, auto& m) {
    out.push_back({name, k, &m, nullptr});
  };
  auto add_v = [&](const std::string& name, ParamKind k, auto& v) {
    out.push_back({name, k, nullptr, &v});
  };
  for (std::size_t i = 0; i < p.input_fc.size(); ++i) {
    std::string base = "input_fc." + std::to_string(i);
    add_m(base + ".W", ParamKind::FcWeight, p.input_fc[i].W);
    add_v(base + ".b", ParamKind::FcBias, p.input_fc[i].b);
  }
  for (int l = 0; l < kLstmLayers; ++l) {
    std::string base = "lstm." + std::to_string(l);
    auto& q = p.lstm[static_cast<std::size_t>(l)];
    add_m(base + ".W_xi", ParamKind::LstmWeight, q.W_xi);
    add_m(base + ".W_hi", ParamKind::LstmWeight, q.W_hi);
    add_m(base + ".W_xf", ParamKind::LstmWeight, q.W_xf);
    add_m(base + ".W_hf", ParamKind::LstmWeight, q.W_hf);
    add_m(base + ".W_xo", ParamKind::LstmWeight, q.W_xo);
    add_m(base + ".W_ho", ParamKind::LstmWeight, q.W_ho);
    add_m(base + ".W_xc", ParamKind::LstmWeight, q.W_xc);
    add_m(base + ".W_hc", ParamKind::LstmWeight, q.W_hc);
    add_v(base + ".b_i", ParamKind::LstmBias, q.b_i);
    add_v(base + ".b_f", ParamKind::LstmBias, q.b_f);
    add_v(base + ".b_o", ParamKind::LstmBias, q.b_o);
    add_v(base + ".b_c", ParamKind::LstmBias, q.b_c);
  }
  for (std::size_t i = 0; i < p.output_fc.size(); ++i) {
    std::string base = "output_fc." + std::to_string(i);
    add_m(base + ".W", ParamKind::FcWeight, p.output_fc[i].W);
    add_v(base + ".b", ParamKind::FcBias, p.output_fc[i].b);
  }
  add_m("head.W", ParamKind::HeadWeight, p.head.W);
  add_v("head.b", ParamKind::HeadBias, p.head.b);
  return out;
}

}  // namespace detail

inline std::vector<TensorRef> tensor_refs(NetworkParams& p) {
  return detail::list_tensors<TensorRef>(p);
}
inline std::vector<ConstTensorRef> tensor_refs(const NetworkParams& p) {
  return detail::list_tensors<ConstTensorRef>(p);
}

inline NetworkParams zeros_like(const NetworkParams& p) {
  NetworkParams z = p;
  for (TensorRef& t : tensor_refs(z)) {
    if (t.m) t.m->a.assign(t.m->a.size(), 0.0);
    if (t.v) t.v->assign(t.v->size(), 0.0);
  }
  return z;
}

inline std::size_t parameter_count(const NetworkParams& p) {
  std::size_t n = 0;
  for (const ConstTensorRef& t : tensor_refs(p)) {
    n += t.m ? t.m->a.size() : t.v->size();
  }
  return n;
}

inline const char* kInitRecipe = "uniform(+-1/sqrt(fan_in));forget_bias=1";

// Uniform +-1/sqrt(fan_in) weights, zero biases except the forget-gate bias,
// which starts at 1 so early training keeps memory open.
inline NetworkParams init_params(const NetworkConfig& cfg, const GridGeometry& geometry,
                                 double delta, int window, Rng& rng) {
  geometry.validate();
  if (cfg.lstm_size < 1) throw ArgumentError("init_params: lstm_size must be >= 1");
  for (int s : cfg.input_fc) {
    if (s < 1) throw ArgumentError("init_params: input_fc sizes must be >= 1");
  }
  for (int s : cfg.output_fc) {
    if (s < 1) throw ArgumentError("init_params: output_fc sizes must be >= 1");
  }

  NetworkParams p;
  p.head_kind = cfg.head;
  p.geometry = geometry;
  p.delta = delta;
  p.window = window;
  p.init_recipe = kInitRecipe;

  auto init_matrix = [&rng](Matrix& m, int rows, int cols) {
    m = Matrix(rows, cols);
    double bound = 1.0 / std::sqrt(static_cast<double>(cols));
    for (double& v : m.a) v = rng.uniform(-bound, bound);
  };
  auto make_dense = [&](int in, int out, Activation act) {
    DenseLayer d;
    init_matrix(d.W, out, in);
    d.b.assign(static_cast<std::size_t>(out), 0.0);
    d.act = act;
    return d;
  };

  int width = FeatureVector::kCount;
  for (int s : cfg.input_fc) {
    p.input_fc.push_back(make_dense(width, s, Activation::Tanh));
    width = s;
  }
  for (int l = 0; l < kLstmLayers; ++l) {
    LstmLayerParams& q = p.lstm[static_cast<std::size_t>(l)];
    int in = (l == 0) ? width : cfg.lstm_size;
    init_matrix(q.W_xi, cfg.lstm_size, in);
    init_matrix(q.W_hi, cfg.lstm_size, cfg.lstm_size);
    init_matrix(q.W_xf, cfg.lstm_size, in);
    init_matrix(q.W_hf, cfg.lstm_size, cfg.lstm_size);
    init_matrix(q.W_xo, cfg.lstm_size, in);
    init_matrix(q.W_ho, cfg.lstm_size, cfg.lstm_size);
    init_matrix(q.W_xc, cfg.lstm_size, in);
    init_matrix(q.W_hc, cfg.lstm_size, cfg.lstm_size);
    q.b_i.assign(static_cast<std::size_t>(cfg.lstm_size), 0.0);
    q.b_f.assign(static_cast<std::size_t>(cfg.lstm_size), 1.0);
    q.b_o.assign(static_cast<std::size_t>(cfg.lstm_size), 0.0);
    q.b_c.assign(static_cast<std::size_t>(cfg.lstm_size), 0.0);
  }
  width = cfg.lstm_size;
  for (int s : cfg.output_fc) {
    p.output_fc.push_back(make_dense(width, s, Activation::Tanh));
    width = s;
  }
  int head_out = (cfg.head == HeadKind::Grid) ? geometry.total_classes() : 2;
  p.head = make_dense(width, head_out, Activation::Identity);
  return p;
}

// ---------------------------------------------------------------------------
// Forward pass with a tape for backpropagation through time.

struct DenseCache {
  Vec in, out;
};

struct StepTape {
  std::vector<DenseCache> fc;
  std::array<LstmStepCache, kLstmLayers> lstm;
};

struct Tape {
  std::vector<StepTape> steps;
  std::vector<DenseCache> output_fc;
  Vec head_in;
  Vec head_out;     // logits (grid) or displacement (regression)
  Vec probs;        // softmax output, grid head only
  Point2 last_pos;  // raw final observed position
};

struct ForwardOutput {
  HeadKind head = HeadKind::Grid;
  OccupancyMap map;  // grid head
  Point2 point;      // regression head: predicted coordinate at t + delta
  Tape tape;
};

inline void dense_forward(const DenseLayer& d, const Vec& x, DenseCache& cache,
                          const std::string& where) {
  cache.in = x;
  matvec(d.W, x, cache.out);
  add_to(cache.out, d.b);
  if (d.act == Activation::Tanh) {
    for (double& v : cache.out) v = std::tanh(v);
  }
  ensure_finite(cache.out, where);
}

// Softmax with max subtraction; output sums to 1 up to rounding.
inline Vec softmax(const Vec& logits) {
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  Vec z(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = std::exp(logits[i] - mx);
    sum += z[i];
  }
  for (double& v : z) v /= sum;
  return z;
}

// Normalization -> input FC stack per step -> two stacked LSTM layers across
// the sequence -> output FC stack on the final hidden state -> head.
inline ForwardOutput forward(const NetworkParams& p,
                             std::span<const FeatureVector> sequence) {
  if (sequence.empty()) throw ArgumentError("forward: empty sequence");
  if (static_cast<int>(sequence.size()) > p.window) {
    throw ArgumentError("forward: sequence longer than configured window");
  }

  ForwardOutput out;
  out.head = p.head_kind;
  Tape& tape = out.tape;
  tape.steps.resize(sequence.size());

  std::array<LstmLayerState, kLstmLayers> state;
  for (int l = 0; l < kLstmLayers; ++l) {
    state[static_cast<std::size_t>(l)] =
        LstmLayerState::zero(p.lstm[static_cast<std::size_t>(l)].hidden_size());
  }

  Vec u(FeatureVector::kCount);
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    StepTape& st = tape.steps[t];
    std::array<double, FeatureVector::kCount> raw = sequence[t].to_array();
    for (int k = 0; k < FeatureVector::kCount; ++k) {
      u[static_cast<std::size_t>(k)] =
          (raw[static_cast<std::size_t>(k)] - p.feat_offset[static_cast<std::size_t>(k)]) /
          p.feat_scale[static_cast<std::size_t>(k)];
    }
    ensure_finite(u, "normalized input (step " + std::to_string(t) + ")");

    const Vec* x = &u;
    st.fc.resize(p.input_fc.size());
    for (std::size_t i = 0; i < p.input_fc.size(); ++i) {
      dense_forward(p.input_fc[i], *x, st.fc[i],
                    "input_fc[" + std::to_string(i) + "] (step " + std::to_string(t) + ")");
      x = &st.fc[i].out;
    }
    for (int l = 0; l < kLstmLayers; ++l) {
      std::size_t li = static_cast<std::size_t>(l);
      state[li] = lstm_step(p.lstm[li], state[li], *x, &st.lstm[li]);
      ensure_finite(state[li].h, "lstm[" + std::to_string(l) + "] (step " + std::to_string(t) + ")");
      x = &st.lstm[li].h;
    }
  }

  const Vec* w = &tape.steps.back().lstm[kLstmLayers - 1].h;
  tape.output_fc.resize(p.output_fc.size());
  for (std::size_t i = 0; i < p.output_fc.size(); ++i) {
    dense_forward(p.output_fc[i], *w, tape.output_fc[i],
                  "output_fc[" + std::to_string(i) + "]");
    w = &tape.output_fc[i].out;
  }
  tape.head_in = *w;

  DenseCache head_cache;
  dense_forward(p.head, tape.head_in, head_cache, "head");
  tape.head_out = std::move(head_cache.out);
  tape.last_pos = {sequence.back().x, sequence.back().y};

  if (p.head_kind == HeadKind::Grid) {
    if (static_cast<int>(tape.head_out.size()) != p.geometry.total_classes()) {
      throw ShapeError("forward: head output does not match grid class count");
    }
    tape.probs = softmax(tape.head_out);
    out.map = OccupancyMap(p.geometry);
    for (std::size_t c = 0; c < out.map.p.size(); ++c) out.map.p[c] = tape.probs[c];
    out.map.p_oob = tape.probs.back();
  } else {
    if (tape.head_out.size() != 2) {
      throw ShapeError("forward: regression head must produce two outputs");
    }
    // The head emits a displacement from the final observed position.
    out.point = {tape.last_pos.x + tape.head_out[0], tape.last_pos.y + tape.head_out[1]};
  }
  return out;
}

inline ForwardOutput forward(const NetworkParams& p,
                             const std::vector<FeatureVector>& sequence) {
  return forward(p, std::span<const FeatureVector>(sequence));
}

}  // namespace ogp
