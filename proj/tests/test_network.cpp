#include "ogp/network.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "ogp/loss.hpp"
#include "ogp/rng.hpp"

using namespace ogp;

namespace {

GridGeometry tiny_geom() { return GridGeometry{3, 3, 5.0, 0.875, 0.0, -1.3125}; }

NetworkConfig tiny_config(HeadKind head) {
  NetworkConfig cfg;
  cfg.input_fc = {8};
  cfg.lstm_size = 8;
  cfg.output_fc = {8};
  cfg.head = head;
  return cfg;
}

std::vector<FeatureVector> random_sequence(int steps, Rng& rng) {
  std::vector<FeatureVector> seq(static_cast<std::size_t>(steps));
  for (FeatureVector& f : seq) {
    f.x = rng.uniform(0.0, 15.0);
    f.y = rng.uniform(-1.5, 1.5);
    f.vx = rng.uniform(-2.0, 2.0);
    f.vy = rng.uniform(-1.0, 1.0);
    f.yaw_rate = rng.uniform(-0.05, 0.05);
    f.speed = rng.uniform(20.0, 30.0);
  }
  return seq;
}

}  // namespace

TEST(Forward, GridHeadIsDistribution) {
  Rng rng(5);
  NetworkParams p = init_params(tiny_config(HeadKind::Grid), tiny_geom(), 1.0, 20, rng);
  for (int trial = 0; trial < 20; ++trial) {
    ForwardOutput out = forward(p, random_sequence(5, rng));
    double sum = out.map.p_oob;
    for (double v : out.map.p) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(Forward, SoftmaxShiftInvariant) {
  Rng rng(6);
  Vec logits(10);
  for (double& v : logits) v = rng.uniform(-5.0, 5.0);
  Vec shifted = logits;
  for (double& v : shifted) v += 123.456;
  Vec a = softmax(logits), b = softmax(shifted);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
}

TEST(Forward, ZeroRecurrenceCannotAccumulateState) {
  Rng rng(7);
  NetworkParams p = init_params(tiny_config(HeadKind::Grid), tiny_geom(), 1.0, 20, rng);
  for (TensorRef& t : tensor_refs(p)) {
    if (t.kind == ParamKind::LstmWeight) t.m->a.assign(t.m->a.size(), 0.0);
    if (t.kind == ParamKind::LstmBias) t.v->assign(t.v->size(), 0.0);
  }
  std::vector<FeatureVector> one = random_sequence(1, rng);
  std::vector<FeatureVector> many(20, one[0]);
  ForwardOutput a = forward(p, one);
  ForwardOutput b = forward(p, many);
  EXPECT_EQ(a.tape.head_in, b.tape.head_in);
  EXPECT_EQ(a.tape.head_out, b.tape.head_out);
}

TEST(Forward, DeterministicAcrossCalls) {
  Rng rng(8);
  NetworkParams p = init_params(tiny_config(HeadKind::Grid), tiny_geom(), 1.0, 20, rng);
  std::vector<FeatureVector> seq = random_sequence(6, rng);
  ForwardOutput a = forward(p, seq);
  ForwardOutput b = forward(p, seq);
  EXPECT_EQ(a.map.p, b.map.p);
  EXPECT_EQ(a.map.p_oob, b.map.p_oob);
}

TEST(Forward, RegressionHeadAddsDisplacementToLastPosition) {
  Rng rng(9);
  NetworkParams p = init_params(tiny_config(HeadKind::Regression), tiny_geom(), 1.0, 20, rng);
  std::vector<FeatureVector> seq = random_sequence(4, rng);
  ForwardOutput out = forward(p, seq);
  EXPECT_DOUBLE_EQ(out.point.x, seq.back().x + out.tape.head_out[0]);
  EXPECT_DOUBLE_EQ(out.point.y, seq.back().y + out.tape.head_out[1]);
}

TEST(Forward, ErrorContracts) {
  Rng rng(10);
  NetworkParams p = init_params(tiny_config(HeadKind::Grid), tiny_geom(), 1.0, 5, rng);
  EXPECT_THROW(forward(p, std::vector<FeatureVector>{}), ArgumentError);
  EXPECT_THROW(forward(p, random_sequence(6, rng)), ArgumentError);

  std::vector<FeatureVector> bad = random_sequence(3, rng);
  bad[1].x = std::nan("");
  try {
    forward(p, bad);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("step 1"), std::string::npos);
  }
}

TEST(ClassificationLoss, UniformMatchesClosedForm) {
  Rng rng(11);
  GridGeometry g;  // 757 classes
  NetworkConfig cfg = tiny_config(HeadKind::Grid);
  NetworkParams p = init_params(cfg, g, 1.0, 20, rng);
  OccupancyMap m(g);
  double u = 1.0 / 757.0;
  for (double& v : m.p) v = u;
  m.p_oob = u;
  double closed = -std::log(u) - 756.0 * std::log(1.0 - u);
  double got = classification_loss(m, CellLabel::in_grid(4, 9), p, 0.0);
  EXPECT_NEAR(got, closed, 1e-12);
  EXPECT_NEAR(got, 7.63, 5e-3);
  double lambda = 5e-4;
  EXPECT_NEAR(classification_loss(m, CellLabel::in_grid(4, 9), p, lambda),
              closed + lambda * l2_penalty(p), 1e-12);
}

TEST(ClassificationLoss, PerfectPredictionLeavesOnlyRegularizer) {
  Rng rng(12);
  GridGeometry g = tiny_geom();
  NetworkParams p = init_params(tiny_config(HeadKind::Grid), g, 1.0, 20, rng);
  OccupancyMap m(g);
  CellLabel l = CellLabel::in_grid(2, 3);
  m.p[static_cast<std::size_t>(l.linear_class(g))] = 1.0;
  double lambda = 1e-3;
  EXPECT_NEAR(classification_loss(m, l, p, lambda), lambda * l2_penalty(p), 1e-9);
}

TEST(ClassificationLoss, MatchesLiteralTranscription) {
  Rng rng(13);
  GridGeometry g = tiny_geom();
  NetworkParams p = init_params(tiny_config(HeadKind::Grid), g, 1.0, 20, rng);
  for (int trial = 0; trial < 25; ++trial) {
    Vec logits(static_cast<std::size_t>(g.total_classes()));
    for (double& v : logits) v = rng.uniform(-3.0, 3.0);
    Vec z = softmax(logits);
    OccupancyMap m(g);
    for (std::size_t c = 0; c < m.p.size(); ++c) m.p[c] = z[c];
    m.p_oob = z.back();
    int label = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.total_classes())));
    CellLabel l = CellLabel::from_linear_class(label, g);

    double want = 0.0;
    for (int k = 0; k < g.total_classes(); ++k) {
      double o = (k == label) ? 1.0 : 0.0;
      want -= o * std::log(std::max(z[static_cast<std::size_t>(k)], 1e-12)) +
              (1.0 - o) * std::log(std::max(1.0 - z[static_cast<std::size_t>(k)], 1e-12));
    }
    EXPECT_NEAR(classification_loss(m, l, p, 0.0), want, 1e-12);

    // Categorical form keeps only the label term.
    EXPECT_NEAR(classification_loss(m, l, p, 0.0, LossForm::CategoricalCe),
                -std::log(z[static_cast<std::size_t>(label)]), 1e-12);
  }
}

TEST(ClassificationLoss, RejectsOutOfRangeProbability) {
  Rng rng(14);
  GridGeometry g = tiny_geom();
  NetworkParams p = init_params(tiny_config(HeadKind::Grid), g, 1.0, 20, rng);
  OccupancyMap m(g);
  m.p[0] = 1.5;
  EXPECT_THROW(classification_loss(m, CellLabel::in_grid(1, 1), p, 0.0), NumericError);
}

TEST(RegressionLoss, KnownValues) {
  Rng rng(15);
  NetworkParams p = init_params(tiny_config(HeadKind::Regression), tiny_geom(), 1.0, 20, rng);
  EXPECT_DOUBLE_EQ(regression_loss({2.0, -1.0}, {2.0, -1.0}, p, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(regression_loss({0.0, 0.0}, {3.0, 4.0}, p, 0.0), 12.5);
  for (int trial = 0; trial < 20; ++trial) {
    Point2 a{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    Point2 b{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    double want = 0.5 * ((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
    EXPECT_NEAR(regression_loss(a, b, p, 0.0), want, 1e-12);
  }
  EXPECT_THROW(regression_loss({std::nan(""), 0.0}, {0.0, 0.0}, p, 0.0), NumericError);
}

TEST(L2Penalty, CountsOnlyFcAndHeadWeights) {
  Rng rng(16);
  NetworkParams p = init_params(tiny_config(HeadKind::Grid), tiny_geom(), 1.0, 20, rng);
  double direct = 0.0;
  for (const DenseLayer& d : p.input_fc)
    for (double v : d.W.a) direct += v * v;
  for (const DenseLayer& d : p.output_fc)
    for (double v : d.W.a) direct += v * v;
  for (double v : p.head.W.a) direct += v * v;
  EXPECT_NEAR(l2_penalty(p), 0.5 * direct, 1e-12);

  // Perturbing an LSTM weight or any bias must not change the penalty.
  double before = l2_penalty(p);
  p.lstm[0].W_xi(0, 0) += 10.0;
  p.head.b[0] += 10.0;
  p.input_fc[0].b[0] += 10.0;
  EXPECT_DOUBLE_EQ(l2_penalty(p), before);
}
