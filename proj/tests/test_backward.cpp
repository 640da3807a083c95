#include "ogp/backward.hpp"

#include <gtest/gtest.h>

#include "ogp/loss.hpp"
#include "ogp/rng.hpp"
#include "support/grad_check.hpp"

using namespace ogp;
using ogp::testing::GradCheckCase;
using ogp::testing::gradient_check;
using ogp::testing::param_elements;
using ogp::testing::random_case;

TEST(Backward, GridHeadMatchesFiniteDifferences) {
  Rng rng(101);
  for (int trial = 0; trial < 4; ++trial) {
    GradCheckCase c = random_case(HeadKind::Grid, rng);
    auto r = gradient_check(c);
    EXPECT_LT(r.max_rel_error, 1e-4) << "worst tensor: " << r.worst_tensor;
  }
}

TEST(Backward, GridHeadCategoricalFormMatchesFiniteDifferences) {
  Rng rng(102);
  GradCheckCase c = random_case(HeadKind::Grid, rng);
  c.form = LossForm::CategoricalCe;
  auto r = gradient_check(c);
  EXPECT_LT(r.max_rel_error, 1e-4) << "worst tensor: " << r.worst_tensor;
}

TEST(Backward, RegressionHeadMatchesFiniteDifferences) {
  Rng rng(103);
  for (int trial = 0; trial < 4; ++trial) {
    GradCheckCase c = random_case(HeadKind::Regression, rng);
    auto r = gradient_check(c);
    EXPECT_LT(r.max_rel_error, 1e-4) << "worst tensor: " << r.worst_tensor;
  }
}

TEST(Backward, PerfectRegressionPredictionHasZeroDataGradient) {
  Rng rng(104);
  GradCheckCase c = random_case(HeadKind::Regression, rng);
  ForwardOutput out = forward(c.params, c.sequence);
  NetworkParams g = backward(c.params, out.tape, out.point, 0.0);
  for (double* v : param_elements(g)) EXPECT_EQ(*v, 0.0);
}

TEST(Backward, L2TermAloneGivesLambdaTimesWeights) {
  Rng rng(105);
  GradCheckCase c = random_case(HeadKind::Regression, rng);
  double lambda = 0.01;
  ForwardOutput out = forward(c.params, c.sequence);
  NetworkParams g = backward(c.params, out.tape, out.point, lambda);
  auto gs = tensor_refs(g);
  auto ps = tensor_refs(c.params);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (is_regularized(gs[i].kind)) {
      for (std::size_t k = 0; k < gs[i].m->a.size(); ++k) {
        EXPECT_DOUBLE_EQ(gs[i].m->a[k], lambda * ps[i].m->a[k]);
      }
    } else if (gs[i].m) {
      for (double v : gs[i].m->a) EXPECT_EQ(v, 0.0);
    } else {
      for (double v : *gs[i].v) EXPECT_EQ(v, 0.0);
    }
  }
}

TEST(Backward, LambdaDoesNotTouchLstmGradients) {
  Rng rng(106);
  GradCheckCase c = random_case(HeadKind::Grid, rng);
  ForwardOutput out = forward(c.params, c.sequence);
  NetworkParams g0 = backward(c.params, out.tape, c.label, 0.0);
  NetworkParams g1 = backward(c.params, out.tape, c.label, 0.01);
  auto r0 = tensor_refs(g0);
  auto r1 = tensor_refs(g1);
  for (std::size_t i = 0; i < r0.size(); ++i) {
    if (r0[i].kind == ParamKind::LstmWeight) {
      EXPECT_EQ(r0[i].m->a, r1[i].m->a) << r0[i].name;
    }
    if (r0[i].kind == ParamKind::LstmBias) {
      EXPECT_EQ(*r0[i].v, *r1[i].v) << r0[i].name;
    }
  }
}

TEST(Backward, SingleSgdStepDecreasesLoss) {
  Rng rng(107);
  const double lr = 1e-4;
  for (HeadKind head : {HeadKind::Grid, HeadKind::Regression}) {
    for (int trial = 0; trial < 5; ++trial) {
      GradCheckCase c = random_case(head, rng);
      double before = ogp::testing::eval_loss(c.params, c);
      ForwardOutput out = forward(c.params, c.sequence);
      NetworkParams g = (head == HeadKind::Grid)
                            ? backward(c.params, out.tape, c.label, c.lambda, c.form)
                            : backward(c.params, out.tape, c.target, c.lambda);
      auto pe = param_elements(c.params);
      auto ge = param_elements(g);
      for (std::size_t k = 0; k < pe.size(); ++k) *pe[k] -= lr * *ge[k];
      double after = ogp::testing::eval_loss(c.params, c);
      EXPECT_LT(after, before);
    }
  }
}

TEST(Backward, TapeParamsMismatchThrows) {
  Rng rng(108);
  GradCheckCase a = random_case(HeadKind::Grid, rng);
  ForwardOutput out = forward(a.params, a.sequence);

  NetworkConfig other;
  other.input_fc = {8};
  other.lstm_size = 6;  // different hidden size
  other.output_fc = {8};
  other.head = HeadKind::Grid;
  NetworkParams mismatched =
      init_params(other, ogp::testing::grad_check_geometry(), 1.0, 20, rng);
  EXPECT_THROW(backward(mismatched, out.tape, a.label, 0.0), StateError);

  // Wrong-head target is also a state error.
  EXPECT_THROW(backward(a.params, out.tape, Point2{0.0, 0.0}, 0.0), StateError);
}
