#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "noisyq/adam.hpp"
#include "noisyq/dense.hpp"
#include "noisyq/gradcheck.hpp"
#include "noisyq/noisy_linear.hpp"
#include "test_util.hpp"

namespace noisyq {
namespace {

using testing::cflat;
using testing::fill_uniform;
using testing::flat;
using testing::vec;

NoisyLinear random_layer(Index in, Index out, Rng& rng) {
  NoisyLinear layer(in, out);
  fill_uniform(layer.mu_w(), rng);
  fill_uniform(layer.mu_b(), rng);
  fill_uniform(layer.sigma_w(), rng, 0.05, 0.8);
  fill_uniform(layer.sigma_b(), rng, 0.05, 0.8);
  return layer;
}

TEST(Factorise, KnownValues) {
  EXPECT_EQ(factorise(4.0), 2.0);
  EXPECT_EQ(factorise(-9.0), -3.0);
  EXPECT_EQ(factorise(0.0), 0.0);
}

TEST(Factorise, SquareIsAbsoluteValueAndOdd) {
  Rng rng(2);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = n(rng);
    EXPECT_NEAR(factorise(x) * factorise(x), std::abs(x), 1e-12 * (1 + std::abs(x)));
    EXPECT_EQ(factorise(-x), -factorise(x));
  }
}

TEST(SampleNoise, ZeroDrawGivesZeroNoise) {
  NoisyLinear layer(3, 2);
  layer.set_noise({RealVector::Zero(3), RealVector::Zero(2)});
  EXPECT_TRUE(layer.eps_w().isZero(0));
  EXPECT_TRUE(layer.eps_b().isZero(0));
}

TEST(SampleNoise, HandEvaluatedFactorisedProduct) {
  NoisyLinear layer(1, 1);
  layer.set_noise({vec({4}), vec({9})});
  EXPECT_EQ(layer.eps_w()(0, 0), 6.0);
  EXPECT_EQ(layer.eps_b()(0), 3.0);
}

TEST(SampleNoise, EntryMatchesFactorisedFormula) {
  Rng rng(8);
  NoisyLinear layer(5, 3);
  const NoiseDraw draw = NoiseDraw::sample(5, 3, rng);
  layer.set_noise(draw);
  for (Index j = 0; j < 3; ++j) {
    for (Index i = 0; i < 5; ++i) {
      const double prod = draw.eps_in(i) * draw.eps_out(j);
      EXPECT_NEAR(layer.eps_w()(j, i), factorise(prod), 1e-12);
    }
    EXPECT_EQ(layer.eps_b()(j), factorise(draw.eps_out(j)));
  }
}

TEST(SampleNoise, WeightNoiseIsRankOne) {
  Rng rng(4);
  NoisyLinear layer(6, 4);
  layer.sample_noise(rng);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(layer.eps_w()));
  const auto s = svd.singularValues();
  EXPECT_GT(s(0), 1e-3);
  for (Index i = 1; i < s.size(); ++i) EXPECT_LT(s(i), 1e-12 * s(0));
}

TEST(SampleNoise, MonteCarloMeanIsZero) {
  Rng rng(12345);
  NoisyLinear layer(2, 2);
  RealMatrix sum = RealMatrix::Zero(2, 2);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    layer.sample_noise(rng);
    sum += layer.eps_w();
  }
  EXPECT_LT((sum / draws).cwiseAbs().maxCoeff(), 0.02);
}

TEST(NoisyForward, HandEvaluatedScalarLayer) {
  NoisyLinear layer(1, 1);
  layer.mu_w()(0, 0) = 1.0;
  layer.sigma_w()(0, 0) = 0.5;
  layer.mu_b()(0) = 0.0;
  layer.sigma_b()(0) = 1.0;
  // eps_in = -4, eps_out = -1 -> eps_w = f(-4) f(-1) = (-2)(-1) = 2, eps_b = -1.
  layer.set_noise({vec({-4.0}), vec({-1.0})});
  ASSERT_EQ(layer.eps_w()(0, 0), 2.0);
  ASSERT_EQ(layer.eps_b()(0), -1.0);
  EXPECT_EQ(layer.forward(vec({3.0}))(0), 5.0);
}

TEST(NoisyForward, ZeroNoiseMatchesDense) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    NoisyLinear noisy = random_layer(5, 3, rng);
    noisy.zero_noise();
    DenseLayer dense(5, 3);
    dense.weights() = noisy.mu_w();
    dense.bias() = noisy.mu_b();
    RealVector x(5);
    fill_uniform(x, rng);
    EXPECT_EQ(noisy.forward(x), dense.forward(x));
  }
}

TEST(NoisyForward, ZeroSigmaIgnoresNoise) {
  Rng rng(17);
  NoisyLinear layer = random_layer(4, 3, rng);
  layer.sigma_w().setZero();
  layer.sigma_b().setZero();
  RealVector x(4);
  fill_uniform(x, rng);
  layer.zero_noise();
  const RealVector clean = layer.forward(x);
  for (int i = 0; i < 10; ++i) {
    layer.sample_noise(rng);
    EXPECT_EQ(layer.forward(x), clean);
  }
}

TEST(NoisyForward, ShapeMismatchThrows) {
  NoisyLinear layer(3, 2);
  EXPECT_THROW(layer.forward(vec({1.0})), ShapeError);
}

TEST(NoisyForward, MonteCarloMeanConvergesToNoiseFreeOutput) {
  Rng rng(2024);
  NoisyLinear layer = random_layer(4, 4, rng);
  RealVector x(4);
  fill_uniform(x, rng);
  layer.zero_noise();
  const RealVector clean = layer.forward(x);

  const int draws = 100000;
  RealVector sum = RealVector::Zero(4), sum_sq = RealVector::Zero(4);
  for (int i = 0; i < draws; ++i) {
    layer.sample_noise(rng);
    const RealVector y = layer.forward(x);
    sum += y;
    sum_sq += y.cwiseProduct(y);
  }
  const RealVector mean = sum / draws;
  const RealVector var = sum_sq / draws - mean.cwiseProduct(mean);
  for (Index j = 0; j < 4; ++j) {
    const double se = std::sqrt(var(j) / draws);
    EXPECT_LT(std::abs(mean(j) - clean(j)), 3.0 * se) << "output " << j;
  }
}

TEST(NoisyInit, SigmaAndMuFollowFanIn) {
  Rng rng(1);
  const NoisyLinear layer = NoisyLinear::initialised(16, 8, 0.4, rng);
  EXPECT_TRUE(layer.sigma_w().isConstant(0.1));
  EXPECT_TRUE(layer.sigma_b().isConstant(0.1));
  EXPECT_LE(layer.mu_w().cwiseAbs().maxCoeff(), 0.25);
  EXPECT_TRUE(layer.eps_w().isZero(0));
}

TEST(NoisyBackward, ZeroNoiseReducesToDense) {
  Rng rng(6);
  NoisyLinear noisy = random_layer(3, 2, rng);
  noisy.zero_noise();
  DenseLayer dense(3, 2);
  dense.weights() = noisy.mu_w();
  dense.bias() = noisy.mu_b();
  Batch x(3, 4), up(2, 4);
  fill_uniform(x, rng);
  fill_uniform(up, rng);
  noisy.forward(x);
  dense.forward(x);
  const NoisyGrads gn = noisy.backward(up);
  const DenseGrads gd = dense.backward(up);
  EXPECT_TRUE(gn.sigma_w.isZero(0));
  EXPECT_TRUE(gn.sigma_b.isZero(0));
  EXPECT_EQ(gn.mu_w, gd.weights);
  EXPECT_EQ(gn.mu_b, gd.bias);
  EXPECT_EQ(gn.input, gd.input);
}

TEST(NoisyBackward, ZeroUpstream) {
  Rng rng(6);
  NoisyLinear layer = random_layer(3, 2, rng);
  layer.sample_noise(rng);
  layer.forward(vec({1, 2, 3}));
  const NoisyGrads g = layer.backward(Batch::Zero(2, 1));
  EXPECT_TRUE(g.mu_w.isZero(0) && g.sigma_w.isZero(0) && g.mu_b.isZero(0) &&
              g.sigma_b.isZero(0) && g.input.isZero(0));
}

TEST(NoisyBackward, BeforeForwardIsStateError) {
  NoisyLinear layer(2, 2);
  EXPECT_THROW(layer.backward(Batch::Zero(2, 1)), StateError);
}

TEST(NoisyBackward, MatchesFiniteDifferencesWithFrozenNoise) {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    NoisyLinear layer = random_layer(4, 3, rng);
    layer.sample_noise(rng);
    Batch x(4, 2), t(3, 2);
    fill_uniform(x, rng);
    fill_uniform(t, rng);
    auto loss = [&] { return 0.5 * (layer.forward(x) - t).squaredNorm(); };
    const Batch y = layer.forward(x);
    NoisyGrads g = layer.backward(y - t);
    std::vector<GradientBlock> blocks{{flat(layer.mu_w()), cflat(g.mu_w)},
                                      {flat(layer.sigma_w()), cflat(g.sigma_w)},
                                      {flat(layer.mu_b()), cflat(g.mu_b)},
                                      {flat(layer.sigma_b()), cflat(g.sigma_b)},
                                      {flat(x), cflat(g.input)}};
    const auto r = finite_diff_check(blocks, loss);
    ASSERT_LT(r.max_relative_error, 1e-4) << "trial " << trial;
  }
}

TEST(NoisyBackward, UsesNoiseFromForwardPass) {
  Rng rng(3);
  NoisyLinear layer = random_layer(3, 2, rng);
  layer.sample_noise(rng);
  const RealMatrix eps_used = layer.eps_w();
  layer.forward(vec({1, 1, 1}));
  layer.sample_noise(rng);
  const NoisyGrads g = layer.backward(Batch(vec({1, 1})));
  EXPECT_EQ(g.sigma_w, g.mu_w.cwiseProduct(eps_used));
}

TEST(Stability, ZeroSigma) {
  NoisyLinear layer(3, 2);
  EXPECT_EQ(stability(layer), 0.0);
}

TEST(Stability, ConstantSigmaEqualsConstant) {
  NoisyLinear layer(7, 3);
  layer.sigma_w().setConstant(0.25);
  layer.sigma_b().setConstant(0.25);
  EXPECT_DOUBLE_EQ(stability(layer), 0.25);
}

TEST(Stability, HandEvaluated) {
  NoisyLinear layer(2, 2);
  layer.sigma_w() << 0.1, 0.2, 0.3, 0.4;
  layer.sigma_b() << 0.5, 0.6;
  EXPECT_NEAR(stability(layer), 0.35, 1e-15);
}

TEST(Stability, UsesMagnitudes) {
  NoisyLinear layer(2, 2);
  layer.sigma_w() << -0.1, 0.2, -0.3, 0.4;
  layer.sigma_b() << 0.5, -0.6;
  EXPECT_NEAR(stability(layer), 0.35, 1e-15);
}

TEST(Stability, NonNegativeAndZeroOnlyWhenSigmaVanishes) {
  Rng rng(10);
  for (int i = 0; i < 50; ++i) {
    NoisyLinear layer(3, 2);
    fill_uniform(layer.sigma_w(), rng);
    fill_uniform(layer.sigma_b(), rng);
    EXPECT_GT(stability(layer), 0.0);
  }
  NoisyLinear layer(3, 2);
  EXPECT_EQ(stability(layer), 0.0);
  layer.sigma_b()(1) = -1e-9;
  EXPECT_GT(stability(layer), 0.0);
}

TEST(StabilityGradient, HandEvaluated) {
  NoisyLinear layer(2, 2);
  layer.sigma_w() << 0.1, -0.2, 0.0, 0.4;
  layer.sigma_b() << 0.5, 0.6;
  const StabilityGrad g = stability_gradient(layer);
  EXPECT_DOUBLE_EQ(g.sigma_w(0, 0), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(g.sigma_w(0, 1), -1.0 / 6.0);
  EXPECT_EQ(g.sigma_w(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(g.sigma_b(1), 1.0 / 6.0);
}

TEST(StabilityGradient, MatchesFiniteDifferencesAwayFromZero) {
  Rng rng(55);
  std::uniform_real_distribution<double> mag(0.01, 1.0);
  std::bernoulli_distribution neg(0.5);
  for (int trial = 0; trial < 100; ++trial) {
    NoisyLinear layer(5, 3);
    for (Index i = 0; i < layer.sigma_w().size(); ++i)
      layer.sigma_w().data()[i] = (neg(rng) ? -1 : 1) * mag(rng);
    for (Index i = 0; i < layer.sigma_b().size(); ++i)
      layer.sigma_b()(i) = (neg(rng) ? -1 : 1) * mag(rng);
    StabilityGrad g = stability_gradient(layer);
    std::vector<GradientBlock> blocks{{flat(layer.sigma_w()), cflat(g.sigma_w)},
                                      {flat(layer.sigma_b()), cflat(g.sigma_b)}};
    const auto r = finite_diff_check(blocks, [&] { return stability(layer); });
    ASSERT_LT(r.max_relative_error, 1e-6) << "trial " << trial;
  }
}

TEST(StabilityGradient, DescentStepShrinksEverySigma) {
  Rng rng(90);
  NoisyLinear layer(8, 3);
  fill_uniform(layer.sigma_w(), rng, -1.0, 1.0);
  fill_uniform(layer.sigma_b(), rng, -1.0, 1.0);
  const RealMatrix before_w = layer.sigma_w();
  const RealVector before_b = layer.sigma_b();

  const double k = 4.0, lr = 0.05;
  const double step = lr * k / static_cast<double>((8 + 1) * 3);
  const StabilityGrad g = stability_gradient(layer);
  layer.sigma_w() -= lr * k * g.sigma_w;
  layer.sigma_b() -= lr * k * g.sigma_b;
  for (Index i = 0; i < before_w.size(); ++i) {
    if (std::abs(before_w.data()[i]) > step)
      EXPECT_LT(std::abs(layer.sigma_w().data()[i]), std::abs(before_w.data()[i]));
  }
  for (Index i = 0; i < before_b.size(); ++i) {
    if (std::abs(before_b(i)) > step) EXPECT_LT(std::abs(layer.sigma_b()(i)), std::abs(before_b(i)));
  }
}

TEST(StabilityGradient, AdamStepOnDShrinksEverySigma) {
  Rng rng(91);
  NoisyLinear layer(8, 3);
  fill_uniform(layer.sigma_w(), rng, -1.0, 1.0);
  const RealMatrix before = layer.sigma_w();
  StabilityGrad g = stability_gradient(layer);
  RealMatrix grad = 4.0 * g.sigma_w;
  AdamState adam(static_cast<std::size_t>(before.size()), {0.01, 0.9, 0.999, 0.0});
  adam.step(flat(layer.sigma_w()), cflat(grad));
  for (Index i = 0; i < before.size(); ++i)
    if (std::abs(before.data()[i]) > 0.01)
      EXPECT_LT(std::abs(layer.sigma_w().data()[i]), std::abs(before.data()[i]));
}

}  // namespace
}  // namespace noisyq
