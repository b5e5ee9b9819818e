#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rankbandit/confidence.hpp"
#include "rankbandit/errors.hpp"
#include "test_util.hpp"

using namespace rankbandit;

namespace {

EstimatorOptions opts(double lambda = 1.0, double delta = 0.1, double m2 = 1.0,
                      LinkKind link = LinkKind::identity) {
  EstimatorOptions o;
  o.lambda = lambda;
  o.delta = delta;
  o.m2_bound = m2;
  o.link = LinkFunction{link};
  return o;
}

}  // namespace

TEST(Estimator, FreshStateIsRegularizedZero) {
  PositionEstimator est(3, opts());
  EXPECT_EQ(est.theta_hat(), (Vec{0, 0, 0}));
  EXPECT_EQ(est.t(), 0u);
  EXPECT_NEAR(est.beta_radius(), 1.0 + std::sqrt(2.0 * std::log(10.0)), 1e-14);
}

TEST(Estimator, RidgeOneObservation) {
  PositionEstimator est(1, opts());
  est.observe(Vec{1.0}, 1.0);
  EXPECT_NEAR(est.theta_hat()[0], 0.5, 1e-15);
}

TEST(Estimator, RidgeRepeatedObservation) {
  PositionEstimator est(2, opts());
  est.observe(Vec{1.0, 0.0}, 2.0);
  est.observe(Vec{1.0, 0.0}, 2.0);
  EXPECT_NEAR(est.theta_hat()[0], 4.0 / 3.0, 1e-15);
  EXPECT_EQ(est.theta_hat()[1], 0.0);
}

TEST(Estimator, ZeroFeatureOnlyAdvancesTime) {
  PositionEstimator est(2, opts());
  est.observe(Vec{1.0, 2.0}, 0.3);
  const Matrix v = est.V().entries();
  const Vec th = est.theta_hat();
  est.observe(Vec{0.0, 0.0}, 5.0);
  EXPECT_EQ(est.V().entries(), v);
  EXPECT_EQ(est.theta_hat(), th);
  EXPECT_EQ(est.t(), 2u);
}

TEST(Estimator, OrderOfObservationsDoesNotMatter) {
  PositionEstimator a(2, opts()), b(2, opts());
  a.observe(Vec{1.0, 2.0}, 0.5);
  a.observe(Vec{-1.0, 0.5}, 1.5);
  b.observe(Vec{-1.0, 0.5}, 1.5);
  b.observe(Vec{1.0, 2.0}, 0.5);
  EXPECT_LT(max_abs_diff(a.V().entries(), b.V().entries()), 1e-15);
  EXPECT_NEAR(a.xr_sum()[0], b.xr_sum()[0], 1e-15);
  EXPECT_NEAR(a.xr_sum()[1], b.xr_sum()[1], 1e-15);
}

TEST(Estimator, RejectsBadInput) {
  PositionEstimator est(2, opts());
  EXPECT_THROW(est.observe(Vec{1.0}, 1.0), std::invalid_argument);
  EXPECT_THROW(est.observe(Vec{1.0, 0.0}, std::nan("")), std::invalid_argument);
  EXPECT_THROW(est.ucb_value(Vec{1.0}), std::invalid_argument);
}

TEST(Estimator, VIsReconstructableFromHistory) {
  std::mt19937_64 rng(1);
  PositionEstimator est(3, opts(0.5));
  Matrix v = Matrix::identity(3, 0.5);
  for (int t = 0; t < 50; ++t) {
    const Vec x = testutil::gaussian_vec(rng, 3);
    est.observe(x, 0.1 * t);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) v(i, j) += x[i] * x[j];
  }
  EXPECT_LT(max_abs_diff(est.V().entries(), v), 1e-12);
}

TEST(Beta, ScalarOracle) {
  // lambda = 1, m2 = 1, delta = 0.1, d = 2, det V = 4
  PositionEstimator est(2, opts());
  est.observe(Vec{std::sqrt(3.0), 0.0}, 0.0);
  EXPECT_NEAR(std::exp(est.V().log_det()), 4.0, 1e-12);
  EXPECT_NEAR(est.beta_radius(), 3.4477468306808166, 1e-12);
}

TEST(Beta, NondecreasingAlongObservations) {
  std::mt19937_64 rng(2);
  PositionEstimator est(4, opts());
  double prev = est.beta_radius();
  for (int t = 0; t < 200; ++t) {
    est.observe(testutil::gaussian_vec(rng, 4), 0.0);
    EXPECT_GE(est.beta_radius(), prev);
    prev = est.beta_radius();
  }
}

TEST(Ucb, ZeroFeatureAnchorsAtLink) {
  PositionEstimator id(2, opts());
  PositionEstimator lg(2, opts(1.0, 0.1, 1.0, LinkKind::logistic));
  EXPECT_EQ(id.ucb_value(Vec{0, 0}), 0.0);
  EXPECT_EQ(lg.ucb_value(Vec{0, 0}), 0.5);
}

TEST(Ucb, FreshEstimatorIsScaledNorm) {
  PositionEstimator est(3, opts());
  const Vec x{1.0, -2.0, 2.0};
  EXPECT_NEAR(est.ucb_value(x), est.beta_radius() * 3.0, 1e-13);
}

TEST(Ucb, PartsMatchDirectEvaluation) {
  std::mt19937_64 rng(3);
  PositionEstimator est(3, opts());
  for (int t = 0; t < 30; ++t) est.observe(testutil::gaussian_vec(rng, 3), 0.4);
  const Vec x = testutil::gaussian_vec(rng, 3);
  const double lin = dot(est.theta_hat(), x);
  const double norm = mahalanobis(x, est.V(), NormMode::V_inverse);
  EXPECT_EQ(est.ucb_value(x), est.ucb_from_parts(lin, norm));
  EXPECT_EQ(est.ucb_from_parts(lin, norm), est.ucb_from_parts(lin, norm, est.beta_radius()));
}

TEST(Mle, LogisticStationarity) {
  std::mt19937_64 rng(4);
  const LinkFunction f{LinkKind::logistic};
  const Vec theta{0.8, -0.4, 0.3};
  PositionEstimator est(3, opts(1.0, 0.1, 1.0, LinkKind::logistic));
  std::bernoulli_distribution coin;
  for (int t = 0; t < 200; ++t) {
    const Vec x = testutil::unit_vec(rng, 3);
    const double p = f.value(dot(theta, x));
    est.observe(x, std::bernoulli_distribution(p)(rng) ? 1.0 : 0.0);
    ASSERT_LE(est.mle_residual(), 1e-8);
  }
}

// For identity links g_t(theta) = V_t theta, so the confidence distance is
// |theta - theta_hat|_{V_t}.
TEST(Mle, IdentityAlgebra) {
  std::mt19937_64 rng(5);
  PositionEstimator est(3, opts());
  for (int t = 0; t < 40; ++t) est.observe(testutil::gaussian_vec(rng, 3), testutil::gaussian_vec(rng, 1)[0]);
  for (int rep = 0; rep < 20; ++rep) {
    const Vec theta = testutil::gaussian_vec(rng, 3);
    Vec diff(3);
    for (std::size_t i = 0; i < 3; ++i) diff[i] = theta[i] - est.theta_hat()[i];
    EXPECT_NEAR(est.confidence_distance(theta), mahalanobis(diff, est.V(), NormMode::V), 1e-10);
  }
}

// Identity behind the joint estimator: <(theta, w theta), (v_j, v_i)>
// equals <theta, v_j + w v_i>.
TEST(Stacking, JointParameterIdentity) {
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 100; ++rep) {
    const Vec theta = testutil::gaussian_vec(rng, 4);
    const Vec vj = testutil::gaussian_vec(rng, 4);
    const Vec vi = testutil::gaussian_vec(rng, 4);
    const double w = testutil::gaussian_vec(rng, 1)[0];
    Vec phi = theta, stacked = vj, x(4);
    for (double t : theta) phi.push_back(w * t);
    stacked.insert(stacked.end(), vi.begin(), vi.end());
    for (std::size_t k = 0; k < 4; ++k) x[k] = vj[k] + w * vi[k];
    EXPECT_NEAR(dot(phi, stacked), dot(theta, x), 1e-12);
  }
}

TEST(Posterior, ScalarUpdate) {
  GaussianPosterior p(1, 1.0);
  p.observe(Vec{1.0}, 2.0);
  EXPECT_EQ(p.precision().entries()(0, 0), 2.0);
  EXPECT_EQ(p.mean()[0], 1.0);
  p.observe(Vec{0.0}, 9.0);
  EXPECT_EQ(p.mean()[0], 1.0);
  EXPECT_THROW(p.observe(Vec{1.0}, INFINITY), std::invalid_argument);
}

TEST(Posterior, SequentialEqualsBatch) {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t d = 1 + rep % 5;
    const double lambda = 0.5 + rep % 3;
    GaussianPosterior p(d, lambda);
    Matrix prec = Matrix::identity(d, lambda);
    Vec s(d, 0.0);
    for (int t = 0; t < 100; ++t) {
      const Vec x = testutil::gaussian_vec(rng, d);
      const double r = testutil::gaussian_vec(rng, 1)[0];
      p.observe(x, r);
      for (std::size_t i = 0; i < d; ++i) {
        s[i] += r * x[i];
        for (std::size_t j = 0; j < d; ++j) prec(i, j) += x[i] * x[j];
      }
    }
    const Vec mu = cholesky_solve(cholesky_lower(prec), s);
    for (std::size_t i = 0; i < d; ++i) EXPECT_NEAR(p.mean()[i], mu[i], 1e-8);
  }
}

TEST(Posterior, SamplingIsDeterministicPerSeed) {
  GaussianPosterior p(3, 2.0);
  p.observe(Vec{1, 2, 3}, 1.0);
  std::mt19937_64 a(9), b(9);
  EXPECT_EQ(p.sample(a), p.sample(b));
}

TEST(Posterior, VarianceShrinksAlongRepeatedDirection) {
  GaussianPosterior p(2, 1.0);
  const Vec x{0.6, 0.8};
  for (int t = 0; t < 100000; ++t) p.observe(x, 0.0);
  std::mt19937_64 rng(10);
  double m = 0.0, v = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Vec s = p.sample(rng);
    const double along = dot(s, x);
    m += along;
    v += along * along;
  }
  m /= n;
  EXPECT_LT(v / n - m * m, 1e-4);
}

TEST(Posterior, PointMassAlwaysReturnsMean) {
  GaussianPosterior p = GaussianPosterior::point_mass(Vec{0.1, 0.2});
  std::mt19937_64 rng(1);
  p.observe(Vec{1.0, 1.0}, 5.0);
  EXPECT_EQ(p.sample(rng), (Vec{0.1, 0.2}));
  EXPECT_TRUE(p.is_point_mass());
}

TEST(BasisProjection, MatchesDirectProducts) {
  std::mt19937_64 rng(11);
  Matrix basis(5, 3);
  for (std::size_t i = 0; i < 15; ++i) basis.data()[i] = testutil::gaussian_vec(rng, 1)[0];
  const Matrix a = testutil::random_spd(rng, 3);
  const Vec theta = testutil::gaussian_vec(rng, 3);
  BasisProjection out;
  project_basis(basis, theta, &a, out);
  const Matrix gram = multiply(multiply(basis, a), transpose(basis));
  EXPECT_LT(max_abs_diff(out.gram, gram), 1e-12);
  const Vec dots = multiply(basis, theta);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(out.dots[i], dots[i], 1e-13);
}
