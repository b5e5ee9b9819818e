#pragma once

// Per-position parameter estimation: regularized MLE over the observed
// (feature, reward) pairs, the confidence radius sqrt(beta_t), optimistic
// values, and the conjugate Gaussian posterior used by Thompson sampling.

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "rankbandit/linalg.hpp"
#include "rankbandit/model.hpp"

namespace rankbandit {

struct EstimatorOptions {
  double lambda = 1.0;
  double delta = 0.01;
  double m2_bound = 1.0;  // stands in for the unknown |theta| inside beta
  double c1 = 1.0;        // link derivative lower bound, used by non-identity links
  LinkFunction link{};
};

class PositionEstimator {
 public:
  static constexpr double kMleTolerance = 1e-8;
  static constexpr int kMaxNewtonIterations = 100;

  PositionEstimator(std::size_t dim, EstimatorOptions options);

  // V += x x^T, xr_sum += r x, t += 1, then re-solves the MLE.
  void observe(std::span<const double> x, double r);

  // Identity link: theta = V^-1 xr_sum. Otherwise damped Newton on the
  // regularized likelihood, warm-started from the previous estimate. Throws
  // NumericError carrying the final residual if it does not converge.
  const Vec& solve_mle();

  // sqrt(beta_t) = sqrt(lambda) m2 + sqrt(2 log(1/delta) + log(det V_t / lambda^d))
  double beta_radius() const;

  double ucb_value(std::span<const double> x) const;

  // The optimistic value from its two ingredients <theta_hat, x> and |x|_{V^-1}.
  double ucb_from_parts(double linear, double norm_inverse) const {
    return ucb_from_parts(linear, norm_inverse, beta_radius());
  }
  // Same, with sqrt(beta_t) supplied by the caller.
  double ucb_from_parts(double linear, double norm_inverse, double radius) const;

  // g_t(theta) = lambda theta + sum_s f(<theta, x_s>) x_s
  Vec g(std::span<const double> theta) const;

  // |g_t(theta) - xr_sum|_{V^-1}
  double confidence_distance(std::span<const double> theta) const;

  // |g_t(theta_hat) - xr_sum|_2
  double mle_residual() const;

  std::size_t dim() const { return dim_; }
  std::size_t t() const { return t_; }
  double lambda() const { return options_.lambda; }
  double delta() const { return options_.delta; }
  double m2_bound() const { return options_.m2_bound; }
  const LinkFunction& link() const { return options_.link; }
  const EstimatorOptions& options() const { return options_; }
  const SpdMatrix& V() const { return v_; }
  const Vec& xr_sum() const { return xr_sum_; }
  const Vec& theta_hat() const { return theta_hat_; }

 private:
  double objective(std::span<const double> theta) const;

  std::size_t dim_;
  EstimatorOptions options_;
  SpdMatrix v_;
  Vec xr_sum_;
  Vec theta_hat_;
  std::size_t t_ = 0;
  // Raw history, kept only when the link is not the identity.
  std::vector<Vec> xs_;
  Vec rs_;
};

// Bayesian linear regression with prior N(0, prior_precision^-1 I) and unit
// noise variance.
class GaussianPosterior {
 public:
  GaussianPosterior(std::size_t dim, double prior_precision);

  // A degenerate posterior that always samples `mean`; observe() is a no-op.
  static GaussianPosterior point_mass(Vec mean);

  void observe(std::span<const double> x, double r);

  // mean + C z with C C^T = precision^-1 and z standard normal.
  Vec sample(std::mt19937_64& rng) const;

  const SpdMatrix& precision() const { return precision_; }
  const Vec& weighted_sum() const { return weighted_sum_; }
  const Vec& mean() const { return mean_; }
  bool is_point_mass() const { return point_mass_; }

 private:
  void refresh();

  SpdMatrix precision_;
  Vec weighted_sum_;
  Vec mean_;
  Matrix covariance_factor_;
  bool point_mass_ = false;
};

// Projections of a fixed set of basis vectors (rows of `basis`): dots = B theta
// and gram = B A B^T. Features that are sparse combinations of basis rows can
// then be scored without touching dimension d again.
struct BasisProjection {
  Vec dots;
  Matrix gram;
};

void project_basis(const Matrix& basis, std::span<const double> theta,
                   const Matrix* metric, BasisProjection& out);

}  // namespace rankbandit
