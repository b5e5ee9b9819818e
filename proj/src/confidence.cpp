#include "rankbandit/confidence.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rankbandit/errors.hpp"
#include "rankbandit/kernels.hpp"

namespace rankbandit {
namespace {

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << got << " vs " << want << ")";
    throw std::invalid_argument(os.str());
  }
}

void require_finite(std::span<const double> x, double r, const char* what) {
  if (!std::isfinite(r)) throw std::invalid_argument(std::string(what) + ": reward is not finite");
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": feature is not finite");
}

// log(1 + e^z), the antiderivative of the logistic function
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

PositionEstimator::PositionEstimator(std::size_t dim, EstimatorOptions options)
    : dim_(dim),
      options_(options),
      v_(SpdMatrix::scaled_identity(dim, options.lambda)),
      xr_sum_(dim, 0.0),
      theta_hat_(dim, 0.0) {
  if (!(options.delta > 0.0 && options.delta < 1.0))
    throw std::invalid_argument("PositionEstimator: delta must lie in (0, 1)");
  if (!(options.m2_bound >= 0.0)) throw std::invalid_argument("PositionEstimator: m2_bound < 0");
  if (!(options.c1 > 0.0)) throw std::invalid_argument("PositionEstimator: c1 must be positive");
}

void PositionEstimator::observe(std::span<const double> x, double r) {
  require_dim(x.size(), dim_, "PositionEstimator::observe");
  require_finite(x, r, "PositionEstimator::observe");
  v_.rank_one_update(x);
  simd::kernels().axpy(r, x.data(), xr_sum_.data(), dim_);
  ++t_;
  if (options_.link.kind != LinkKind::identity) {
    xs_.emplace_back(x.begin(), x.end());
    rs_.push_back(r);
  }
  solve_mle();
}

Vec PositionEstimator::g(std::span<const double> theta) const {
  require_dim(theta.size(), dim_, "PositionEstimator::g");
  if (options_.link.kind == LinkKind::identity) return multiply(v_.entries(), theta);
  Vec out(theta.begin(), theta.end());
  for (auto& v : out) v *= options_.lambda;
  const auto& k = simd::kernels();
  for (const Vec& x : xs_)
    k.axpy(options_.link.value(k.dot(theta.data(), x.data(), dim_)), x.data(), out.data(), dim_);
  return out;
}

double PositionEstimator::objective(std::span<const double> theta) const {
  const auto& k = simd::kernels();
  double j = 0.5 * options_.lambda * k.dot(theta.data(), theta.data(), dim_) -
             k.dot(theta.data(), xr_sum_.data(), dim_);
  for (const Vec& x : xs_) j += softplus(k.dot(theta.data(), x.data(), dim_));
  return j;
}

const Vec& PositionEstimator::solve_mle() {
  if (options_.link.kind == LinkKind::identity) {
    theta_hat_ = multiply(v_.inverse(), xr_sum_);
    return theta_hat_;
  }
  if (options_.link.kind != LinkKind::logistic)
    throw std::invalid_argument("solve_mle: unsupported link");

  const auto& k = simd::kernels();
  Vec theta = theta_hat_;
  double residual = 0.0;
  for (int iter = 0; iter <= kMaxNewtonIterations; ++iter) {
    Vec grad = g(theta);
    for (std::size_t i = 0; i < dim_; ++i) grad[i] -= xr_sum_[i];
    residual = norm2(grad);
    if (residual <= kMleTolerance) {
      theta_hat_ = std::move(theta);
      return theta_hat_;
    }
    if (iter == kMaxNewtonIterations) break;

    Matrix hessian = Matrix::identity(dim_, options_.lambda);
    for (const Vec& x : xs_)
      k.sym_rank_one(hessian.data(), dim_,
                     options_.link.derivative(k.dot(theta.data(), x.data(), dim_)), x.data());
    const Vec step = cholesky_solve(cholesky_lower(hessian), grad);

    // Near the optimum objective differences drown in rounding, so a step
    // that shrinks the gradient is accepted as well.
    const double current = objective(theta);
    double scale = 1.0;
    Vec next(dim_);
    for (int halvings = 0; halvings < 60; ++halvings) {
      for (std::size_t i = 0; i < dim_; ++i) next[i] = theta[i] - scale * step[i];
      if (objective(next) <= current) break;
      Vec next_grad = g(next);
      for (std::size_t i = 0; i < dim_; ++i) next_grad[i] -= xr_sum_[i];
      if (norm2(next_grad) < residual) break;
      scale *= 0.5;
    }
    theta = next;
  }
  std::ostringstream os;
  os << "logistic MLE did not converge after " << kMaxNewtonIterations
     << " Newton iterations; residual " << residual;
  throw NumericError(os.str());
}

double PositionEstimator::beta_radius() const {
  const double d = static_cast<double>(dim_);
  const double log_ratio = v_.log_det() - d * std::log(options_.lambda);
  const double inner = 2.0 * std::log(1.0 / options_.delta) + std::max(0.0, log_ratio);
  return std::sqrt(options_.lambda) * options_.m2_bound + std::sqrt(inner);
}

double PositionEstimator::ucb_from_parts(double linear, double norm_inverse,
                                         double radius) const {
  if (options_.link.kind == LinkKind::identity) return linear + radius * norm_inverse;
  return options_.link.value(linear + (2.0 * radius / options_.c1) * norm_inverse);
}

double PositionEstimator::ucb_value(std::span<const double> x) const {
  require_dim(x.size(), dim_, "ucb_value");
  return ucb_from_parts(dot(theta_hat_, x), mahalanobis(x, v_, NormMode::V_inverse));
}

double PositionEstimator::confidence_distance(std::span<const double> theta) const {
  Vec diff = g(theta);
  for (std::size_t i = 0; i < dim_; ++i) diff[i] -= xr_sum_[i];
  return mahalanobis(diff, v_, NormMode::V_inverse);
}

double PositionEstimator::mle_residual() const {
  Vec diff = g(theta_hat_);
  for (std::size_t i = 0; i < dim_; ++i) diff[i] -= xr_sum_[i];
  return norm2(diff);
}

GaussianPosterior::GaussianPosterior(std::size_t dim, double prior_precision)
    : precision_(SpdMatrix::scaled_identity(dim, prior_precision)),
      weighted_sum_(dim, 0.0),
      mean_(dim, 0.0) {
  refresh();
}

GaussianPosterior GaussianPosterior::point_mass(Vec mean) {
  GaussianPosterior p(mean.size(), 1.0);
  p.mean_ = std::move(mean);
  p.point_mass_ = true;
  return p;
}

void GaussianPosterior::observe(std::span<const double> x, double r) {
  require_dim(x.size(), mean_.size(), "GaussianPosterior::observe");
  require_finite(x, r, "GaussianPosterior::observe");
  if (point_mass_) return;
  precision_.rank_one_update(x);
  simd::kernels().axpy(r, x.data(), weighted_sum_.data(), x.size());
  refresh();
}

void GaussianPosterior::refresh() {
  mean_ = multiply(precision_.inverse(), weighted_sum_);
  covariance_factor_ = cholesky_lower(precision_.inverse());
}

Vec GaussianPosterior::sample(std::mt19937_64& rng) const {
  if (point_mass_) return mean_;
  const std::size_t n = mean_.size();
  std::normal_distribution<double> normal;
  Vec z(n);
  for (auto& v : z) v = normal(rng);
  Vec out = mean_;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k <= i; ++k) s += covariance_factor_(i, k) * z[k];
    out[i] += s;
  }
  return out;
}

void project_basis(const Matrix& basis, std::span<const double> theta, const Matrix* metric,
                   BasisProjection& out) {
  const std::size_t n = basis.rows();
  const std::size_t d = basis.cols();
  require_dim(theta.size(), d, "project_basis");
  const auto& k = simd::kernels();
  out.dots.resize(n);
  k.gemv(basis.data(), n, d, theta.data(), out.dots.data());
  if (metric == nullptr) return;
  require_dim(metric->rows(), d, "project_basis metric");
  // row m of (B A) is A b_m since A is symmetric
  Matrix ba(n, d);
  for (std::size_t m = 0; m < n; ++m) k.gemv(metric->data(), d, d, basis.row(m).data(), ba.row(m).data());
  if (out.gram.rows() != n || out.gram.cols() != n) out.gram = Matrix(n, n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t q = m; q < n; ++q) {
      const double s = k.dot(ba.row(m).data(), basis.row(q).data(), d);
      out.gram(m, q) = s;
      out.gram(q, m) = s;
    }
}

}  // namespace rankbandit
