#include "rankbandit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rankbandit/errors.hpp"
#include "rankbandit/kernels.hpp"

namespace rankbandit {
namespace {

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << a.rows() << "x" << a.cols();
    throw std::invalid_argument(os.str());
  }
}

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << got << " vs " << want << ")";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

Matrix Matrix::identity(std::size_t n, double scale) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = scale;
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  require_dim(a.cols(), b.rows(), "multiply");
  Matrix out(a.rows(), b.cols());
  const auto& k = simd::kernels();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t p = 0; p < a.cols(); ++p)
      k.axpy(a(i, p), b.row(p).data(), out.row(i).data(), b.cols());
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Vec multiply(const Matrix& a, std::span<const double> x) {
  require_dim(x.size(), a.cols(), "matrix-vector product");
  Vec y(a.rows());
  simd::kernels().gemv(a.data(), a.rows(), a.cols(), x.data(), y.data());
  return y;
}

double dot(std::span<const double> x, std::span<const double> y) {
  require_dim(x.size(), y.size(), "dot");
  return simd::kernels().dot(x.data(), y.data(), x.size());
}

double norm2(std::span<const double> x) {
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  // rescale only when squaring would overflow or underflow
  if (scale < 1e150 && scale > 1e-150) return std::sqrt(dot(x, x));
  double s = 0.0;
  for (double v : x) s += (v / scale) * (v / scale);
  return scale * std::sqrt(s);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_dim(a.rows(), b.rows(), "max_abs_diff");
  require_dim(a.cols(), b.cols(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

Matrix cholesky_lower(const Matrix& a) {
  require_square(a, "cholesky_lower");
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      std::ostringstream os;
      os << "matrix is not positive definite: pivot " << j << " = " << diag;
      throw NumericError(os.str());
    }
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

Vec cholesky_solve(const Matrix& lower, std::span<const double> b) {
  const std::size_t n = lower.rows();
  require_dim(b.size(), n, "cholesky_solve");
  Vec y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= lower(i, k) * y[k];
    y[i] /= lower(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) y[ii] -= lower(k, ii) * y[k];
    y[ii] /= lower(ii, ii);
  }
  return y;
}

Matrix spd_inverse_from_cholesky(const Matrix& lower) {
  const std::size_t n = lower.rows();
  // W = L^-1 (lower triangular), inverse = W^T W
  Matrix w(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    w(c, c) = 1.0 / lower(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = c; k < i; ++k) s -= lower(i, k) * w(k, c);
      w(i, c) = s / lower(i, i);
    }
  }
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = j; k < n; ++k) s += w(k, i) * w(k, j);
      inv(i, j) = s;
      inv(j, i) = s;
    }
  return inv;
}

SpdMatrix SpdMatrix::scaled_identity(std::size_t dim, double scale) {
  if (dim == 0) throw std::invalid_argument("SpdMatrix: dimension must be positive");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("SpdMatrix: scale must be positive and finite");
  SpdMatrix m;
  m.entries_ = Matrix::identity(dim, scale);
  m.inverse_ = Matrix::identity(dim, 1.0 / scale);
  m.log_det_ = static_cast<double>(dim) * std::log(scale);
  m.scratch_.assign(dim, 0.0);
  return m;
}

SpdMatrix SpdMatrix::from_matrix(const Matrix& entries) {
  require_square(entries, "SpdMatrix");
  if (entries.rows() == 0) throw std::invalid_argument("SpdMatrix: empty matrix");
  double scale = 0.0;
  for (std::size_t i = 0; i < entries.rows(); ++i)
    for (std::size_t j = 0; j < entries.cols(); ++j)
      scale = std::max(scale, std::abs(entries(i, j)));
  for (std::size_t i = 0; i < entries.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(entries(i, j) - entries(j, i)) > 1e-12 * scale)
        throw std::invalid_argument("SpdMatrix: input is not symmetric");
  SpdMatrix m;
  m.entries_ = entries;
  m.scratch_.assign(entries.rows(), 0.0);
  m.refactor();
  return m;
}

void SpdMatrix::refactor() {
  const Matrix l = cholesky_lower(entries_);
  inverse_ = spd_inverse_from_cholesky(l);
  double s = 0.0;
  for (std::size_t i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
  log_det_ = 2.0 * s;
  pending_ = 0;
}

void SpdMatrix::rank_one_update(std::span<const double> b) {
  require_dim(b.size(), dim(), "rank_one_update");
  if (std::all_of(b.begin(), b.end(), [](double x) { return x == 0.0; })) return;
  const auto& k = simd::kernels();
  const std::size_t n = dim();
  k.gemv(inverse_.data(), n, n, b.data(), scratch_.data());
  const double q = k.dot(b.data(), scratch_.data(), n);
  if (!std::isfinite(q) || q < 0.0) {
    std::ostringstream os;
    os << "rank-one update lost positive definiteness: b^T V^-1 b = " << q;
    throw NumericError(os.str());
  }
  k.sym_rank_one(entries_.data(), n, 1.0, b.data());
  k.sym_rank_one(inverse_.data(), n, -1.0 / (1.0 + q), scratch_.data());
  log_det_ += std::log1p(q);
  if (++pending_ >= kRefactorInterval) refactor();
}

double SpdMatrix::inverse_quadratic(std::span<const double> b) const {
  require_dim(b.size(), dim(), "inverse_quadratic");
  Vec tmp(dim());
  const auto& k = simd::kernels();
  k.gemv(inverse_.data(), dim(), dim(), b.data(), tmp.data());
  return k.dot(b.data(), tmp.data(), dim());
}

double mahalanobis(std::span<const double> x, const SpdMatrix& v, NormMode mode) {
  require_dim(x.size(), v.dim(), "mahalanobis");
  const Matrix& m = mode == NormMode::V ? v.entries() : v.inverse();
  Vec tmp(x.size());
  const auto& k = simd::kernels();
  k.gemv(m.data(), m.rows(), m.cols(), x.data(), tmp.data());
  return std::sqrt(std::max(0.0, k.dot(x.data(), tmp.data(), x.size())));
}

}  // namespace rankbandit
