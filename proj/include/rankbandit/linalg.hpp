#pragma once

// Small dense linear algebra for the per-position estimators: row-major
// matrices, Cholesky factorization, and an SPD matrix that carries its
// inverse and log-determinant through rank-one updates.

#include <cstddef>
#include <span>
#include <vector>

namespace rankbandit {

using Vec = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n, double scale = 1.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Vec multiply(const Matrix& a, std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double max_abs_diff(const Matrix& a, const Matrix& b);

// Lower-triangular L with L L^T = a. Throws NumericError naming the first
// non-positive pivot.
Matrix cholesky_lower(const Matrix& a);

// Solves (L L^T) x = b given the Cholesky factor.
Vec cholesky_solve(const Matrix& lower, std::span<const double> b);

// Inverse of an SPD matrix via its Cholesky factor.
Matrix spd_inverse_from_cholesky(const Matrix& lower);

class SpdMatrix {
 public:
  // Re-factorize from scratch after this many incremental updates.
  static constexpr std::size_t kRefactorInterval = 512;

  SpdMatrix() = default;

  static SpdMatrix scaled_identity(std::size_t dim, double scale);

  // Validates symmetry and positive definiteness; throws otherwise.
  static SpdMatrix from_matrix(const Matrix& entries);

  std::size_t dim() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  const Matrix& inverse() const { return inverse_; }
  double log_det() const { return log_det_; }
  std::size_t updates_since_refactor() const { return pending_; }

  // V <- V + b b^T. Refreshes the inverse with the rank-one inverse identity
  // and the log-determinant with det(V + bb^T) = det(V)(1 + |b|^2_{V^-1}).
  void rank_one_update(std::span<const double> b);

  [[nodiscard]] SpdMatrix updated(std::span<const double> b) const {
    SpdMatrix copy = *this;
    copy.rank_one_update(b);
    return copy;
  }

  // |b|^2_{V^-1}
  double inverse_quadratic(std::span<const double> b) const;

 private:
  void refactor();

  Matrix entries_;
  Matrix inverse_;
  double log_det_ = 0.0;
  std::size_t pending_ = 0;
  Vec scratch_;
};

enum class NormMode { V, V_inverse };

// sqrt(x^T M x) with M = V or V^-1.
double mahalanobis(std::span<const double> x, const SpdMatrix& v, NormMode mode);

}  // namespace rankbandit
