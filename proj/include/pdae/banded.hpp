#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace pdae {

/// Square matrix with `bandwidth` sub- and super-diagonals.
///
/// Entry (i, j) with |i - j| <= bandwidth is stored at bands_(bandwidth + j - i, i),
/// so each column of `bands_` holds one matrix row.
class BandedOperator {
 public:
  BandedOperator(std::size_t size, std::size_t bandwidth);

  static BandedOperator identity(std::size_t size, std::size_t bandwidth = 0);

  std::size_t size() const { return size_; }
  std::size_t bandwidth() const { return bandwidth_; }

  double operator()(std::size_t i, std::size_t j) const;
  /// Only entries inside the band may be written.
  void set(std::size_t i, std::size_t j, double value);
  void add(std::size_t i, std::size_t j, double value);

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// Same product, accumulated in extended precision.
  Eigen::VectorXd apply_extended(const Eigen::VectorXd& x) const;

  Eigen::MatrixXd to_dense() const;

  /// alpha * I + beta * this
  BandedOperator shifted(double alpha, double beta) const;
  /// diag(scale) * this
  BandedOperator row_scaled(const Eigen::VectorXd& scale) const;
  BandedOperator operator+(const BandedOperator& other) const;

  /// Solves this * x = b by banded Gaussian elimination without pivoting.
  /// Intended for diagonally dominant or symmetric positive definite matrices.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  bool in_band(std::size_t i, std::size_t j) const;

  std::size_t size_;
  std::size_t bandwidth_;
  Eigen::MatrixXd bands_;
};

/// Cholesky factor R^T R of a symmetric positive definite banded matrix.
/// Only the upper band of the input is read.
class BandedCholesky {
 public:
  explicit BandedCholesky(const BandedOperator& spd);

  std::size_t size() const { return size_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  std::size_t size_;
  std::size_t bandwidth_;
  // upper_(k, i) = R(i, i + k)
  Eigen::MatrixXd upper_;
};

}  // namespace pdae
