#include "pdae/banded.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdae/errors.hpp"

namespace pdae {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

BandedOperator::BandedOperator(std::size_t size, std::size_t bandwidth)
    : size_(size), bandwidth_(bandwidth), bands_(Eigen::MatrixXd::Zero(idx(2 * bandwidth + 1), idx(size))) {
  if (size == 0) {
    throw DomainError("BandedOperator: empty matrix");
  }
}

BandedOperator BandedOperator::identity(std::size_t size, std::size_t bandwidth) {
  BandedOperator id(size, bandwidth);
  for (std::size_t i = 0; i < size; ++i) {
    id.set(i, i, 1.0);
  }
  return id;
}

bool BandedOperator::in_band(std::size_t i, std::size_t j) const {
  return i < size_ && j < size_ && (i > j ? i - j : j - i) <= bandwidth_;
}

double BandedOperator::operator()(std::size_t i, std::size_t j) const {
  if (!in_band(i, j)) {
    return 0.0;
  }
  return bands_(idx(bandwidth_ + j - i), idx(i));
}

void BandedOperator::set(std::size_t i, std::size_t j, double value) {
  if (!in_band(i, j)) {
    throw DimensionError("BandedOperator: entry (" + std::to_string(i) + ", " + std::to_string(j) +
                         ") outside the band");
  }
  bands_(idx(bandwidth_ + j - i), idx(i)) = value;
}

void BandedOperator::add(std::size_t i, std::size_t j, double value) { set(i, j, (*this)(i, j) + value); }

Eigen::VectorXd BandedOperator::apply(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != size_) {
    throw DimensionError("BandedOperator::apply: size mismatch");
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(idx(size_));
  for (std::size_t i = 0; i < size_; ++i) {
    const std::size_t j0 = i >= bandwidth_ ? i - bandwidth_ : 0;
    const std::size_t j1 = std::min(size_ - 1, i + bandwidth_);
    double acc = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) {
      acc += bands_(idx(bandwidth_ + j - i), idx(i)) * x[idx(j)];
    }
    y[idx(i)] = acc;
  }
  return y;
}

Eigen::VectorXd BandedOperator::apply_extended(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != size_) {
    throw DimensionError("BandedOperator::apply_extended: size mismatch");
  }
  Eigen::VectorXd y(idx(size_));
  for (std::size_t i = 0; i < size_; ++i) {
    const std::size_t j0 = i >= bandwidth_ ? i - bandwidth_ : 0;
    const std::size_t j1 = std::min(size_ - 1, i + bandwidth_);
    long double acc = 0.0L;
    for (std::size_t j = j0; j <= j1; ++j) {
      acc += static_cast<long double>(bands_(idx(bandwidth_ + j - i), idx(i))) * x[idx(j)];
    }
    y[idx(i)] = static_cast<double>(acc);
  }
  return y;
}

Eigen::MatrixXd BandedOperator::to_dense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(idx(size_), idx(size_));
  for (std::size_t i = 0; i < size_; ++i) {
    const std::size_t j0 = i >= bandwidth_ ? i - bandwidth_ : 0;
    const std::size_t j1 = std::min(size_ - 1, i + bandwidth_);
    for (std::size_t j = j0; j <= j1; ++j) {
      dense(idx(i), idx(j)) = (*this)(i, j);
    }
  }
  return dense;
}

BandedOperator BandedOperator::shifted(double alpha, double beta) const {
  BandedOperator out = *this;
  out.bands_ *= beta;
  out.bands_.row(idx(bandwidth_)).array() += alpha;
  return out;
}

BandedOperator BandedOperator::row_scaled(const Eigen::VectorXd& scale) const {
  if (static_cast<std::size_t>(scale.size()) != size_) {
    throw DimensionError("BandedOperator::row_scaled: size mismatch");
  }
  BandedOperator out = *this;
  for (std::size_t i = 0; i < size_; ++i) {
    out.bands_.col(idx(i)) *= scale[idx(i)];
  }
  return out;
}

BandedOperator BandedOperator::operator+(const BandedOperator& other) const {
  if (other.size_ != size_) {
    throw DimensionError("BandedOperator::operator+: size mismatch");
  }
  BandedOperator out(size_, std::max(bandwidth_, other.bandwidth_));
  for (std::size_t i = 0; i < size_; ++i) {
    const std::size_t j0 = i >= out.bandwidth_ ? i - out.bandwidth_ : 0;
    const std::size_t j1 = std::min(size_ - 1, i + out.bandwidth_);
    for (std::size_t j = j0; j <= j1; ++j) {
      out.set(i, j, (*this)(i, j) + other(i, j));
    }
  }
  return out;
}

Eigen::VectorXd BandedOperator::solve(const Eigen::VectorXd& b) const {
  if (static_cast<std::size_t>(b.size()) != size_) {
    throw DimensionError("BandedOperator::solve: size mismatch");
  }
  // Without row exchanges the fill stays inside the band.
  Eigen::MatrixXd a = bands_;
  const auto bw = idx(bandwidth_);
  auto at = [&](Eigen::Index i, Eigen::Index j) -> double& { return a(bw + j - i, i); };
  Eigen::VectorXd x = b;
  const auto n = idx(size_);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double pivot = at(k, k);
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw NumericalError("BandedOperator::solve: zero pivot at row " + std::to_string(k));
    }
    const Eigen::Index last = std::min(n - 1, k + bw);
    for (Eigen::Index i = k + 1; i <= last; ++i) {
      const double factor = at(i, k) / pivot;
      if (factor == 0.0) {
        continue;
      }
      for (Eigen::Index j = k; j <= last; ++j) {
        at(i, j) -= factor * at(k, j);
      }
      x[i] -= factor * x[k];
    }
  }
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    const Eigen::Index last = std::min(n - 1, k + bw);
    double acc = x[k];
    for (Eigen::Index j = k + 1; j <= last; ++j) {
      acc -= at(k, j) * x[j];
    }
    x[k] = acc / at(k, k);
  }
  return x;
}

BandedCholesky::BandedCholesky(const BandedOperator& spd)
    : size_(spd.size()),
      bandwidth_(spd.bandwidth()),
      upper_(Eigen::MatrixXd::Zero(idx(spd.bandwidth() + 1), idx(spd.size()))) {
  const std::size_t n = size_;
  const std::size_t p = bandwidth_;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t i0 = j >= p ? j - p : 0;
    for (std::size_t i = i0; i <= j; ++i) {
      // R(i, j) = (A(i, j) - sum_k R(k, i) R(k, j)) / R(i, i)
      double acc = spd(i, j);
      const std::size_t k0 = j >= p ? j - p : 0;
      for (std::size_t k = k0; k < i; ++k) {
        acc -= upper_(idx(i - k), idx(k)) * upper_(idx(j - k), idx(k));
      }
      if (i == j) {
        if (!(acc > 0.0) || !std::isfinite(acc)) {
          throw NumericalError("BandedCholesky: matrix is not positive definite (pivot " + std::to_string(j) + ")");
        }
        upper_(0, idx(j)) = std::sqrt(acc);
      } else {
        upper_(idx(j - i), idx(i)) = acc / upper_(0, idx(i));
      }
    }
  }
}

Eigen::VectorXd BandedCholesky::solve(const Eigen::VectorXd& b) const {
  if (static_cast<std::size_t>(b.size()) != size_) {
    throw DimensionError("BandedCholesky::solve: size mismatch");
  }
  const std::size_t n = size_;
  const std::size_t p = bandwidth_;
  Eigen::VectorXd y = b;
  // R^T y = b
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k0 = i >= p ? i - p : 0;
    double acc = y[idx(i)];
    for (std::size_t k = k0; k < i; ++k) {
      acc -= upper_(idx(i - k), idx(k)) * y[idx(k)];
    }
    y[idx(i)] = acc / upper_(0, idx(i));
  }
  // R x = y
  for (std::size_t ii = n; ii-- > 0;) {
    const std::size_t k1 = std::min(n - 1, ii + p);
    double acc = y[idx(ii)];
    for (std::size_t k = ii + 1; k <= k1; ++k) {
      acc -= upper_(idx(k - ii), idx(ii)) * y[idx(k)];
    }
    y[idx(ii)] = acc / upper_(0, idx(ii));
  }
  return y;
}

}  // namespace pdae
