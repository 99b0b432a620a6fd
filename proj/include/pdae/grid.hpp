#pragma once

#include <cstddef>
#include <functional>
#include <memory>

#include <Eigen/Dense>

namespace pdae {

/// Uniform node-centred mesh on the unit interval with trapezoidal weights.
class Grid1D {
 public:
  explicit Grid1D(std::size_t n_cells);

  std::size_t n_cells() const { return n_cells_; }
  std::size_t n_nodes() const { return n_cells_ + 1; }
  std::size_t n_interior() const { return n_cells_ - 1; }
  double h() const { return h_; }

  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  bool operator==(const Grid1D& other) const { return n_cells_ == other.n_cells_; }

 private:
  std::size_t n_cells_;
  double h_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
};

using GridPtr = std::shared_ptr<const Grid1D>;

GridPtr make_grid(std::size_t n_cells);

/// A scalar field sampled at the grid nodes. Values are finite by construction.
class GridFn {
 public:
  GridFn(GridPtr grid, Eigen::VectorXd values);

  static GridFn zeros(GridPtr grid);
  static GridFn constant(GridPtr grid, double value);
  static GridFn sample(GridPtr grid, const std::function<double(double)>& f);

  const GridPtr& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

  double max_abs() const { return values_.cwiseAbs().maxCoeff(); }

  GridFn operator+(const GridFn& other) const;
  GridFn operator-(const GridFn& other) const;
  GridFn operator*(double alpha) const;
  GridFn operator-() const { return *this * -1.0; }
  /// Pointwise product.
  GridFn cwise_product(const GridFn& other) const;

 private:
  GridPtr grid_;
  Eigen::VectorXd values_;
};

inline GridFn operator*(double alpha, const GridFn& f) { return f * alpha; }

/// Throws DimensionError unless both functions live on the same grid.
void require_same_grid(const GridFn& f, const GridFn& g);
void require_same_grid(const Grid1D& a, const Grid1D& b);

/// Trapezoidal L2 inner product sum_i w_i f_i g_i.
double l2_inner(const GridFn& f, const GridFn& g);
double l2_norm(const GridFn& f);

/// The differential pair V = (u, v).
struct DiffState {
  DiffState(GridFn u_, GridFn v_);

  static DiffState zeros(GridPtr grid);

  const GridPtr& grid() const { return u.grid(); }

  DiffState operator+(const DiffState& other) const { return {u + other.u, v + other.v}; }
  DiffState operator-(const DiffState& other) const { return {u - other.u, v - other.v}; }
  DiffState operator*(double alpha) const { return {u * alpha, v * alpha}; }

  double max_abs() const;

  GridFn u;
  GridFn v;
};

inline DiffState operator*(double alpha, const DiffState& s) { return s * alpha; }

/// The algebraic field w. It carries clamped boundary values w(0) = w(1) = 0.
class AlgState {
 public:
  explicit AlgState(GridFn w);

  static AlgState zeros(GridPtr grid);
  /// Builds a clamped field from its interior node values.
  static AlgState from_interior(GridPtr grid, const Eigen::VectorXd& interior);

  const GridFn& w() const { return w_; }
  const GridPtr& grid() const { return w_.grid(); }
  Eigen::VectorXd interior() const;

 private:
  GridFn w_;
};

/// U = (V, w) at time t.
struct FullState {
  FullState(DiffState V_, AlgState w_, double t_ = 0.0);

  const GridPtr& grid() const { return V.grid(); }

  DiffState V;
  AlgState w;
  double t;
};

/// (int u^2 + int v^2)^(1/2)
double norm_E(const DiffState& V);

}  // namespace pdae
