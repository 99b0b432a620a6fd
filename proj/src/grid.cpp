#include "pdae/grid.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "pdae/errors.hpp"

namespace pdae {

Grid1D::Grid1D(std::size_t n_cells) : n_cells_(n_cells) {
  if (n_cells == 0) {
    throw DomainError("Grid1D: n_cells must be positive");
  }
  h_ = 1.0 / static_cast<double>(n_cells);
  const auto n = static_cast<Eigen::Index>(n_cells + 1);
  nodes_.resize(n);
  weights_.setConstant(n, h_);
  for (Eigen::Index i = 0; i < n; ++i) {
    nodes_[i] = static_cast<double>(i) * h_;
  }
  nodes_[n - 1] = 1.0;
  weights_[0] = 0.5 * h_;
  weights_[n - 1] = 0.5 * h_;
}

GridPtr make_grid(std::size_t n_cells) { return std::make_shared<const Grid1D>(n_cells); }

GridFn::GridFn(GridPtr grid, Eigen::VectorXd values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) {
    throw InputError("GridFn: null grid");
  }
  if (static_cast<std::size_t>(values_.size()) != grid_->n_nodes()) {
    throw DimensionError("GridFn: expected " + std::to_string(grid_->n_nodes()) + " values, got " +
                         std::to_string(values_.size()));
  }
  if (!values_.allFinite()) {
    throw InputError("GridFn: non-finite value");
  }
}

GridFn GridFn::zeros(GridPtr grid) {
  const auto n = static_cast<Eigen::Index>(grid->n_nodes());
  return {std::move(grid), Eigen::VectorXd::Zero(n)};
}

GridFn GridFn::constant(GridPtr grid, double value) {
  const auto n = static_cast<Eigen::Index>(grid->n_nodes());
  return {std::move(grid), Eigen::VectorXd::Constant(n, value)};
}

GridFn GridFn::sample(GridPtr grid, const std::function<double(double)>& f) {
  Eigen::VectorXd values = grid->nodes().unaryExpr(f);
  return {std::move(grid), std::move(values)};
}

GridFn GridFn::operator+(const GridFn& other) const {
  require_same_grid(*this, other);
  return {grid_, values_ + other.values_};
}

GridFn GridFn::operator-(const GridFn& other) const {
  require_same_grid(*this, other);
  return {grid_, values_ - other.values_};
}

GridFn GridFn::operator*(double alpha) const { return {grid_, alpha * values_}; }

GridFn GridFn::cwise_product(const GridFn& other) const {
  require_same_grid(*this, other);
  return {grid_, values_.cwiseProduct(other.values_)};
}

void require_same_grid(const Grid1D& a, const Grid1D& b) {
  if (!(a == b)) {
    throw DimensionError("grid mismatch: " + std::to_string(a.n_cells()) + " vs " + std::to_string(b.n_cells()) +
                         " cells");
  }
}

void require_same_grid(const GridFn& f, const GridFn& g) { require_same_grid(*f.grid(), *g.grid()); }

double l2_inner(const GridFn& f, const GridFn& g) {
  require_same_grid(f, g);
  return (f.grid()->weights().array() * f.values().array() * g.values().array()).sum();
}

double l2_norm(const GridFn& f) { return std::sqrt(l2_inner(f, f)); }

DiffState::DiffState(GridFn u_, GridFn v_) : u(std::move(u_)), v(std::move(v_)) { require_same_grid(u, v); }

DiffState DiffState::zeros(GridPtr grid) { return {GridFn::zeros(grid), GridFn::zeros(grid)}; }

double DiffState::max_abs() const { return std::max(u.max_abs(), v.max_abs()); }

AlgState::AlgState(GridFn w) : w_(std::move(w)) {
  const auto last = w_.size() - 1;
  if (w_[0] != 0.0 || w_[last] != 0.0) {
    throw InputError("AlgState: clamped field must vanish at both boundary nodes");
  }
}

AlgState AlgState::zeros(GridPtr grid) { return AlgState(GridFn::zeros(std::move(grid))); }

AlgState AlgState::from_interior(GridPtr grid, const Eigen::VectorXd& interior) {
  if (static_cast<std::size_t>(interior.size()) != grid->n_interior()) {
    throw DimensionError("AlgState: interior size mismatch");
  }
  Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid->n_nodes()));
  values.segment(1, interior.size()) = interior;
  return AlgState(GridFn(std::move(grid), std::move(values)));
}

Eigen::VectorXd AlgState::interior() const {
  return w_.values().segment(1, static_cast<Eigen::Index>(w_.grid()->n_interior()));
}

FullState::FullState(DiffState V_, AlgState w_, double t_) : V(std::move(V_)), w(std::move(w_)), t(t_) {
  require_same_grid(V.u, w.w());
  if (!(t >= 0.0)) {
    throw DomainError("FullState: time must be non-negative");
  }
}

double norm_E(const DiffState& V) { return std::sqrt(l2_inner(V.u, V.u) + l2_inner(V.v, V.v)); }

}  // namespace pdae
