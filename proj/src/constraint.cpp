#include "pdae/constraint.hpp"

#include <cmath>
#include <utility>

#include "pdae/errors.hpp"

namespace pdae {

namespace {

/// hL w - W g on interior nodes, accumulated in extended precision.
Eigen::VectorXd weighted_residual(const BandedOperator& weighted, const AlgState& w, const GridFn& g) {
  require_same_grid(w.w(), g);
  const Grid1D& grid = *g.grid();
  const Eigen::VectorXd interior = w.interior();
  const auto m = static_cast<Eigen::Index>(grid.n_interior());
  const std::size_t p = weighted.bandwidth();
  Eigen::VectorXd r(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto row = static_cast<std::size_t>(i);
    const std::size_t j0 = row >= p ? row - p : 0;
    const std::size_t j1 = std::min(static_cast<std::size_t>(m) - 1, row + p);
    long double acc = -static_cast<long double>(grid.weights()[i + 1]) * g[row + 1];
    for (std::size_t j = j0; j <= j1; ++j) {
      acc += static_cast<long double>(weighted(row, j)) * interior[static_cast<Eigen::Index>(j)];
    }
    r[i] = static_cast<double>(acc);
  }
  return r;
}

}  // namespace

ConstraintSolver::ConstraintSolver(OperatorSetPtr ops, ConstraintSign sign)
    : ops_(std::move(ops)), sign_(sign), weighted_(ops_->weighted_L()), factor_(weighted_) {}

GridFn ConstraintSolver::g_of_v(const DiffState& V) const {
  require_same_grid(*ops_->grid, *V.grid());
  return (V.u + V.v) * sign_value();
}

Eigen::VectorXd ConstraintSolver::solve_weighted(const Eigen::VectorXd& rhs) const { return factor_.solve(rhs); }

AlgState ConstraintSolver::solve(const GridFn& g) const {
  require_same_grid(*ops_->grid, *g.grid());
  const Grid1D& grid = *ops_->grid;
  const auto m = static_cast<Eigen::Index>(grid.n_interior());
  const Eigen::VectorXd rhs = grid.weights().segment(1, m).cwiseProduct(g.values().segment(1, m));
  Eigen::VectorXd w = factor_.solve(rhs);
  // One refinement sweep with an extended-precision residual.
  const AlgState first = AlgState::from_interior(ops_->grid, w);
  w -= factor_.solve(weighted_residual(weighted_, first, g));
  return AlgState::from_interior(ops_->grid, w);
}

double weak_form_residual(const AlgState& w, const GridFn& g, const OperatorSet& ops) {
  require_same_grid(*ops.grid, *g.grid());
  return weighted_residual(ops.weighted_L(), w, g).cwiseAbs().maxCoeff();
}

double constraint_residual(const AlgState& w, const GridFn& g, const ConstraintSolver& solver) {
  require_same_grid(*solver.ops().grid, *g.grid());
  const Eigen::VectorXd r = weighted_residual(solver.ops().weighted_L(), w, g);
  const double dual = std::sqrt(std::max(0.0, r.dot(solver.solve_weighted(r))));
  return dual / (1.0 + l2_norm(g));
}

}  // namespace pdae
