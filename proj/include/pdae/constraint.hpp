#pragma once

#include "pdae/banded.hpp"
#include "pdae/grid.hpp"
#include "pdae/operators.hpp"

namespace pdae {

/// Sign s in the constraint w_xxxx + w = s (u + v).
///
/// The split form 0 = L(w) - G(V) with G(V) = u + v gives s = +1, while the
/// component equation 0 = w_xxxx + w + u + v gives s = -1.
enum class ConstraintSign : int { minus = -1, plus = 1 };

/// Factorizes the weighted constraint operator once and solves L w = g on demand.
class ConstraintSolver {
 public:
  /// Throws NumericalError if the weighted operator is not positive definite.
  ConstraintSolver(OperatorSetPtr ops, ConstraintSign sign = ConstraintSign::minus);

  const OperatorSet& ops() const { return *ops_; }
  const OperatorSetPtr& ops_ptr() const { return ops_; }
  ConstraintSign sign() const { return sign_; }
  double sign_value() const { return static_cast<double>(static_cast<int>(sign_)); }

  /// sign * (u + v)
  GridFn g_of_v(const DiffState& V) const;

  /// Solves w_xxxx + w = g on interior nodes with clamped ends. Non-finite data
  /// cannot reach here: GridFn rejects it with InputError.
  AlgState solve(const GridFn& g) const;

  /// Applies the inverse of the weighted form to a weighted residual vector.
  Eigen::VectorXd solve_weighted(const Eigen::VectorXd& rhs) const;

 private:
  OperatorSetPtr ops_;
  ConstraintSign sign_;
  BandedOperator weighted_;
  BandedCholesky factor_;
};

/// max_i |a(w, phi_i) - l(phi_i)| over the interior nodal basis, where
/// a(w, phi) = int w_xx phi_xx + int w phi and l(phi) = int g phi.
double weak_form_residual(const AlgState& w, const GridFn& g, const OperatorSet& ops);

/// Residual of L w = g in the discrete dual (H^-2) norm, relative to 1 + ||g||_L2:
///   sqrt(r^T (hL)^{-1} r) / (1 + ||g||),  r = hL w - h g.
double constraint_residual(const AlgState& w, const GridFn& g, const ConstraintSolver& solver);

}  // namespace pdae
