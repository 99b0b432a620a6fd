#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "pdae/constraint.hpp"
#include "pdae/grid.hpp"
#include "pdae/operators.hpp"

namespace pdae {

/// F(U) = (w v + u w, w v + u), evaluated pointwise.
DiffState nonlinearity_f(const FullState& U);

/// Right-hand side F : X -> E of the differential equation.
using Nonlinearity = std::function<DiffState(const FullState&)>;

enum class NonlinearityKind { model, square_test, zero };

/// square_test is (u^2, v^2) and zero is identically 0; both ignore w.
Nonlinearity make_nonlinearity(NonlinearityKind kind);

/// K evaluated at V together with the constraint-consistent w it used.
struct KEval {
  DiffState k;
  AlgState w;
};

/// The reduced right-hand side K(V) = F(V, L^{-1} G(V)).
class ReducedRhs {
 public:
  ReducedRhs(ConstraintSolver solver, Nonlinearity f = nonlinearity_f);

  const ConstraintSolver& solver() const { return solver_; }
  const OperatorSet& ops() const { return solver_.ops(); }
  const OperatorSetPtr& ops_ptr() const { return solver_.ops_ptr(); }
  const GridPtr& grid() const { return solver_.ops().grid; }

  /// w = L^{-1} G(V)
  AlgState constraint_w(const DiffState& V) const;
  KEval evaluate(const DiffState& V, double t = 0.0) const;
  DiffState f(const FullState& U) const { return f_(U); }

 private:
  ConstraintSolver solver_;
  Nonlinearity f_;
};

KEval reduced_k(const DiffState& V, const ReducedRhs& rhs);

enum class LipschitzTarget { F, G, LInverse, K };

std::string to_string(LipschitzTarget target);

/// Empirical local Lipschitz constant on a ball.
///
/// For K the component constants are measured on the same sample pairs: L for F on
/// the lifted pairs (V, L^{-1}G(V)) in the X norm, L1 for L^{-1} from L2 into the
/// bending seminorm, and L2 for G from E into L2.
struct LipschitzReport {
  LipschitzTarget target;
  double radius_C = 0.0;
  std::size_t samples = 0;
  double max_ratio = 0.0;
  double L_f = 0.0;
  double L1_inverse = 0.0;
  double L2_g = 0.0;
};

/// Draws `samples` random pairs in the ball of radius `radius_C` and returns the largest
/// difference quotient. Norms: F uses X -> E, G uses E -> L2, L^{-1} uses L2 -> bending
/// seminorm, K uses E -> E. Deterministic for a given seed.
/// Throws DomainError for radius_C <= 0 or samples < 2.
LipschitzReport estimate_lipschitz(LipschitzTarget target, const ReducedRhs& rhs, double radius_C,
                                   std::size_t samples, std::uint64_t seed);

}  // namespace pdae
