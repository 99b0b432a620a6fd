#pragma once

#include <cstddef>
#include <memory>

#include <Eigen/Dense>

#include "pdae/banded.hpp"
#include "pdae/grid.hpp"

namespace pdae {

enum class BoundaryCondition { neumann, dirichlet };

/// Second-order Laplacian on all nodes with mirror ghost points (u_x = 0 at both ends).
///
/// Rows are scaled so that diag(weights) * A = -D^T (h I) D with D the forward
/// difference, hence <A f, f> = -h sum (D f)^2 holds as an algebraic identity.
BandedOperator assemble_laplacian_neumann(const Grid1D& grid);

/// Laplacian acting on interior nodes with the boundary nodes held at zero.
/// Boundary rows are empty, so data vanishing on the boundary stays there.
BandedOperator assemble_laplacian_dirichlet(const Grid1D& grid);

/// Weighted quadratic form on interior nodes with w^T B w ~ int w_xx^2, using
/// w = 0 on the boundary and the clamped ghost reflection w_{-1} = w_1.
BandedOperator assemble_bending_form(const Grid1D& grid);

/// w_xxxx + w on interior nodes (pentadiagonal). Equal to (B + h I) / h.
BandedOperator assemble_biharmonic_clamped(const Grid1D& grid);

/// Eigendecomposition of a generator that is self-adjoint in the trapezoid inner product.
///
/// Stores eigenvalues in descending order and eigenvectors Phi with Phi^T W Phi = I,
/// so f = Phi c with c = Phi^T W f.
class SpectralDecomp {
 public:
  SpectralDecomp(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors, Eigen::VectorXd weights);

  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
  std::size_t size() const { return static_cast<std::size_t>(eigenvalues_.size()); }

  Eigen::VectorXd to_modal(const Eigen::VectorXd& f) const;
  Eigen::VectorXd from_modal(const Eigen::VectorXd& c) const;
  /// Phi diag(factors) Phi^T W f
  Eigen::VectorXd apply_diagonal(const Eigen::VectorXd& factors, const Eigen::VectorXd& f) const;

  /// exp(t * lambda) for every eigenvalue.
  Eigen::VectorXd exp_factors(double t) const;
  Eigen::VectorXd phi1_factors(double t) const;
  Eigen::VectorXd phi2_factors(double t) const;

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  Eigen::VectorXd weights_;
};

/// phi_1(z) = (e^z - 1) / z with phi_1(0) = 1.
double phi1(double z);
/// phi_2(z) = (e^z - 1 - z) / z^2 with phi_2(0) = 1/2.
double phi2(double z);

/// Throws NumericalError if the eigensolver fails.
SpectralDecomp eigendecompose(const BandedOperator& A, const Grid1D& grid);

struct OperatorOptions {
  BoundaryCondition bc = BoundaryCondition::neumann;
  /// Replace the generator by zero (test mode).
  bool generator_disabled = false;
};

/// Everything assembled once per grid. Immutable after construction.
struct OperatorSet {
  GridPtr grid;
  OperatorOptions options;
  BandedOperator A;
  BandedOperator L;
  BandedOperator B;
  SpectralDecomp decomp;

  /// h L = B + h I, the matrix of a(w, phi) on interior nodes.
  BandedOperator weighted_L() const;
  /// diag(weights) A
  BandedOperator weighted_A() const;
};

using OperatorSetPtr = std::shared_ptr<const OperatorSet>;

OperatorSetPtr assemble_operators(GridPtr grid, OperatorOptions options = {});

/// exp(tA) f. Throws DomainError for t < 0.
GridFn semigroup_apply(const SpectralDecomp& decomp, double t, const GridFn& f);
/// phi_1(tA) f. Throws DomainError for t <= 0.
GridFn phi1_apply(const SpectralDecomp& decomp, double t, const GridFn& f);

GridFn apply_generator(const OperatorSet& ops, const GridFn& f);

/// Discrete int w_xx^2 through the bending form.
double bending(const AlgState& w, const OperatorSet& ops);

/// (||V||_E^2 + int w_xx^2)^(1/2)
double norm_X(const FullState& U, const OperatorSet& ops);

}  // namespace pdae
