#include "pdae/operators.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "pdae/errors.hpp"

namespace pdae {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

BandedOperator zero_generator(const Grid1D& grid) { return BandedOperator(grid.n_nodes(), 1); }

}  // namespace

BandedOperator assemble_laplacian_neumann(const Grid1D& grid) {
  if (grid.n_cells() < 2) {
    throw DomainError("assemble_laplacian_neumann: need at least 2 cells, got " + std::to_string(grid.n_cells()));
  }
  const std::size_t n = grid.n_nodes();
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  BandedOperator A(n, 1);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    A.set(i, i - 1, inv_h2);
    A.set(i, i, -2.0 * inv_h2);
    A.set(i, i + 1, inv_h2);
  }
  // Ghost u_{-1} = u_1 is the same as dividing the half-cell flux by the half weight.
  A.set(0, 0, -2.0 * inv_h2);
  A.set(0, 1, 2.0 * inv_h2);
  A.set(n - 1, n - 1, -2.0 * inv_h2);
  A.set(n - 1, n - 2, 2.0 * inv_h2);
  return A;
}

BandedOperator assemble_laplacian_dirichlet(const Grid1D& grid) {
  if (grid.n_cells() < 2) {
    throw DomainError("assemble_laplacian_dirichlet: need at least 2 cells, got " + std::to_string(grid.n_cells()));
  }
  const std::size_t n = grid.n_nodes();
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  BandedOperator A(n, 1);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    A.set(i, i, -2.0 * inv_h2);
    if (i > 1) {
      A.set(i, i - 1, inv_h2);
    }
    if (i + 2 < n) {
      A.set(i, i + 1, inv_h2);
    }
  }
  return A;
}

BandedOperator assemble_bending_form(const Grid1D& grid) {
  if (grid.n_cells() < 4) {
    throw DomainError("assemble_bending_form: need at least 4 cells, got " + std::to_string(grid.n_cells()));
  }
  const std::size_t m = grid.n_interior();
  const double h = grid.h();
  const double s = 1.0 / (h * h * h);
  BandedOperator B(m, 2);
  for (std::size_t i = 0; i < m; ++i) {
    B.set(i, i, 6.0 * s);
    if (i + 1 < m) {
      B.set(i, i + 1, -4.0 * s);
      B.set(i + 1, i, -4.0 * s);
    }
    if (i + 2 < m) {
      B.set(i, i + 2, s);
      B.set(i + 2, i, s);
    }
  }
  // Reflected ghost next to each clamped end.
  B.add(0, 0, s);
  B.add(m - 1, m - 1, s);
  return B;
}

BandedOperator assemble_biharmonic_clamped(const Grid1D& grid) {
  const double h = grid.h();
  return assemble_bending_form(grid).shifted(h, 1.0).shifted(0.0, 1.0 / h);
}

SpectralDecomp::SpectralDecomp(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors, Eigen::VectorXd weights)
    : eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)), weights_(std::move(weights)) {
  if (eigenvectors_.rows() != weights_.size() || eigenvectors_.cols() != eigenvalues_.size()) {
    throw DimensionError("SpectralDecomp: inconsistent sizes");
  }
}

Eigen::VectorXd SpectralDecomp::to_modal(const Eigen::VectorXd& f) const {
  if (f.size() != weights_.size()) {
    throw DimensionError("SpectralDecomp::to_modal: size mismatch");
  }
  return eigenvectors_.transpose() * weights_.cwiseProduct(f);
}

Eigen::VectorXd SpectralDecomp::from_modal(const Eigen::VectorXd& c) const {
  if (c.size() != eigenvalues_.size()) {
    throw DimensionError("SpectralDecomp::from_modal: size mismatch");
  }
  return eigenvectors_ * c;
}

Eigen::VectorXd SpectralDecomp::apply_diagonal(const Eigen::VectorXd& factors, const Eigen::VectorXd& f) const {
  return from_modal(factors.cwiseProduct(to_modal(f)));
}

Eigen::VectorXd SpectralDecomp::exp_factors(double t) const {
  return (t * eigenvalues_).array().exp().matrix();
}

Eigen::VectorXd SpectralDecomp::phi1_factors(double t) const {
  return (t * eigenvalues_).unaryExpr([](double z) { return phi1(z); });
}

Eigen::VectorXd SpectralDecomp::phi2_factors(double t) const {
  return (t * eigenvalues_).unaryExpr([](double z) { return phi2(z); });
}

double phi1(double z) {
  if (z == 0.0) {
    return 1.0;
  }
  if (std::abs(z) < 1e-5) {
    return 1.0 + z / 2.0 + z * z / 6.0;
  }
  return std::expm1(z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 0.1) {
    // sum_k z^k / (k + 2)!
    double term = 0.5;
    double sum = term;
    for (int k = 1; k <= 12; ++k) {
      term *= z / static_cast<double>(k + 2);
      sum += term;
    }
    return sum;
  }
  return (std::expm1(z) - z) / (z * z);
}

SpectralDecomp eigendecompose(const BandedOperator& A, const Grid1D& grid) {
  const std::size_t n = A.size();
  if (n != grid.n_nodes()) {
    throw DimensionError("eigendecompose: operator size does not match the grid");
  }
  const Eigen::VectorXd& w = grid.weights();
  const Eigen::VectorXd sqrt_w = w.cwiseSqrt();

  // W^{1/2} A W^{-1/2} is symmetric when A is self-adjoint in the weighted product.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  if (A.bandwidth() <= 1) {
    Eigen::VectorXd diag(idx(n));
    Eigen::VectorXd sub(idx(n > 1 ? n - 1 : 0));
    for (std::size_t i = 0; i < n; ++i) {
      diag[idx(i)] = A(i, i);
      if (i + 1 < n) {
        const double upper = sqrt_w[idx(i)] * A(i, i + 1) / sqrt_w[idx(i + 1)];
        const double lower = sqrt_w[idx(i + 1)] * A(i + 1, i) / sqrt_w[idx(i)];
        sub[idx(i)] = 0.5 * (upper + lower);
      }
    }
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  } else {
    Eigen::MatrixXd S = sqrt_w.asDiagonal() * A.to_dense() * sqrt_w.cwiseInverse().asDiagonal();
    S = 0.5 * (S + S.transpose()).eval();
    solver.compute(S, Eigen::ComputeEigenvectors);
  }
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecompose: symmetric eigensolver did not converge");
  }
  // Eigen sorts ascending. <Af, f> <= 0 holds exactly for the assembled generators,
  // so positive eigenvalues are eigensolver roundoff on the kernel.
  Eigen::VectorXd values = solver.eigenvalues().reverse().cwiseMin(0.0);
  Eigen::MatrixXd Q = solver.eigenvectors().rowwise().reverse();

  // The eigensolver resolves the kernel only to eps*||A||/gap, which leaks constants into
  // decaying modes. When constants are an exact, simple kernel, pin that mode explicitly.
  const Eigen::VectorXd row_sums = A.apply(Eigen::VectorXd::Ones(idx(n)));
  const double scale = values.cwiseAbs().maxCoeff();
  if (n > 1 && scale > 0.0 && row_sums.cwiseAbs().maxCoeff() <= 1e-12 * scale &&
      values[1] < -1e-8 * scale) {
    const Eigen::VectorXd q0 = sqrt_w / sqrt_w.norm();
    Q.col(0) = Q.col(0).dot(q0) < 0.0 ? Eigen::VectorXd(-q0) : q0;
    for (Eigen::Index k = 1; k < Q.cols(); ++k) {
      Q.col(k) -= Q.col(k).dot(Q.col(0)) * Q.col(0);
      Q.col(k).normalize();
    }
    values[0] = 0.0;
  }
  Eigen::MatrixXd vectors = sqrt_w.cwiseInverse().asDiagonal() * Q;
  return {std::move(values), std::move(vectors), w};
}

BandedOperator OperatorSet::weighted_L() const { return B.shifted(grid->h(), 1.0); }

BandedOperator OperatorSet::weighted_A() const { return A.row_scaled(grid->weights()); }

OperatorSetPtr assemble_operators(GridPtr grid, OperatorOptions options) {
  if (!grid) {
    throw InputError("assemble_operators: null grid");
  }
  BandedOperator A = options.generator_disabled        ? zero_generator(*grid)
                     : options.bc == BoundaryCondition::neumann ? assemble_laplacian_neumann(*grid)
                                                                : assemble_laplacian_dirichlet(*grid);
  BandedOperator B = assemble_bending_form(*grid);
  BandedOperator L = B.shifted(grid->h(), 1.0).shifted(0.0, 1.0 / grid->h());
  SpectralDecomp decomp = eigendecompose(A, *grid);
  return std::make_shared<const OperatorSet>(OperatorSet{std::move(grid), options, std::move(A), std::move(L),
                                                         std::move(B), std::move(decomp)});
}

GridFn semigroup_apply(const SpectralDecomp& decomp, double t, const GridFn& f) {
  if (!(t >= 0.0)) {
    throw DomainError("semigroup_apply: time must be non-negative");
  }
  if (t == 0.0) {
    return f;
  }
  return {f.grid(), decomp.apply_diagonal(decomp.exp_factors(t), f.values())};
}

GridFn phi1_apply(const SpectralDecomp& decomp, double t, const GridFn& f) {
  if (!(t > 0.0)) {
    throw DomainError("phi1_apply: time must be positive");
  }
  return {f.grid(), decomp.apply_diagonal(decomp.phi1_factors(t), f.values())};
}

GridFn apply_generator(const OperatorSet& ops, const GridFn& f) {
  require_same_grid(*ops.grid, *f.grid());
  return {f.grid(), ops.A.apply(f.values())};
}

double bending(const AlgState& w, const OperatorSet& ops) {
  require_same_grid(*ops.grid, *w.grid());
  const Eigen::VectorXd interior = w.interior();
  return interior.dot(ops.B.apply(interior));
}

double norm_X(const FullState& U, const OperatorSet& ops) {
  const double e = norm_E(U.V);
  return std::sqrt(e * e + bending(U.w, ops));
}

}  // namespace pdae
