#include "pdae/reduced_rhs.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "pdae/errors.hpp"

namespace pdae {

DiffState nonlinearity_f(const FullState& U) {
  const GridFn& u = U.V.u;
  const GridFn& v = U.V.v;
  const GridFn& w = U.w.w();
  GridFn wv = w.cwise_product(v);
  return {wv + u.cwise_product(w), wv + u};
}

Nonlinearity make_nonlinearity(NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::model:
      return nonlinearity_f;
    case NonlinearityKind::square_test:
      return [](const FullState& U) { return DiffState(U.V.u.cwise_product(U.V.u), U.V.v.cwise_product(U.V.v)); };
    case NonlinearityKind::zero:
      return [](const FullState& U) { return DiffState::zeros(U.grid()); };
  }
  throw DomainError("make_nonlinearity: unknown kind");
}

ReducedRhs::ReducedRhs(ConstraintSolver solver, Nonlinearity f) : solver_(std::move(solver)), f_(std::move(f)) {
  if (!f_) {
    throw InputError("ReducedRhs: empty nonlinearity");
  }
}

AlgState ReducedRhs::constraint_w(const DiffState& V) const { return solver_.solve(solver_.g_of_v(V)); }

KEval ReducedRhs::evaluate(const DiffState& V, double t) const {
  AlgState w = constraint_w(V);
  DiffState k = f_(FullState(V, w, t));
  return {std::move(k), std::move(w)};
}

KEval reduced_k(const DiffState& V, const ReducedRhs& rhs) { return rhs.evaluate(V); }

std::string to_string(LipschitzTarget target) {
  switch (target) {
    case LipschitzTarget::F:
      return "F";
    case LipschitzTarget::G:
      return "G";
    case LipschitzTarget::LInverse:
      return "L_inverse";
    case LipschitzTarget::K:
      return "K";
  }
  return "?";
}

namespace {

class BallSampler {
 public:
  BallSampler(GridPtr grid, std::uint64_t seed) : grid_(std::move(grid)), rng_(seed) {}

  GridFn field() {
    Eigen::VectorXd values(static_cast<Eigen::Index>(grid_->n_nodes()));
    for (auto& x : values) {
      x = unit_(rng_);
    }
    return {grid_, std::move(values)};
  }

  AlgState clamped_field() {
    Eigen::VectorXd interior(static_cast<Eigen::Index>(grid_->n_interior()));
    for (auto& x : interior) {
      x = unit_(rng_);
    }
    return AlgState::from_interior(grid_, interior);
  }

  /// Target norm for the next sample, uniform in (0, C].
  double radius(double C) { return C * (1.0 - 0.5 * (unit_(rng_) + 1.0)); }

 private:
  GridPtr grid_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{-1.0, 1.0};
};

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

LipschitzReport estimate_lipschitz(LipschitzTarget target, const ReducedRhs& rhs, double radius_C,
                                   std::size_t samples, std::uint64_t seed) {
  if (!(radius_C > 0.0) || !std::isfinite(radius_C)) {
    throw DomainError("estimate_lipschitz: radius must be positive and finite");
  }
  if (samples < 2) {
    throw DomainError("estimate_lipschitz: need at least 2 samples");
  }
  const OperatorSet& ops = rhs.ops();
  const ConstraintSolver& solver = rhs.solver();
  BallSampler sampler(rhs.grid(), seed);
  LipschitzReport report{target, radius_C, samples};

  auto diff_state = [&] {
    DiffState V(sampler.field(), sampler.field());
    return V * (sampler.radius(radius_C) / norm_E(V));
  };
  auto full_state = [&] {
    FullState U(DiffState(sampler.field(), sampler.field()), sampler.clamped_field());
    const double scale = sampler.radius(radius_C) / norm_X(U, ops);
    return FullState(U.V * scale, AlgState(U.w.w() * scale));
  };
  auto x_distance = [&](const FullState& a, const FullState& b) {
    return norm_X(FullState(a.V - b.V, AlgState(a.w.w() - b.w.w())), ops);
  };

  for (std::size_t s = 0; s < samples; ++s) {
    switch (target) {
      case LipschitzTarget::F: {
        const FullState U1 = full_state();
        const FullState U2 = full_state();
        const double ratio = safe_ratio(norm_E(rhs.f(U1) - rhs.f(U2)), x_distance(U1, U2));
        report.max_ratio = std::max(report.max_ratio, ratio);
        report.L_f = report.max_ratio;
        break;
      }
      case LipschitzTarget::G: {
        const DiffState V1 = diff_state();
        const DiffState V2 = diff_state();
        const double ratio = safe_ratio(l2_norm(solver.g_of_v(V1) - solver.g_of_v(V2)), norm_E(V1 - V2));
        report.max_ratio = std::max(report.max_ratio, ratio);
        report.L2_g = report.max_ratio;
        break;
      }
      case LipschitzTarget::LInverse: {
        GridFn g1 = sampler.field();
        g1 = g1 * (sampler.radius(radius_C) / l2_norm(g1));
        GridFn g2 = sampler.field();
        g2 = g2 * (sampler.radius(radius_C) / l2_norm(g2));
        const AlgState dw(solver.solve(g1).w() - solver.solve(g2).w());
        const double ratio = safe_ratio(std::sqrt(bending(dw, ops)), l2_norm(g1 - g2));
        report.max_ratio = std::max(report.max_ratio, ratio);
        report.L1_inverse = report.max_ratio;
        break;
      }
      case LipschitzTarget::K: {
        const DiffState V1 = diff_state();
        const DiffState V2 = diff_state();
        const GridFn g1 = solver.g_of_v(V1);
        const GridFn g2 = solver.g_of_v(V2);
        const AlgState w1 = solver.solve(g1);
        const AlgState w2 = solver.solve(g2);
        const FullState U1(V1, w1);
        const FullState U2(V2, w2);
        const DiffState dk = rhs.f(U1) - rhs.f(U2);
        const double dv = norm_E(V1 - V2);
        const double dg = l2_norm(g1 - g2);
        const AlgState dw(w1.w() - w2.w());
        report.max_ratio = std::max(report.max_ratio, safe_ratio(norm_E(dk), dv));
        report.L_f = std::max(report.L_f, safe_ratio(norm_E(dk), x_distance(U1, U2)));
        report.L1_inverse = std::max(report.L1_inverse, safe_ratio(std::sqrt(bending(dw, ops)), dg));
        report.L2_g = std::max(report.L2_g, safe_ratio(dg, dv));
        break;
      }
    }
  }
  return report;
}

}  // namespace pdae
