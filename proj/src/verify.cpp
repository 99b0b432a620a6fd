#include "pdae/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "pdae/errors.hpp"

namespace pdae {

namespace {

CheckResult at_most(std::string name, double measured, double tolerance, std::string detail = {}) {
  return {std::move(name), measured <= tolerance, measured, tolerance, std::move(detail)};
}

CheckResult at_least(std::string name, double measured, double tolerance, std::string detail = {}) {
  return {std::move(name), measured >= tolerance, measured, tolerance, std::move(detail)};
}

GridFn random_field(const GridPtr& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd values(static_cast<Eigen::Index>(grid->n_nodes()));
  for (auto& x : values) {
    x = unit(rng);
  }
  return {grid, std::move(values)};
}

}  // namespace

std::vector<CheckResult> run_verification(const RunConfig& cfg, const VerifyHooks& hooks) {
  std::vector<CheckResult> checks;
  const GridPtr grid = make_grid(cfg.n_cells);
  const Grid1D& g = *grid;
  OperatorSet mutable_ops = *assemble_operators(grid, cfg.operator_options());
  if (hooks.mutate_operators) {
    hooks.mutate_operators(mutable_ops);
    mutable_ops.decomp = eigendecompose(mutable_ops.A, g);
  }
  const auto ops = std::make_shared<const OperatorSet>(std::move(mutable_ops));
  std::mt19937_64 rng(cfg.seed);

  // Generator A.
  const Eigen::MatrixXd WA = ops->weighted_A().to_dense();
  const double scale = std::max(WA.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  checks.push_back(at_most("self_adjointness", (WA - WA.transpose()).cwiseAbs().maxCoeff() / scale, 1e-12,
                           "max |WA - (WA)^T| / max |WA|"));

  double worst_form = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < 100; ++s) {
    const GridFn f = random_field(grid, rng);
    worst_form = std::max(worst_form, l2_inner(apply_generator(*ops, f), f));
  }
  checks.push_back(at_most("dissipativity", worst_form, 1e-12, "max <Af, f> over 100 random states"));

  {
    const Eigen::VectorXd isw = g.weights().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd sym = isw.asDiagonal() * (0.5 * (WA + WA.transpose())) * isw.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    const double norm = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    checks.push_back(at_most("dissipativity_spectral", es.eigenvalues().maxCoeff() / norm, 1e-12,
                             "largest eigenvalue of the weighted symmetric part, relative to its norm"));
  }

  {
    const BandedOperator shifted = ops->A.shifted(1.0, -1.0);
    double worst = 0.0;
    try {
      for (int s = 0; s < 20; ++s) {
        const GridFn rhs = random_field(grid, rng);
        const Eigen::VectorXd f = shifted.solve(rhs.values());
        const GridFn residual(grid, shifted.apply(f) - rhs.values());
        worst = std::max(worst, l2_norm(residual) / l2_norm(rhs));
      }
    } catch (const NumericalError&) {
      worst = std::numeric_limits<double>::infinity();
    }
    checks.push_back(at_most("maximality", worst, 1e-10, "relative residual of (I - A) f = g, 20 random g"));
  }

  {
    std::uniform_real_distribution<double> time(0.0, 10.0);
    double growth = -std::numeric_limits<double>::infinity();
    double law = 0.0;
    for (int s = 0; s < 50; ++s) {
      const GridFn f = random_field(grid, rng);
      const double t = time(rng);
      growth = std::max(growth, l2_norm(semigroup_apply(ops->decomp, t, f)) - l2_norm(f));
      const double t2 = time(rng);
      const GridFn composed = semigroup_apply(ops->decomp, t2, semigroup_apply(ops->decomp, t, f));
      law = std::max(law, (composed - semigroup_apply(ops->decomp, t + t2, f)).max_abs());
    }
    checks.push_back(at_most("contraction_semigroup", growth, 1e-12, "max ||e^{tA} f|| - ||f||, t in [0, 10]"));
    checks.push_back(at_most("semigroup_law", law, 1e-10, "max |T(s)T(t)f - T(s+t)f|"));
  }

  // Constraint operator.
  const Eigen::MatrixXd Lw = ops->weighted_L().to_dense();
  const Eigen::MatrixXd Bd = ops->B.to_dense();
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Lw, Eigen::EigenvaluesOnly);
    checks.push_back(at_least("constraint_spd", es.eigenvalues().minCoeff(), 0.0,
                              "smallest eigenvalue of the weighted constraint operator"));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> diff(Lw - Bd, Eigen::EigenvaluesOnly);
    checks.push_back(at_least("coercivity", diff.eigenvalues().minCoeff(), -1e-10,
                              "smallest eigenvalue of weighted L minus bending form"));
  }

  std::optional<ConstraintSolver> solver;
  try {
    solver.emplace(ops, ConstraintSign::plus);
  } catch (const NumericalError& e) {
    checks.push_back({"constraint_solve", false, std::numeric_limits<double>::infinity(), 1e-10, e.what()});
    return checks;
  }
  {
    const auto exact = [](double x) { return x * x * (1 - x) * (1 - x); };
    const GridFn rhs = GridFn::sample(grid, [&](double x) { return 24.0 + exact(x); });
    const AlgState w = solver->solve(rhs);
    // The nodal residual carries a roundoff floor ~ eps ||hL|| |w| that grows like n^3.
    const double n_scale = std::max(1.0, std::pow(static_cast<double>(cfg.n_cells) / 128.0, 3));
    checks.push_back(at_most("constraint_solve", weak_form_residual(w, rhs, *ops), 1e-10 * n_scale,
                             "weak-form residual of the manufactured solve"));
    checks.push_back(at_most("constraint_solve_dual", constraint_residual(w, rhs, *solver), 1e-10,
                             "dual-norm residual relative to 1 + ||g||"));
  }

  // Lipschitz structure.
  const ReducedRhs rhs(ConstraintSolver(ops, cfg.constraint_sign), nonlinearity_f);
  {
    const auto rep = estimate_lipschitz(LipschitzTarget::G, rhs, 1.0, 200, cfg.seed);
    checks.push_back(at_most("g_bound", rep.max_ratio, std::numbers::sqrt2 * (1.0 + 1e-6),
                             "||G(V1) - G(V2)||_L2 / ||V1 - V2||_E"));
  }
  {
    const auto rep = estimate_lipschitz(LipschitzTarget::LInverse, rhs, 1.0, 100, cfg.seed);
    checks.push_back(at_most("inverse_bounded", rep.max_ratio, std::numeric_limits<double>::max(),
                             "sampled ||L^{-1}|| from L2 to the bending seminorm"));
  }
  {
    double worst_f = 0.0;
    double worst_ratio = 0.0;
    for (double radius : {0.1, 1.0, 10.0}) {
      worst_f = std::max(worst_f, estimate_lipschitz(LipschitzTarget::F, rhs, radius, 200, cfg.seed).max_ratio);
      const auto k = estimate_lipschitz(LipschitzTarget::K, rhs, radius, 200, cfg.seed);
      worst_ratio = std::max(worst_ratio, k.max_ratio / (k.L_f * (1.0 + k.L1_inverse * k.L2_g)));
    }
    checks.push_back(at_most("local_lipschitz_f", worst_f, std::numeric_limits<double>::max(),
                             "sampled Lipschitz constant of F on the ball of radius 10"));
    checks.push_back(at_most("lipschitz_composite", worst_ratio, 1.1, "K constant / (L (1 + L1 L2))"));
  }
  return checks;
}

nlohmann::json to_json(const std::vector<CheckResult>& checks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json item{{"name", c.name}, {"passed", c.passed}, {"tolerance", c.tolerance}};
    item["measured"] = std::isfinite(c.measured) ? nlohmann::json(c.measured) : nlohmann::json(nullptr);
    if (!c.detail.empty()) {
      item["detail"] = c.detail;
    }
    out.push_back(std::move(item));
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

}  // namespace pdae
