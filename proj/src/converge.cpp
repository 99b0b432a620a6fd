#include "pdae/converge.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace pdae {

namespace {

void fill_orders(ConvergenceStudy& study) {
  for (std::size_t i = 0; i < study.rows.size(); ++i) {
    auto& row = study.rows[i];
    row.observed_order = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                                : std::log2(study.rows[i - 1].error / row.error);
  }
}

}  // namespace

bool ConvergenceStudy::within_bracket() const {
  if (rows.size() < 2) {
    return false;
  }
  return std::all_of(rows.begin() + 1, rows.end(), [&](const ConvergenceRow& r) {
    return std::isfinite(r.observed_order) && r.observed_order >= order_min && r.observed_order <= order_max;
  });
}

ConvergenceStudy spatial_constraint_study(std::size_t n_cells) {
  ConvergenceStudy study{"spatial", 1.7, 2.3, {}};
  const auto exact = [](double x) { return x * x * (1 - x) * (1 - x); };
  std::size_t n = n_cells;
  for (std::size_t level = 0; level < 3; ++level, n *= 2) {
    const GridPtr grid = make_grid(n);
    const ConstraintSolver solver(assemble_operators(grid), ConstraintSign::plus);
    const AlgState w = solver.solve(GridFn::sample(grid, [&](double x) { return 24.0 + exact(x); }));
    const double error = (w.w() - GridFn::sample(grid, exact)).max_abs();
    study.rows.push_back({study.name, level, grid->h(), error, 0.0});
  }
  fill_orders(study);
  return study;
}

ConvergenceStudy temporal_study(const RunConfig& cfg, Scheme scheme) {
  ConvergenceStudy study{to_string(scheme), scheme == Scheme::exp_euler ? 0.8 : 1.7,
                         scheme == Scheme::exp_euler ? 1.2 : 2.3, {}};
  const ReducedRhs rhs = make_rhs(cfg);
  const DiffState V0 = make_initial_state(cfg, rhs.grid());
  auto final_state = [&](double dt) {
    StepperConfig sc = cfg.stepper();
    sc.scheme = scheme;
    sc.dt = dt;
    sc.output_every = std::numeric_limits<std::size_t>::max();
    return integrate(V0, sc, rhs).states.back().V;
  };
  const DiffState reference = final_state(cfg.dt / 32.0);
  double dt = cfg.dt;
  for (std::size_t level = 0; level < 3; ++level, dt *= 0.5) {
    study.rows.push_back({study.name, level, dt, (final_state(dt) - reference).max_abs(), 0.0});
  }
  fill_orders(study);
  return study;
}

std::vector<ConvergenceStudy> run_convergence(const RunConfig& cfg) {
  auto spatial = std::async(std::launch::async, spatial_constraint_study, cfg.n_cells);
  auto euler = std::async(std::launch::async, temporal_study, cfg, Scheme::exp_euler);
  auto etd2 = std::async(std::launch::async, temporal_study, cfg, Scheme::etd2);
  return {spatial.get(), euler.get(), etd2.get()};
}

}  // namespace pdae
