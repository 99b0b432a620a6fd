#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pdae/errors.hpp"
#include "pdae/integrate.hpp"
#include "support.hpp"

using namespace pdae;
using namespace pdae::testing;
using std::numbers::pi;

namespace {

ReducedRhs make(std::size_t n, Nonlinearity f = nonlinearity_f, bool a_disabled = false,
                ConstraintSign sign = ConstraintSign::minus) {
  return ReducedRhs(ConstraintSolver(assemble_operators(make_grid(n), {BoundaryCondition::neumann, a_disabled}), sign),
                    std::move(f));
}

// u' = u, v' = -v; independent of w.
DiffState linear_growth(const FullState& U) { return DiffState(U.V.u, -U.V.v); }

DiffState small_data(const GridPtr& g) {
  DiffState V(GridFn::sample(g, [](double x) { return std::exp(-40 * (x - 0.3) * (x - 0.3)); }),
               GridFn::sample(g, [](double x) { return std::cos(2 * pi * x); }));
  return V * (0.01 / norm_E(V));
}

double scalar_ode_error(Scheme scheme, double dt) {
  const ReducedRhs rhs = make(8, linear_growth, true);
  const GridPtr g = rhs.grid();
  StepperConfig cfg;
  cfg.scheme = scheme;
  cfg.dt = dt;
  cfg.t_end = 1.0;
  const Trajectory traj = integrate(DiffState(GridFn::constant(g, 1.0), GridFn::constant(g, 1.0)), cfg, rhs);
  const DiffState& last = traj.states.back().V;
  return std::max((last.u - GridFn::constant(g, std::exp(1.0))).max_abs(),
                  (last.v - GridFn::constant(g, std::exp(-1.0))).max_abs());
}

double blowup_time(Scheme scheme, double dt, double threshold) {
  const ReducedRhs rhs = make(16, make_nonlinearity(NonlinearityKind::square_test), true);
  StepperConfig cfg;
  cfg.scheme = scheme;
  cfg.dt = dt;
  cfg.t_end = 0.5;
  cfg.blowup_norm_threshold = threshold;
  const Trajectory traj = integrate(DiffState(GridFn::constant(rhs.grid(), 10.0), GridFn::zeros(rhs.grid())), cfg, rhs);
  REQUIRE(traj.verdict == Verdict::blowup_detected);
  REQUIRE(traj.t_max_estimate.has_value());
  CHECK(*traj.t_max_estimate <= cfg.t_end);
  CHECK(traj.final_norm >= threshold);
  return *traj.t_max_estimate;
}

}  // namespace

TEST_CASE("stepper configuration is validated") {
  const ReducedRhs rhs = make(8);
  StepperConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(integrate(DiffState::zeros(rhs.grid()), cfg, rhs), DomainError);
  cfg = {};
  cfg.t_end = -1.0;
  CHECK_THROWS_AS(integrate(DiffState::zeros(rhs.grid()), cfg, rhs), DomainError);
  cfg = {};
  cfg.blowup_norm_threshold = 1.0;
  CHECK_THROWS_AS(integrate(DiffState::zeros(rhs.grid()), cfg, rhs), DomainError);
  CHECK_THROWS_AS(step_exp_euler(DiffState::zeros(rhs.grid()), 0.0, rhs), DomainError);
}

TEST_CASE("exp_euler step examples") {
  const ReducedRhs rhs = make(128);
  const GridPtr g = rhs.grid();
  CHECK(step_exp_euler(DiffState::zeros(g), 1e-2, rhs).max_abs() == 0.0);

  // Heat mode with K switched off.
  const ReducedRhs heat = make(128, make_nonlinearity(NonlinearityKind::zero));
  const GridFn c = GridFn::sample(g, [](double x) { return std::cos(pi * x); });
  const double dt = 1e-3;
  const DiffState next = step_exp_euler(DiffState(c, c), dt, heat);
  CHECK((next.u - c * std::exp(-pi * pi * dt)).max_abs() <= 1e-6);

  // With A = 0 the step is explicit Euler.
  std::mt19937_64 rng(41);
  const ReducedRhs flat = make(32, nonlinearity_f, true);
  const DiffState V(random_field(flat.grid(), rng), random_field(flat.grid(), rng));
  const DiffState K = flat.evaluate(V).k;
  CHECK((step_exp_euler(V, 0.01, flat) - (V + K * 0.01)).max_abs() <= 1e-13);
}

TEST_CASE("etd2 reduces to exp_euler when K does not change") {
  std::mt19937_64 rng(42);
  const ReducedRhs rhs = make(64);
  const DiffState V = small_data(rhs.grid()) * 50.0;
  const DiffState K = rhs.evaluate(V).k;
  const DiffState a = step_etd2(V, K, 2e-3, rhs);
  const DiffState b = step_exp_euler(V, 2e-3, rhs);
  CHECK((a - b).max_abs() <= 1e-13);
  CHECK_THROWS_AS(step_etd2(V, K, 2e-3, rhs, 0.0), DomainError);
}

TEST_CASE("scalar ODE oracle u' = u") {
  const double e1 = scalar_ode_error(Scheme::exp_euler, 1e-2);
  const double e2 = scalar_ode_error(Scheme::exp_euler, 5e-3);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.1));

  const double q1 = scalar_ode_error(Scheme::etd2, 1e-2);
  const double q2 = scalar_ode_error(Scheme::etd2, 5e-3);
  CHECK(q1 <= 10 * 1e-4);
  CHECK(q1 / q2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("zero data stays zero") {
  const ReducedRhs rhs = make(32);
  StepperConfig cfg;
  cfg.t_end = 0.05;
  const Trajectory traj = integrate(DiffState::zeros(rhs.grid()), cfg, rhs);
  CHECK(traj.verdict == Verdict::completed);
  CHECK(!traj.t_max_estimate.has_value());
  for (const FullState& s : traj.states) {
    CHECK(s.V.max_abs() == 0.0);
    CHECK(s.w.w().max_abs() == 0.0);
  }
  CHECK(traj.steps_taken == 50);
}

TEST_CASE("trajectory bookkeeping") {
  const ReducedRhs rhs = make(32);
  StepperConfig cfg;
  cfg.dt = 3e-3;
  cfg.t_end = 0.1;
  cfg.output_every = 4;
  const Trajectory traj = integrate(small_data(rhs.grid()), cfg, rhs);
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.times.back() == doctest::Approx(0.1).epsilon(1e-14));
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    CHECK(traj.times[i] > traj.times[i - 1]);
  }
  CHECK(traj.steps_taken == 34);
  CHECK(traj.times.size() == traj.states.size());
  CHECK(traj.times.size() == traj.constraint_residuals.size());
  CHECK(traj.times.size() == 10);  // t=0, every 4th of 34 steps, and the final step
}

TEST_CASE("small-data run keeps the constraint") {
  const ReducedRhs rhs = make(64);
  StepperConfig cfg;
  cfg.t_end = 0.5;
  const Trajectory traj = integrate(small_data(rhs.grid()) * 10.0, cfg, rhs);
  CHECK(traj.verdict == Verdict::completed);
  for (double r : traj.constraint_residuals) {
    CHECK(r <= 1e-9);
  }
  CHECK(traj.max_constraint_residual <= 1e-9);
  for (const FullState& s : traj.states) {
    CHECK(weak_form_residual(s.w, rhs.solver().g_of_v(s.V), rhs.ops()) <= 1e-10);
  }
}

TEST_CASE("norm changes are continuous between outputs") {
  const ReducedRhs rhs = make(32);
  StepperConfig cfg;
  cfg.t_end = 0.2;
  cfg.dt = 1e-3;
  const Trajectory traj = integrate(small_data(rhs.grid()) * 20.0, cfg, rhs);
  double k_bound = 0.0, rhs_bound = 0.0;
  for (const FullState& s : traj.states) {
    const DiffState K = rhs.evaluate(s.V).k;
    const DiffState AV(apply_generator(rhs.ops(), s.V.u), apply_generator(rhs.ops(), s.V.v));
    k_bound = std::max(k_bound, norm_E(K));
    rhs_bound = std::max(rhs_bound, norm_E(AV) + norm_E(K));
  }
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const double a = norm_E(traj.states[i - 1].V), b = norm_E(traj.states[i].V);
    // The semigroup and phi_1 are contractions, so growth comes from K alone.
    CHECK(b - a <= k_bound * cfg.dt * (1 + a) + 1e-15);
    CHECK(std::abs(b - a) <= rhs_bound * cfg.dt * (1 + a));
  }
}

TEST_CASE("mild-solution defect shrinks linearly for exp_euler") {
  const ReducedRhs rhs = make(32);
  auto defect = [&](double dt) {
    StepperConfig cfg;
    cfg.scheme = Scheme::exp_euler;
    cfg.dt = dt;
    cfg.t_end = 0.2;
    return mild_solution_defect(integrate(small_data(rhs.grid()) * 50.0, cfg, rhs), rhs);
  };
  const double d1 = defect(4e-3), d2 = defect(2e-3), d3 = defect(1e-3);
  CHECK(d1 / d2 >= 1.6);
  CHECK(d2 / d3 >= 1.6);
  CHECK(d1 / d2 <= 4.5);
}

TEST_CASE("integration is deterministic") {
  const ReducedRhs rhs = make(32);
  StepperConfig cfg;
  cfg.t_end = 0.05;
  const Trajectory a = integrate(small_data(rhs.grid()), cfg, rhs);
  const Trajectory b = integrate(small_data(rhs.grid()), cfg, rhs);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    CHECK((a.states[i].V.u.values().array() == b.states[i].V.u.values().array()).all());
    CHECK((a.states[i].w.w().values().array() == b.states[i].w.w().values().array()).all());
  }
}

TEST_CASE("Picard trivial fixed points") {
  StepperConfig cfg;
  cfg.picard.quadrature_nodes = 50;
  const ReducedRhs rhs = make(16);
  const PicardResult zero = picard_solve(DiffState::zeros(rhs.grid()), 0.1, cfg, rhs);
  CHECK(zero.converged);
  CHECK(zero.iterations == 1);

  const ReducedRhs linear = make(64, make_nonlinearity(NonlinearityKind::zero));
  const GridFn c = GridFn::sample(linear.grid(), [](double x) { return std::cos(pi * x); });
  const PicardResult heat = picard_solve(DiffState(c, c * 2.0), 0.1, cfg, linear);
  CHECK(heat.converged);
  CHECK(heat.iterations == 1);
  const DiffState expect(semigroup_apply(linear.ops().decomp, 0.1, c), semigroup_apply(linear.ops().decomp, 0.1, c * 2.0));
  CHECK((heat.trajectory.states.back().V - expect).max_abs() <= 1e-12);
}

TEST_CASE("Picard reports non-contraction") {
  StepperConfig cfg;
  cfg.picard.max_iters = 3;
  cfg.picard.quadrature_nodes = 50;
  const ReducedRhs rhs = make(16, make_nonlinearity(NonlinearityKind::square_test), true);
  const PicardResult r = picard_solve(DiffState(GridFn::constant(rhs.grid(), 10.0), GridFn::zeros(rhs.grid())), 0.5,
                                      cfg, rhs);
  CHECK(!r.converged);
  CHECK(r.defect_history.size() == r.iterations);
  CHECK(r.iterations <= 3);
}

TEST_CASE("Picard agrees with ETD2 on a small-data run") {
  const ReducedRhs rhs = make(64);
  const DiffState V0 = small_data(rhs.grid());
  StepperConfig cfg;
  cfg.dt = 1e-4;
  cfg.t_end = 0.05;
  const Trajectory etd = integrate(V0, cfg, rhs);
  const PicardResult pic = picard_solve(V0, 0.05, cfg, rhs);
  CHECK(pic.converged);
  CHECK(pic.iterations <= 50);
  CHECK(trajectory_distance(pic.trajectory, etd) <= 1e-5);
}

TEST_CASE("blow-up of u' = u^2 is located") {
  for (auto scheme : {Scheme::exp_euler, Scheme::etd2}) {
    const double t = blowup_time(scheme, 1e-4, 1e8);
    CHECK(std::abs(t - 0.1) <= 0.01);
  }
  const double t_lo = blowup_time(Scheme::etd2, 1e-3, 1e4);
  const double t_mid = blowup_time(Scheme::etd2, 1e-3, 1e6);
  const double t_hi = blowup_time(Scheme::etd2, 1e-3, 1e8);
  CHECK(t_lo <= t_mid);
  CHECK(t_mid <= t_hi);
}
