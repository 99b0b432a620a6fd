#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pdae/grid.hpp"
#include "pdae/reduced_rhs.hpp"

namespace pdae {

enum class Scheme { exp_euler, etd2 };

std::string to_string(Scheme scheme);

struct PicardOptions {
  std::size_t max_iters = 50;
  double tol = 1e-12;
  /// Number of time intervals of the fixed quadrature grid on [0, t_end].
  std::size_t quadrature_nodes = 500;
};

struct StepperConfig {
  Scheme scheme = Scheme::etd2;
  double dt = 1e-3;
  double t_end = 1.0;
  double blowup_norm_threshold = 1e8;
  /// Record every n-th step (the final state is always recorded).
  std::size_t output_every = 1;
  PicardOptions picard;

  /// Throws DomainError when a field is out of range.
  void validate() const;
};

enum class Verdict { completed, blowup_detected };

std::string to_string(Verdict verdict);

struct Trajectory {
  std::vector<double> times;
  /// V together with the constraint-consistent w at each recorded time.
  std::vector<FullState> states;
  /// Constraint residual (see constraint_residual) of each recorded state.
  std::vector<double> constraint_residuals;
  Verdict verdict = Verdict::completed;
  std::optional<double> t_max_estimate;
  /// ||U||_X at the last evaluated time; +inf if the step overflowed.
  double final_norm = 0.0;
  std::size_t steps_taken = 0;
  /// Largest residual over every accepted step, recorded or not.
  double max_constraint_residual = 0.0;
};

/// V+ = e^{dt A} V + dt phi_1(dt A) K(V). Throws OverflowError on non-finite output.
DiffState step_exp_euler(const DiffState& V, double dt, const ReducedRhs& rhs);

/// Two-step exponential time differencing,
///   V+ = e^{dt A} V + dt phi_1(dt A) K_n + (dt^2 / dt_prev) phi_2(dt A) (K_n - K_prev),
/// where K_prev was evaluated dt_prev before V. dt_prev defaults to dt.
DiffState step_etd2(const DiffState& V, const DiffState& K_prev, double dt, const ReducedRhs& rhs,
                    std::optional<double> dt_prev = std::nullopt);

/// Fixed-step march of V' = A V + K(V) with blow-up monitoring.
///
/// When ||U||_X exceeds the threshold or a step overflows, the last interval is
/// re-integrated at dt/2, dt/4 and dt/8, each pass narrowing the bracket around
/// the first crossing; t_max_estimate is the crossing time at dt/8.
Trajectory integrate(const DiffState& V0, const StepperConfig& cfg, const ReducedRhs& rhs);

struct PicardResult {
  Trajectory trajectory;
  std::size_t iterations = 0;
  bool converged = false;
  /// Sup-norm change between successive iterates.
  std::vector<double> defect_history;
};

/// Successive approximation of V(t) = e^{tA} V0 + int_0^t e^{(t-s)A} K(V(s)) ds on a
/// uniform grid of cfg.picard.quadrature_nodes intervals with composite trapezoid
/// quadrature, starting from V(t) = e^{tA} V0. A run that hits max_iters or overflows
/// is returned with converged = false and the defect history.
PicardResult picard_solve(const DiffState& V0, double t_end, const StepperConfig& cfg, const ReducedRhs& rhs);

/// Sup-norm mismatch between the final state and the variation-of-constants formula
/// evaluated by trapezoid quadrature over the recorded states.
double mild_solution_defect(const Trajectory& trajectory, const ReducedRhs& rhs);

/// Sup-norm distance between two trajectories at the times they share (to within 1e-12).
/// Throws InputError if they share no time.
double trajectory_distance(const Trajectory& a, const Trajectory& b);

}  // namespace pdae
