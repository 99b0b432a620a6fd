#include "pdae/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "pdae/errors.hpp"

namespace pdae {

std::string to_string(Scheme scheme) { return scheme == Scheme::exp_euler ? "exp_euler" : "etd2"; }

std::string to_string(Verdict verdict) {
  return verdict == Verdict::completed ? "completed" : "blowup_detected";
}

void StepperConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError("dt must be positive");
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw DomainError("t_end must be non-negative");
  }
  if (!(blowup_norm_threshold > 1.0)) {
    throw DomainError("blowup_norm_threshold must exceed 1");
  }
  if (output_every == 0) {
    throw DomainError("output_every must be positive");
  }
  if (picard.max_iters == 0 || picard.quadrature_nodes == 0 || !(picard.tol > 0.0)) {
    throw DomainError("picard options must be positive");
  }
}

namespace {

Eigen::VectorXd etd_component(const SpectralDecomp& d, const Eigen::VectorXd& f, const Eigen::VectorXd& k,
                              const Eigen::VectorXd* dk, double dt, double dk_scale) {
  Eigen::VectorXd modal = d.exp_factors(dt).cwiseProduct(d.to_modal(f));
  modal += dt * d.phi1_factors(dt).cwiseProduct(d.to_modal(k));
  if (dk != nullptr) {
    modal += dk_scale * d.phi2_factors(dt).cwiseProduct(d.to_modal(*dk));
  }
  return d.from_modal(modal);
}

DiffState wrap(const GridPtr& grid, Eigen::VectorXd u, Eigen::VectorXd v) {
  if (!u.allFinite() || !v.allFinite()) {
    throw OverflowError("time step produced non-finite values");
  }
  return {GridFn(grid, std::move(u)), GridFn(grid, std::move(v))};
}

DiffState etd_step(const DiffState& V, const DiffState& K, const DiffState* K_prev, double dt, double dt_prev,
                   const ReducedRhs& rhs) {
  if (!(dt > 0.0)) {
    throw DomainError("time step must be positive");
  }
  const SpectralDecomp& d = rhs.ops().decomp;
  if (K_prev == nullptr) {
    return wrap(V.grid(), etd_component(d, V.u.values(), K.u.values(), nullptr, dt, 0.0),
                etd_component(d, V.v.values(), K.v.values(), nullptr, dt, 0.0));
  }
  const Eigen::VectorXd du = K.u.values() - K_prev->u.values();
  const Eigen::VectorXd dv = K.v.values() - K_prev->v.values();
  const double scale = dt * dt / dt_prev;
  return wrap(V.grid(), etd_component(d, V.u.values(), K.u.values(), &du, dt, scale),
              etd_component(d, V.v.values(), K.v.values(), &dv, dt, scale));
}

/// One accepted point of a march.
struct MarchPoint {
  double t;
  DiffState V;
  KEval K;
  std::optional<DiffState> K_prev;
  double dt_prev;
};

double safe_norm_x(const DiffState& V, const AlgState& w, const OperatorSet& ops) {
  return norm_X(FullState(V, w), ops);
}

/// Advances one step; returns nullopt if the step overflowed.
std::optional<MarchPoint> advance(const MarchPoint& p, double h, Scheme scheme, const ReducedRhs& rhs) {
  try {
    const DiffState* prev = (scheme == Scheme::etd2 && p.K_prev) ? &*p.K_prev : nullptr;
    DiffState next = etd_step(p.V, p.K.k, prev, h, p.dt_prev, rhs);
    KEval k_next = rhs.evaluate(next, p.t + h);
    return MarchPoint{p.t + h, std::move(next), std::move(k_next), p.K.k, h};
  } catch (const OverflowError&) {
    return std::nullopt;
  } catch (const InputError&) {
    // F overflowed while building a GridFn.
    return std::nullopt;
  }
}

void record(Trajectory& traj, const MarchPoint& p, double residual) {
  traj.times.push_back(p.t);
  traj.states.emplace_back(p.V, p.K.w, p.t);
  traj.constraint_residuals.push_back(residual);
}

double residual_of(const MarchPoint& p, const ReducedRhs& rhs) {
  return constraint_residual(p.K.w, rhs.solver().g_of_v(p.V), rhs.solver());
}

struct Crossing {
  double t;
  std::optional<MarchPoint> point;
  double norm;
};

/// Marches from `start` with step h until the norm crosses `threshold` or `t_stop` is reached.
/// Returns the last point below the threshold and the crossing (if any).
std::pair<MarchPoint, std::optional<Crossing>> march_until_crossing(MarchPoint start, double h, double t_stop,
                                                                    Scheme scheme, double threshold,
                                                                    const ReducedRhs& rhs) {
  // Restart without history: the previous K belongs to a coarser step.
  start.K_prev.reset();
  MarchPoint current = std::move(start);
  const double t0 = current.t;
  const auto n = static_cast<std::size_t>(std::ceil((t_stop - t0) / h - 1e-9));
  for (std::size_t i = 0; i < n; ++i) {
    const double t_next = std::min(t_stop, t0 + static_cast<double>(i + 1) * h);
    std::optional<MarchPoint> next = advance(current, t_next - current.t, scheme, rhs);
    if (!next) {
      return {std::move(current), Crossing{t_next, std::nullopt, std::numeric_limits<double>::infinity()}};
    }
    next->t = t_next;
    const double nx = safe_norm_x(next->V, next->K.w, rhs.ops());
    if (!std::isfinite(nx) || nx > threshold) {
      return {std::move(current), Crossing{t_next, std::move(next), nx}};
    }
    current = std::move(*next);
  }
  return {std::move(current), std::nullopt};
}

/// K at every column of (U, V), in modal coordinates. False if an evaluation overflowed.
bool modal_rhs(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V, double delta, const ReducedRhs& rhs,
               Eigen::MatrixXd& ku, Eigen::MatrixXd& kv) {
  const SpectralDecomp& d = rhs.ops().decomp;
  try {
    for (Eigen::Index j = 0; j < U.cols(); ++j) {
      const DiffState Vj(GridFn(rhs.grid(), U.col(j)), GridFn(rhs.grid(), V.col(j)));
      const KEval K = rhs.evaluate(Vj, static_cast<double>(j) * delta);
      ku.col(j) = d.to_modal(K.k.u.values());
      kv.col(j) = d.to_modal(K.k.v.values());
    }
  } catch (const OverflowError&) {
    return false;
  } catch (const InputError&) {
    return false;
  }
  return true;
}

}  // namespace

DiffState step_exp_euler(const DiffState& V, double dt, const ReducedRhs& rhs) {
  const KEval K = rhs.evaluate(V);
  return etd_step(V, K.k, nullptr, dt, dt, rhs);
}

DiffState step_etd2(const DiffState& V, const DiffState& K_prev, double dt, const ReducedRhs& rhs,
                    std::optional<double> dt_prev) {
  const KEval K = rhs.evaluate(V);
  const double hp = dt_prev.value_or(dt);
  if (!(hp > 0.0)) {
    throw DomainError("step_etd2: previous step must be positive");
  }
  return etd_step(V, K.k, &K_prev, dt, hp, rhs);
}

Trajectory integrate(const DiffState& V0, const StepperConfig& cfg, const ReducedRhs& rhs) {
  cfg.validate();
  require_same_grid(*V0.grid(), *rhs.grid());
  Trajectory traj;

  MarchPoint current{0.0, V0, rhs.evaluate(V0), std::nullopt, cfg.dt};
  const double r0 = residual_of(current, rhs);
  traj.max_constraint_residual = r0;
  record(traj, current, r0);
  traj.final_norm = safe_norm_x(current.V, current.K.w, rhs.ops());
  if (!(traj.final_norm <= cfg.blowup_norm_threshold)) {
    traj.verdict = Verdict::blowup_detected;
    traj.t_max_estimate = 0.0;
    return traj;
  }

  const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  bool last_recorded = true;
  for (std::size_t n = 0; n < n_steps; ++n) {
    const double t_next = (n + 1 == n_steps) ? cfg.t_end : static_cast<double>(n + 1) * cfg.dt;
    std::optional<MarchPoint> next = advance(current, t_next - current.t, cfg.scheme, rhs);
    double nx = std::numeric_limits<double>::infinity();
    if (next) {
      next->t = t_next;
      nx = safe_norm_x(next->V, next->K.w, rhs.ops());
    }
    if (!next || !std::isfinite(nx) || nx > cfg.blowup_norm_threshold) {
      // Narrow the bracket [current.t, t_next] three times by halving the step.
      MarchPoint below = current;
      double bracket_end = t_next;
      double h = t_next - current.t;
      Crossing crossing{t_next, std::move(next), nx};
      for (int level = 0; level < 3; ++level) {
        h *= 0.5;
        auto [last_below, found] =
            march_until_crossing(below, h, cfg.t_end, cfg.scheme, cfg.blowup_norm_threshold, rhs);
        if (!found) {
          // The finer march stays bounded up to t_end; keep the coarse bracket.
          break;
        }
        below = std::move(last_below);
        crossing = std::move(*found);
        bracket_end = crossing.t;
      }
      if (!last_recorded) {
        record(traj, current, residual_of(current, rhs));
      }
      if (below.t > current.t) {
        record(traj, below, residual_of(below, rhs));
      }
      if (crossing.point) {
        record(traj, *crossing.point, residual_of(*crossing.point, rhs));
      }
      traj.verdict = Verdict::blowup_detected;
      traj.t_max_estimate = bracket_end;
      traj.final_norm = crossing.norm;
      traj.steps_taken = n + 1;
      return traj;
    }
    current = std::move(*next);
    traj.steps_taken = n + 1;
    traj.final_norm = nx;
    const double r = residual_of(current, rhs);
    traj.max_constraint_residual = std::max(traj.max_constraint_residual, r);
    last_recorded = ((n + 1) % cfg.output_every == 0) || (n + 1 == n_steps);
    if (last_recorded) {
      record(traj, current, r);
    }
  }
  return traj;
}

PicardResult picard_solve(const DiffState& V0, double t_end, const StepperConfig& cfg, const ReducedRhs& rhs) {
  cfg.validate();
  if (!(t_end > 0.0)) {
    throw DomainError("picard_solve: t_end must be positive");
  }
  require_same_grid(*V0.grid(), *rhs.grid());
  const SpectralDecomp& d = rhs.ops().decomp;
  const GridPtr& grid = rhs.grid();
  const std::size_t M = cfg.picard.quadrature_nodes;
  const double delta = t_end / static_cast<double>(M);
  const Eigen::VectorXd E = d.exp_factors(delta);
  const auto nm = static_cast<Eigen::Index>(d.size());

  // Free evolution e^{t_j A} V0 in modal coordinates; column j is time t_j.
  Eigen::MatrixXd free_u(nm, static_cast<Eigen::Index>(M + 1));
  Eigen::MatrixXd free_v(nm, static_cast<Eigen::Index>(M + 1));
  free_u.col(0) = d.to_modal(V0.u.values());
  free_v.col(0) = d.to_modal(V0.v.values());
  for (Eigen::Index j = 1; j <= static_cast<Eigen::Index>(M); ++j) {
    free_u.col(j) = E.cwiseProduct(free_u.col(j - 1));
    free_v.col(j) = E.cwiseProduct(free_v.col(j - 1));
  }

  auto to_nodes = [&](const Eigen::MatrixXd& modal) {
    Eigen::MatrixXd nodes = d.eigenvectors() * modal;
    return nodes;
  };
  Eigen::MatrixXd U = to_nodes(free_u);
  Eigen::MatrixXd Vv = to_nodes(free_v);

  PicardResult result;
  for (std::size_t iter = 1; iter <= cfg.picard.max_iters; ++iter) {
    Eigen::MatrixXd ku(nm, static_cast<Eigen::Index>(M + 1));
    Eigen::MatrixXd kv(nm, static_cast<Eigen::Index>(M + 1));
    if (!modal_rhs(U, Vv, delta, rhs, ku, kv)) {
      result.iterations = iter;
      result.defect_history.push_back(std::numeric_limits<double>::infinity());
      return result;
    }
    // P_j = sum_{k<=j} E^{j-k} kappa_k; trapezoid I_j = delta (P_j - E^j kappa_0 / 2 - kappa_j / 2).
    Eigen::MatrixXd new_u = free_u;
    Eigen::MatrixXd new_v = free_v;
    Eigen::VectorXd pu = ku.col(0);
    Eigen::VectorXd pv = kv.col(0);
    Eigen::VectorXd e0u = ku.col(0);
    Eigen::VectorXd e0v = kv.col(0);
    for (Eigen::Index j = 1; j <= static_cast<Eigen::Index>(M); ++j) {
      pu = E.cwiseProduct(pu) + ku.col(j);
      pv = E.cwiseProduct(pv) + kv.col(j);
      e0u = E.cwiseProduct(e0u);
      e0v = E.cwiseProduct(e0v);
      new_u.col(j) += delta * (pu - 0.5 * e0u - 0.5 * ku.col(j));
      new_v.col(j) += delta * (pv - 0.5 * e0v - 0.5 * kv.col(j));
    }
    Eigen::MatrixXd next_U = to_nodes(new_u);
    Eigen::MatrixXd next_V = to_nodes(new_v);
    double change = std::max((next_U - U).cwiseAbs().maxCoeff(), (next_V - Vv).cwiseAbs().maxCoeff());
    if (!next_U.allFinite() || !next_V.allFinite()) {
      change = std::numeric_limits<double>::infinity();
    }
    result.defect_history.push_back(change);
    result.iterations = iter;
    if (!std::isfinite(change)) {
      return result;
    }
    U = std::move(next_U);
    Vv = std::move(next_V);
    if (change <= cfg.picard.tol) {
      result.converged = true;
      break;
    }
  }

  Trajectory& traj = result.trajectory;
  for (Eigen::Index j = 0; j <= static_cast<Eigen::Index>(M); ++j) {
    const double t = static_cast<double>(j) * delta;
    const DiffState Vj(GridFn(grid, U.col(j)), GridFn(grid, Vv.col(j)));
    AlgState w = rhs.constraint_w(Vj);
    const double r = constraint_residual(w, rhs.solver().g_of_v(Vj), rhs.solver());
    traj.max_constraint_residual = std::max(traj.max_constraint_residual, r);
    traj.final_norm = norm_X(FullState(Vj, w), rhs.ops());
    traj.times.push_back(t);
    traj.states.emplace_back(Vj, std::move(w), t);
    traj.constraint_residuals.push_back(r);
  }
  traj.steps_taken = M;
  traj.verdict = Verdict::completed;
  return result;
}

double mild_solution_defect(const Trajectory& trajectory, const ReducedRhs& rhs) {
  if (trajectory.states.size() < 2) {
    throw InputError("mild_solution_defect: need at least two recorded states");
  }
  const SpectralDecomp& d = rhs.ops().decomp;
  const FullState& first = trajectory.states.front();
  const FullState& last = trajectory.states.back();
  const double T = last.t;
  Eigen::VectorXd u = d.apply_diagonal(d.exp_factors(T - first.t), first.V.u.values());
  Eigen::VectorXd v = d.apply_diagonal(d.exp_factors(T - first.t), first.V.v.values());
  for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
    const FullState& s = trajectory.states[i];
    const double left = i > 0 ? s.t - trajectory.states[i - 1].t : 0.0;
    const double right = i + 1 < trajectory.states.size() ? trajectory.states[i + 1].t - s.t : 0.0;
    const double weight = 0.5 * (left + right);
    const DiffState K = rhs.evaluate(s.V, s.t).k;
    const Eigen::VectorXd decay = d.exp_factors(T - s.t);
    u += weight * d.apply_diagonal(decay, K.u.values());
    v += weight * d.apply_diagonal(decay, K.v.values());
  }
  return std::max((u - last.V.u.values()).cwiseAbs().maxCoeff(), (v - last.V.v.values()).cwiseAbs().maxCoeff());
}

double trajectory_distance(const Trajectory& a, const Trajectory& b) {
  double worst = 0.0;
  bool shared = false;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    while (j < b.times.size() && b.times[j] < a.times[i] - 1e-12) {
      ++j;
    }
    if (j < b.times.size() && std::abs(b.times[j] - a.times[i]) <= 1e-12) {
      shared = true;
      const DiffState diff = a.states[i].V - b.states[j].V;
      worst = std::max(worst, diff.max_abs());
    }
  }
  if (!shared) {
    throw InputError("trajectory_distance: trajectories share no time");
  }
  return worst;
}

}  // namespace pdae
