#include "pdae/commands.hpp"

#include <chrono>
#include <fstream>

#include "pdae/converge.hpp"
#include "pdae/errors.hpp"
#include "pdae/io.hpp"

namespace pdae {

namespace {

void prepare_output_dir(const std::filesystem::path& dir) {
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
}

/// Runs `body`, mapping configuration and input problems to exit code 1.
template <typename Body>
int guarded(std::ostream& diag, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    diag << "config error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
  }
  return kExitConfigError;
}

}  // namespace

int cmd_solve(const std::filesystem::path& config_path, const std::filesystem::path& output_dir,
              std::ostream& diag) {
  return guarded(diag, [&] {
    const RunConfig cfg = load_config(config_path);
    const ReducedRhs rhs = make_rhs(cfg);
    const DiffState V0 = make_initial_state(cfg, rhs.grid());

    const auto start = std::chrono::steady_clock::now();
    const Trajectory traj = integrate(V0, cfg.stepper(), rhs);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    prepare_output_dir(output_dir);
    write_trajectory_csv(output_dir / "trajectory.csv", traj);
    nlohmann::json summary{{"verdict", to_string(traj.verdict)},
                           {"max_constraint_residual", traj.max_constraint_residual},
                           {"steps_taken", traj.steps_taken},
                           {"wall_seconds", wall}};
    summary["t_max_estimate"] = traj.t_max_estimate ? nlohmann::json(*traj.t_max_estimate) : nlohmann::json(nullptr);
    write_json(output_dir / "summary.json", summary);

    if (traj.verdict == Verdict::blowup_detected) {
      diag << "blow-up detected near t = " << *traj.t_max_estimate << '\n';
      return static_cast<int>(kExitBlowup);
    }
    diag << "completed " << traj.steps_taken << " steps, max constraint residual "
         << traj.max_constraint_residual << '\n';
    return static_cast<int>(kExitSuccess);
  });
}

int cmd_verify(const std::filesystem::path& config_path, const std::filesystem::path& output_dir,
               const VerifyHooks& hooks, std::ostream& diag) {
  return guarded(diag, [&] {
    const RunConfig cfg = load_config(config_path);
    const std::vector<CheckResult> checks = run_verification(cfg, hooks);
    prepare_output_dir(output_dir);
    write_json(output_dir / "verify.json", to_json(checks));
    for (const auto& c : checks) {
      diag << (c.passed ? "pass  " : "FAIL  ") << c.name << "  measured " << c.measured << "  tolerance "
           << c.tolerance << '\n';
    }
    return static_cast<int>(all_passed(checks) ? kExitSuccess : kExitCheckFailed);
  });
}

int cmd_converge(const std::filesystem::path& config_path, const std::filesystem::path& output_dir,
                 std::ostream& diag) {
  return guarded(diag, [&] {
    const RunConfig cfg = load_config(config_path);
    const std::vector<ConvergenceStudy> studies = run_convergence(cfg);
    prepare_output_dir(output_dir);
    std::ofstream out(output_dir / "converge.csv");
    if (!out) {
      throw InputError("cannot write converge.csv");
    }
    out << "study,level,step,error,observed_order\n";
    bool ok = true;
    for (const auto& s : studies) {
      for (const auto& r : s.rows) {
        out << r.study << ',' << r.level << ',' << format_double(r.step) << ',' << format_double(r.error) << ','
            << (std::isfinite(r.observed_order) ? format_double(r.observed_order) : "") << '\n';
      }
      const bool in = s.within_bracket();
      ok = ok && in;
      diag << (in ? "pass  " : "FAIL  ") << s.name << " orders:";
      for (std::size_t i = 1; i < s.rows.size(); ++i) {
        diag << ' ' << s.rows[i].observed_order;
      }
      diag << "  bracket [" << s.order_min << ", " << s.order_max << "]\n";
    }
    return static_cast<int>(ok ? kExitSuccess : kExitCheckFailed);
  });
}

}  // namespace pdae
