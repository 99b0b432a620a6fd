#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pdae/constraint.hpp"
#include "pdae/integrate.hpp"
#include "pdae/operators.hpp"
#include "pdae/reduced_rhs.hpp"

namespace pdae {

/// Rejected configuration. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitialCondition {
  enum class Kind { zero, gauss_bump, cosine_mode, from_csv };
  Kind kind = Kind::zero;
  double amplitude = 0.0;
  double center = 0.5;
  double width = 0.1;
  int k = 0;
  std::filesystem::path path;
  /// For from_csv: take the first (default) or last time present in the file.
  bool csv_last_time = false;
};

struct RunConfig {
  std::size_t n_cells = 64;
  BoundaryCondition bc = BoundaryCondition::neumann;
  ConstraintSign constraint_sign = ConstraintSign::minus;
  Scheme scheme = Scheme::etd2;
  double dt = 1e-3;
  double t_end = 0.5;
  std::size_t output_every = 10;
  InitialCondition ic_u;
  InitialCondition ic_v;
  double blowup_norm_threshold = 1e8;
  std::uint64_t seed = 42;
  bool a_disabled = false;
  NonlinearityKind nonlinearity = NonlinearityKind::model;

  StepperConfig stepper() const;
  OperatorOptions operator_options() const;
};

/// Parses and validates. Relative from_csv paths resolve against `base_dir`.
/// Throws ConfigError on unknown keys, wrong types or out-of-range values.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Samples (or loads) one initial field on the grid. Throws ConfigError on unreadable data.
GridFn make_initial_field(const InitialCondition& ic, const GridPtr& grid, const std::string& column);

/// V0 for the config. With Dirichlet conditions the boundary values are set to zero.
DiffState make_initial_state(const RunConfig& cfg, const GridPtr& grid);

/// Operators, solver and right-hand side assembled from the config.
ReducedRhs make_rhs(const RunConfig& cfg);

}  // namespace pdae
