#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pdae/config.hpp"

namespace pdae {

struct ConvergenceRow {
  std::string study;
  std::size_t level = 0;
  /// h for the spatial study, dt for temporal ones.
  double step = 0.0;
  double error = 0.0;
  /// log2 of the error ratio to the previous level; NaN on the first level.
  double observed_order = 0.0;
};

struct ConvergenceStudy {
  std::string name;
  double order_min = 0.0;
  double order_max = 0.0;
  std::vector<ConvergenceRow> rows;

  /// Every observed order lies in [order_min, order_max].
  bool within_bracket() const;
};

/// Manufactured constraint solve w* = x^2 (1 - x)^2 at n, 2n, 4n cells; L-infinity error.
ConvergenceStudy spatial_constraint_study(std::size_t n_cells);

/// Self-convergence of `scheme` from the config's initial data: steps dt, dt/2, dt/4
/// against a dt/32 reference, sup-norm error at t_end.
ConvergenceStudy temporal_study(const RunConfig& cfg, Scheme scheme);

/// Spatial, exp_euler and etd2 studies, run concurrently.
std::vector<ConvergenceStudy> run_convergence(const RunConfig& cfg);

}  // namespace pdae
