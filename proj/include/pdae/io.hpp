#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "pdae/grid.hpp"
#include "pdae/integrate.hpp"

namespace pdae {

/// Decimal text with 17 significant digits (round-trips every double).
std::string format_double(double x);

/// Columns t, x, u, v, w, constraint_residual; one row per (time, node).
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);

/// Reads one field from a CSV with a header row containing `x` and `column`
/// (or `value`). If a `t` column exists the rows of the first (or last) time are used.
/// Node coordinates must match the grid. Throws InputError on malformed data.
GridFn read_field_csv(const std::filesystem::path& path, const GridPtr& grid, const std::string& column,
                      bool last_time = false);

}  // namespace pdae
