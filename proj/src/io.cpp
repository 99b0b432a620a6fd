#include "pdae/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "pdae/errors.hpp"

namespace pdae {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) {
      cell.pop_back();
    }
    while (!cell.empty() && cell.front() == ' ') {
      cell.erase(cell.begin());
    }
    cells.push_back(cell);
  }
  return cells;
}

double parse_double(const std::string& text, std::size_t line_no) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw InputError("line " + std::to_string(line_no) + ": cannot parse '" + text + "' as a number");
  }
  return value;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "t,x,u,v,w,constraint_residual\n";
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    const FullState& s = trajectory.states[k];
    const Eigen::VectorXd& x = s.grid()->nodes();
    const std::string t = format_double(trajectory.times[k]);
    const std::string r = format_double(trajectory.constraint_residuals[k]);
    for (std::size_t i = 0; i < s.V.u.size(); ++i) {
      out << t << ',' << format_double(x[static_cast<Eigen::Index>(i)]) << ',' << format_double(s.V.u[i]) << ','
          << format_double(s.V.v[i]) << ',' << format_double(s.w.w()[i]) << ',' << r << '\n';
    }
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write " + path.string());
  }
  write_trajectory_csv(out, trajectory);
}

GridFn read_field_csv(const std::filesystem::path& path, const GridPtr& grid, const std::string& column,
                      bool last_time) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw InputError(path.string() + " is empty");
  }
  const std::vector<std::string> header = split_row(line);
  auto find = [&](const std::string& name) -> long {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) {
        return static_cast<long>(i);
      }
    }
    return -1;
  };
  const long col_t = find("t");
  const long col_x = find("x");
  long col_value = find(column);
  if (col_value < 0) {
    col_value = find("value");
  }
  if (col_x < 0 || col_value < 0) {
    throw InputError(path.string() + ": header needs 'x' and '" + column + "' (or 'value') columns");
  }

  std::vector<double> xs;
  std::vector<double> values;
  double selected_t = NAN;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") {
      continue;
    }
    const std::vector<std::string> cells = split_row(line);
    if (cells.size() != header.size()) {
      throw InputError(path.string() + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " cells, expected " + std::to_string(header.size()));
    }
    if (col_t >= 0) {
      const double t = parse_double(cells[static_cast<std::size_t>(col_t)], line_no);
      if (std::isnan(selected_t) || (last_time && t > selected_t)) {
        selected_t = t;
        xs.clear();
        values.clear();
      }
      if (t != selected_t) {
        continue;
      }
    }
    xs.push_back(parse_double(cells[static_cast<std::size_t>(col_x)], line_no));
    values.push_back(parse_double(cells[static_cast<std::size_t>(col_value)], line_no));
  }
  if (values.size() != grid->n_nodes()) {
    throw InputError(path.string() + ": found " + std::to_string(values.size()) + " nodes, grid has " +
                     std::to_string(grid->n_nodes()));
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - grid->nodes()[static_cast<Eigen::Index>(i)]) > 1e-12) {
      throw InputError(path.string() + ": node " + std::to_string(i) + " does not match the grid");
    }
  }
  return {grid, Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()))};
}

}  // namespace pdae
