#include "pdae/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <utility>

#include "pdae/errors.hpp"
#include "pdae/io.hpp"

namespace pdae {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{"n_cells",     "bc",    "constraint_sign",       "scheme",
                                          "dt",          "t_end", "output_every",          "ic_u",
                                          "ic_v",        "seed",  "blowup_norm_threshold", "a_disabled",
                                          "nonlinearity"};
  return keys;
}

double get_positive(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  if (!j.at(key).is_number()) {
    throw ConfigError("'" + key + "' must be a number");
  }
  const double value = j.at(key).get<double>();
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError("'" + key + "' must be positive and finite");
  }
  return value;
}

std::size_t get_count(const json& j, const std::string& key, std::size_t fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  if (!j.at(key).is_number_integer() || j.at(key).get<long long>() <= 0) {
    throw ConfigError("'" + key + "' must be a positive integer");
  }
  return j.at(key).get<std::size_t>();
}

std::string get_string(const json& j, const std::string& key, const std::string& fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  if (!j.at(key).is_string()) {
    throw ConfigError("'" + key + "' must be a string");
  }
  return j.at(key).get<std::string>();
}

double get_number(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  if (!j.at(key).is_number() || !std::isfinite(j.at(key).get<double>())) {
    throw ConfigError("'" + key + "' must be a finite number");
  }
  return j.at(key).get<double>();
}

InitialCondition parse_ic(const json& j, const std::string& field, const std::filesystem::path& base_dir) {
  InitialCondition ic;
  if (j.is_string() && j.get<std::string>() == "zero") {
    return ic;
  }
  if (!j.is_object()) {
    throw ConfigError("'" + field + "' must be an object with a 'type' key");
  }
  const std::string type = get_string(j, "type", "");
  std::set<std::string> allowed{"type"};
  if (type == "zero") {
    ic.kind = InitialCondition::Kind::zero;
  } else if (type == "gauss_bump") {
    ic.kind = InitialCondition::Kind::gauss_bump;
    allowed.insert({"amplitude", "center", "width"});
    ic.amplitude = get_number(j, "amplitude", 1.0);
    ic.center = get_number(j, "center", 0.5);
    ic.width = get_positive(j, "width", 0.1);
  } else if (type == "cosine_mode") {
    ic.kind = InitialCondition::Kind::cosine_mode;
    allowed.insert({"k", "amplitude"});
    ic.amplitude = get_number(j, "amplitude", 1.0);
    if (j.contains("k") && (!j.at("k").is_number_integer() || j.at("k").get<long long>() < 0)) {
      throw ConfigError("'" + field + ".k' must be a non-negative integer");
    }
    ic.k = j.value("k", 1);
  } else if (type == "from_csv") {
    ic.kind = InitialCondition::Kind::from_csv;
    allowed.insert({"path", "time"});
    const std::string path = get_string(j, "path", "");
    if (path.empty()) {
      throw ConfigError("'" + field + ".path' is required for from_csv");
    }
    ic.path = std::filesystem::path(path).is_absolute() ? std::filesystem::path(path) : base_dir / path;
    const std::string time = get_string(j, "time", "first");
    if (time != "first" && time != "last") {
      throw ConfigError("'" + field + ".time' must be \"first\" or \"last\"");
    }
    ic.csv_last_time = time == "last";
  } else {
    throw ConfigError("'" + field + ".type' must be one of zero, gauss_bump, cosine_mode, from_csv");
  }
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + field + "." + key + "'");
    }
  }
  return ic;
}

}  // namespace

StepperConfig RunConfig::stepper() const {
  StepperConfig s;
  s.scheme = scheme;
  s.dt = dt;
  s.t_end = t_end;
  s.blowup_norm_threshold = blowup_norm_threshold;
  s.output_every = output_every;
  return s;
}

OperatorOptions RunConfig::operator_options() const { return {bc, a_disabled}; }

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!known_keys().contains(key)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  RunConfig cfg;
  cfg.n_cells = get_count(j, "n_cells", cfg.n_cells);
  if (cfg.n_cells < 4) {
    throw ConfigError("'n_cells' must be at least 4");
  }

  const std::string bc = get_string(j, "bc", "neumann");
  if (bc == "neumann") {
    cfg.bc = BoundaryCondition::neumann;
  } else if (bc == "dirichlet") {
    cfg.bc = BoundaryCondition::dirichlet;
  } else {
    throw ConfigError("'bc' must be \"neumann\" or \"dirichlet\"");
  }

  if (j.contains("constraint_sign")) {
    const json& s = j.at("constraint_sign");
    if (!s.is_number_integer() || (s.get<int>() != 1 && s.get<int>() != -1)) {
      throw ConfigError("'constraint_sign' must be +1 or -1");
    }
    cfg.constraint_sign = s.get<int>() == 1 ? ConstraintSign::plus : ConstraintSign::minus;
  }

  const std::string scheme = get_string(j, "scheme", "etd2");
  if (scheme == "exp_euler") {
    cfg.scheme = Scheme::exp_euler;
  } else if (scheme == "etd2") {
    cfg.scheme = Scheme::etd2;
  } else {
    throw ConfigError("'scheme' must be \"exp_euler\" or \"etd2\"");
  }

  cfg.dt = get_positive(j, "dt", cfg.dt);
  if (j.contains("t_end")) {
    cfg.t_end = get_number(j, "t_end", cfg.t_end);
    if (cfg.t_end < 0.0) {
      throw ConfigError("'t_end' must be non-negative");
    }
  }
  cfg.output_every = get_count(j, "output_every", cfg.output_every);
  cfg.blowup_norm_threshold = get_positive(j, "blowup_norm_threshold", cfg.blowup_norm_threshold);
  if (!(cfg.blowup_norm_threshold > 1.0)) {
    throw ConfigError("'blowup_norm_threshold' must exceed 1");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) {
      throw ConfigError("'seed' must be a non-negative integer");
    }
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("a_disabled")) {
    if (!j.at("a_disabled").is_boolean()) {
      throw ConfigError("'a_disabled' must be a boolean");
    }
    cfg.a_disabled = j.at("a_disabled").get<bool>();
  }
  const std::string nl = get_string(j, "nonlinearity", "paper");
  if (nl == "paper") {
    cfg.nonlinearity = NonlinearityKind::model;
  } else if (nl == "square_test") {
    cfg.nonlinearity = NonlinearityKind::square_test;
  } else if (nl == "zero") {
    cfg.nonlinearity = NonlinearityKind::zero;
  } else {
    throw ConfigError("'nonlinearity' must be \"paper\", \"square_test\" or \"zero\"");
  }
  if (j.contains("ic_u")) {
    cfg.ic_u = parse_ic(j.at("ic_u"), "ic_u", base_dir);
  }
  if (j.contains("ic_v")) {
    cfg.ic_v = parse_ic(j.at("ic_v"), "ic_v", base_dir);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

GridFn make_initial_field(const InitialCondition& ic, const GridPtr& grid, const std::string& column) {
  switch (ic.kind) {
    case InitialCondition::Kind::zero:
      return GridFn::zeros(grid);
    case InitialCondition::Kind::gauss_bump:
      return GridFn::sample(grid, [&](double x) {
        const double s = (x - ic.center) / ic.width;
        return ic.amplitude * std::exp(-s * s);
      });
    case InitialCondition::Kind::cosine_mode:
      return GridFn::sample(grid, [&](double x) { return ic.amplitude * std::cos(ic.k * std::numbers::pi * x); });
    case InitialCondition::Kind::from_csv:
      try {
        return read_field_csv(ic.path, grid, column, ic.csv_last_time);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("from_csv: ") + e.what());
      }
  }
  throw ConfigError("unknown initial condition");
}

DiffState make_initial_state(const RunConfig& cfg, const GridPtr& grid) {
  GridFn u = make_initial_field(cfg.ic_u, grid, "u");
  GridFn v = make_initial_field(cfg.ic_v, grid, "v");
  if (cfg.bc == BoundaryCondition::dirichlet) {
    Eigen::VectorXd uu = u.values();
    Eigen::VectorXd vv = v.values();
    const auto last = uu.size() - 1;
    uu[0] = uu[last] = 0.0;
    vv[0] = vv[last] = 0.0;
    u = GridFn(grid, std::move(uu));
    v = GridFn(grid, std::move(vv));
  }
  return {std::move(u), std::move(v)};
}

ReducedRhs make_rhs(const RunConfig& cfg) {
  auto ops = assemble_operators(make_grid(cfg.n_cells), cfg.operator_options());
  return {ConstraintSolver(std::move(ops), cfg.constraint_sign), make_nonlinearity(cfg.nonlinearity)};
}

}  // namespace pdae
