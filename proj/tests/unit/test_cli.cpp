#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "pdae/commands.hpp"
#include "pdae/config.hpp"
#include "pdae/errors.hpp"
#include "pdae/io.hpp"

using namespace pdae;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Scratch {
 public:
  Scratch() {
    static int counter = 0;
    root_ = fs::temp_directory_path() / ("pdae_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  ~Scratch() { fs::remove_all(root_); }

  fs::path write(const std::string& name, const json& content) const {
    const fs::path p = root_ / name;
    std::ofstream(p) << content.dump(2);
    return p;
  }
  fs::path write_text(const std::string& name, const std::string& content) const {
    const fs::path p = root_ / name;
    std::ofstream(p) << content;
    return p;
  }
  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
};

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cells.push_back(cell);
    }
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig defaults = parse_config(json::object());
  CHECK(defaults.n_cells == 64);
  CHECK(defaults.constraint_sign == ConstraintSign::minus);
  CHECK(defaults.scheme == Scheme::etd2);
  CHECK(defaults.ic_u.kind == InitialCondition::Kind::zero);

  const RunConfig c = parse_config(json{{"bc", "dirichlet"}, {"constraint_sign", 1}, {"scheme", "exp_euler"},
                                        {"nonlinearity", "zero"}, {"a_disabled", true},
                                        {"ic_u", {{"type", "cosine_mode"}, {"k", 2}, {"amplitude", 0.5}}}});
  CHECK(c.bc == BoundaryCondition::dirichlet);
  CHECK(c.constraint_sign == ConstraintSign::plus);
  CHECK(c.scheme == Scheme::exp_euler);
  CHECK(c.nonlinearity == NonlinearityKind::zero);
  CHECK(c.a_disabled);
  CHECK(c.ic_u.k == 2);

  CHECK_THROWS_AS(parse_config(json{{"n_cell", 64}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"n_cells", 3}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"n_cells", "64"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"dt", -1e-3}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"constraint_sign", 0}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"bc", "periodic"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"blowup_norm_threshold", 0.5}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"ic_u", {{"type", "gauss_bump"}, {"sigma", 1}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"ic_v", {{"type", "from_csv"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
}

TEST_CASE("Dirichlet initial data vanish on the boundary") {
  RunConfig cfg = parse_config(json{{"bc", "dirichlet"}, {"n_cells", 8}, {"ic_u", {{"type", "cosine_mode"}, {"k", 0}}}});
  const DiffState V = make_initial_state(cfg, make_grid(8));
  CHECK(V.u[0] == 0.0);
  CHECK(V.u[8] == 0.0);
  CHECK(V.u[4] == 1.0);
}

TEST_CASE("decimal output round-trips exactly") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::ldexp(mant(rng), expo(rng));
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("solve with zero data") {
  Scratch s;
  const fs::path cfg = s.write("zero.json", json{{"n_cells", 8}, {"dt", 0.01}, {"t_end", 0.05}, {"output_every", 1}});
  std::ostringstream diag;
  CHECK(cmd_solve(cfg, s.root() / "out", diag) == kExitSuccess);
  const auto rows = read_csv(s.root() / "out" / "trajectory.csv");
  REQUIRE(rows.size() == 1 + 6 * 9);
  CHECK(rows[0] == std::vector<std::string>{"t", "x", "u", "v", "w", "constraint_residual"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][2]) == 0.0);
    CHECK(std::stod(rows[i][3]) == 0.0);
    CHECK(std::stod(rows[i][4]) == 0.0);
  }
  const json summary = read_json(s.root() / "out" / "summary.json");
  CHECK(summary["verdict"] == "completed");
  CHECK(summary["t_max_estimate"].is_null());
  CHECK(summary["steps_taken"] == 5);
  for (const char* key : {"max_constraint_residual", "wall_seconds"}) {
    CHECK(summary.contains(key));
  }
}

TEST_CASE("config errors exit 1 without writing output") {
  Scratch s;
  std::ostringstream diag;
  const fs::path bad_key = s.write("bad.json", json{{"n_cells", 8}, {"colour", "blue"}});
  CHECK(cmd_solve(bad_key, s.root() / "out1", diag) == kExitConfigError);
  CHECK(!fs::exists(s.root() / "out1"));
  CHECK(diag.str().find("colour") != std::string::npos);

  const fs::path broken = s.write_text("broken.json", "{\"n_cells\": ");
  CHECK(cmd_solve(broken, s.root() / "out2", diag) == kExitConfigError);
  CHECK(cmd_verify(broken, s.root() / "out2", {}, diag) == kExitConfigError);
  CHECK(cmd_converge(broken, s.root() / "out2", diag) == kExitConfigError);
  CHECK(!fs::exists(s.root() / "out2"));

  CHECK(cmd_solve(s.root() / "missing.json", s.root() / "out3", diag) == kExitConfigError);
  CHECK(!fs::exists(s.root() / "out3"));

  const fs::path missing_csv = s.write("csv.json", json{{"n_cells", 8}, {"ic_u", {{"type", "from_csv"}, {"path", "nope.csv"}}}});
  CHECK(cmd_solve(missing_csv, s.root() / "out4", diag) == kExitConfigError);
  CHECK(!fs::exists(s.root() / "out4"));
}

TEST_CASE("blow-up preset exits 3 with the scalar ODE time") {
  Scratch s;
  const fs::path cfg = s.write("blow.json", json{{"n_cells", 16},
                                                 {"scheme", "exp_euler"},
                                                 {"dt", 1e-4},
                                                 {"t_end", 0.2},
                                                 {"output_every", 100},
                                                 {"ic_u", {{"type", "cosine_mode"}, {"k", 0}, {"amplitude", 10.0}}},
                                                 {"a_disabled", true},
                                                 {"nonlinearity", "square_test"}});
  std::ostringstream diag;
  CHECK(cmd_solve(cfg, s.root() / "out", diag) == kExitBlowup);
  const json summary = read_json(s.root() / "out" / "summary.json");
  CHECK(summary["verdict"] == "blowup_detected");
  CHECK(std::abs(summary["t_max_estimate"].get<double>() - 0.1) <= 0.01);
  CHECK(fs::exists(s.root() / "out" / "trajectory.csv"));
}

TEST_CASE("trajectory CSV feeds back as initial data bitwise") {
  Scratch s;
  const json base{{"n_cells", 16},
                  {"dt", 1e-3},
                  {"t_end", 0.01},
                  {"output_every", 5},
                  {"ic_u", {{"type", "gauss_bump"}, {"amplitude", 0.3}, {"center", 0.37}, {"width", 0.13}}},
                  {"ic_v", {{"type", "cosine_mode"}, {"k", 3}, {"amplitude", 0.1 / 3}}}};
  std::ostringstream diag;
  REQUIRE(cmd_solve(s.write("a.json", base), s.root() / "a", diag) == kExitSuccess);

  for (const char* when : {"first", "last"}) {
    json again = base;
    again["ic_u"] = {{"type", "from_csv"}, {"path", "a/trajectory.csv"}, {"time", when}};
    again["ic_v"] = {{"type", "from_csv"}, {"path", "a/trajectory.csv"}, {"time", when}};
    const RunConfig cfg = load_config(s.write("b.json", again));
    const GridPtr grid = make_grid(16);
    const DiffState V = make_initial_state(cfg, grid);

    const auto rows = read_csv(s.root() / "a" / "trajectory.csv");
    const std::size_t first_row = std::string(when) == "first" ? 1 : rows.size() - 17;
    for (std::size_t i = 0; i < 17; ++i) {
      CHECK(format_double(V.u[i]) == rows[first_row + i][2]);
      CHECK(format_double(V.v[i]) == rows[first_row + i][3]);
    }
    if (std::string(when) == "first") {
      const DiffState direct = make_initial_state(load_config(s.root() / "a.json"), grid);
      CHECK((direct.u.values().array() == V.u.values().array()).all());
      CHECK((direct.v.values().array() == V.v.values().array()).all());
    }
  }
}

TEST_CASE("CSV reader validates its input") {
  Scratch s;
  const GridPtr g = make_grid(4);
  const fs::path wrong_nodes = s.write_text("n.csv", "x,value\n0,1\n0.3,1\n0.5,1\n0.75,1\n1,1\n");
  CHECK_THROWS(read_field_csv(wrong_nodes, g, "u"));
  const fs::path short_file = s.write_text("s.csv", "x,value\n0,1\n0.25,1\n");
  CHECK_THROWS(read_field_csv(short_file, g, "u"));
  const fs::path no_x = s.write_text("x.csv", "y,value\n0,1\n");
  CHECK_THROWS(read_field_csv(no_x, g, "u"));
  const fs::path good = s.write_text("g.csv", "x,value\n0,1\n0.25,2\n0.5,3\n0.75,4\n1,5\n");
  CHECK(read_field_csv(good, g, "u")[3] == 4.0);
}

TEST_CASE("verify report") {
  Scratch s;
  std::ostringstream diag;
  const fs::path small = s.write("v8.json", json{{"n_cells", 8}, {"seed", 3}});
  CHECK(cmd_verify(small, s.root() / "v8", {}, diag) == kExitSuccess);
  const json report = read_json(s.root() / "v8" / "verify.json");
  REQUIRE(report.is_array());
  CHECK(report.size() >= 10);
  for (const json& check : report) {
    for (const char* key : {"name", "passed", "measured", "tolerance"}) {
      CHECK(check.contains(key));
    }
    CHECK(check["passed"] == true);
  }

  const fs::path dirichlet = s.write("vd.json", json{{"n_cells", 32}, {"bc", "dirichlet"}, {"constraint_sign", 1}});
  CHECK(cmd_verify(dirichlet, s.root() / "vd", {}, diag) == kExitSuccess);
}

TEST_CASE("verify catches a sabotaged generator") {
  Scratch s;
  std::ostringstream diag;
  VerifyHooks hooks;
  hooks.mutate_operators = [](OperatorSet& ops) {
    const double h = ops.grid->h();
    ops.A.add(0, 1, 100.0 / (h * h));
  };
  const fs::path cfg = s.write("v.json", json{{"n_cells", 16}});
  CHECK(cmd_verify(cfg, s.root() / "out", hooks, diag) == kExitCheckFailed);
  const json report = read_json(s.root() / "out" / "verify.json");
  bool dissipativity_failed = false;
  for (const json& check : report) {
    if (check["name"].get<std::string>().starts_with("dissipativity") && check["passed"] == false) {
      dissipativity_failed = true;
    }
  }
  CHECK(dissipativity_failed);
  CHECK(diag.str().find("dissipativity") != std::string::npos);
}

TEST_CASE("converge subcommand") {
  Scratch s;
  std::ostringstream diag;
  const fs::path cfg = s.write("c.json", json{{"n_cells", 32},
                                              {"dt", 4e-3},
                                              {"t_end", 0.1},
                                              {"ic_u", {{"type", "gauss_bump"}, {"amplitude", 0.4}, {"center", 0.3}}},
                                              {"ic_v", {{"type", "cosine_mode"}, {"k", 1}, {"amplitude", 0.5}}}});
  CHECK(cmd_converge(cfg, s.root() / "out", diag) == kExitSuccess);
  const auto rows = read_csv(s.root() / "out" / "converge.csv");
  REQUIRE(!rows.empty());
  CHECK(rows[0] == std::vector<std::string>{"study", "level", "step", "error", "observed_order"});
  CHECK(rows.size() >= 1 + 3 * 3);
}
