#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pdae/errors.hpp"
#include "pdae/grid.hpp"
#include "support.hpp"

using namespace pdae;
using pdae::testing::random_field;

TEST_CASE("grid nodes and weights") {
  for (std::size_t n : {1u, 2u, 7u, 64u, 1000u}) {
    const GridPtr g = make_grid(n);
    CHECK(g->weights().sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g->h() > 0.0);
    CHECK(g->nodes()[0] == 0.0);
    CHECK(g->nodes()[static_cast<Eigen::Index>(n)] == 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(g->nodes()[static_cast<Eigen::Index>(i + 1)] > g->nodes()[static_cast<Eigen::Index>(i)]);
    }
  }
  CHECK_THROWS_AS(Grid1D(0), DomainError);
}

TEST_CASE("GridFn rejects bad data") {
  const GridPtr g = make_grid(4);
  CHECK_THROWS_AS(GridFn(g, Eigen::VectorXd::Zero(4)), DimensionError);
  Eigen::VectorXd nan = Eigen::VectorXd::Zero(5);
  nan[2] = std::nan("");
  CHECK_THROWS_AS(GridFn(g, nan), InputError);
  nan[2] = INFINITY;
  CHECK_THROWS_AS(GridFn(g, nan), InputError);
}

TEST_CASE("l2_inner examples") {
  const GridPtr g = make_grid(64);
  const GridFn one = GridFn::constant(g, 1.0);
  CHECK(l2_inner(one, one) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(l2_inner(one, GridFn::zeros(g)) == 0.0);
  const GridFn c = GridFn::sample(g, [](double x) { return std::cos(std::numbers::pi * x); });
  CHECK(std::abs(l2_inner(c, c) - 0.5) <= 1e-3);
  CHECK_THROWS_AS(l2_inner(one, GridFn::constant(make_grid(32), 1.0)), DimensionError);
}

TEST_CASE("trapezoid rule integrates affine products exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  for (std::size_t n : {3u, 16u, 101u}) {
    const GridPtr g = make_grid(n);
    for (int trial = 0; trial < 20; ++trial) {
      const double a = coef(rng), b = coef(rng), c = coef(rng);
      const GridFn f = GridFn::sample(g, [&](double x) { return a + b * x; });
      const GridFn k = GridFn::constant(g, c);
      CHECK(std::abs(l2_inner(f, k) - c * (a + b / 2)) <= 1e-13 * (1 + std::abs(c * (a + b))));
    }
  }
}

TEST_CASE("norm_E examples and properties") {
  const GridPtr g = make_grid(32);
  CHECK(norm_E(DiffState::zeros(g)) == 0.0);
  CHECK(norm_E(DiffState(GridFn::constant(g, 1.0), GridFn::zeros(g))) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(norm_E(DiffState(GridFn::constant(g, 3.0), GridFn::constant(g, 4.0))) ==
        doctest::Approx(5.0).epsilon(1e-14));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> alpha(-10.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const DiffState V1(random_field(g, rng), random_field(g, rng));
    const DiffState V2(random_field(g, rng), random_field(g, rng));
    const double a = alpha(rng);
    CHECK(std::abs(norm_E(V1 * a) - std::abs(a) * norm_E(V1)) <= 1e-12 * (1 + std::abs(a) * norm_E(V1)));
    CHECK(norm_E(V1 + V2) <= norm_E(V1) + norm_E(V2) + 1e-12);
  }
}

TEST_CASE("state invariants") {
  const GridPtr g = make_grid(8);
  CHECK_THROWS_AS(DiffState(GridFn::zeros(g), GridFn::zeros(make_grid(9))), DimensionError);
  CHECK_THROWS_AS(AlgState(GridFn::constant(g, 1.0)), InputError);
  CHECK_THROWS_AS(FullState(DiffState::zeros(g), AlgState::zeros(g), -1.0), DomainError);
  CHECK_THROWS_AS(FullState(DiffState::zeros(g), AlgState::zeros(make_grid(4))), DimensionError);
  const AlgState w = AlgState::from_interior(g, Eigen::VectorXd::Ones(7));
  CHECK(w.w()[0] == 0.0);
  CHECK(w.w()[8] == 0.0);
  CHECK(w.interior().sum() == 7.0);
}
