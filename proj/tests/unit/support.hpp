#pragma once

// Test-only helpers and oracles. Nothing here calls into the assembly code it checks.

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "pdae/grid.hpp"

namespace pdae::testing {

inline GridFn random_field(const GridPtr& grid, std::mt19937_64& rng, double amplitude = 1.0) {
  std::uniform_real_distribution<double> unit(-amplitude, amplitude);
  Eigen::VectorXd values(static_cast<Eigen::Index>(grid->n_nodes()));
  for (auto& x : values) {
    x = unit(rng);
  }
  return {grid, std::move(values)};
}

inline AlgState random_clamped(const GridPtr& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd interior(static_cast<Eigen::Index>(grid->n_interior()));
  for (auto& x : interior) {
    x = unit(rng);
  }
  return AlgState::from_interior(grid, interior);
}

/// Dense w_xxxx + w on interior nodes, built by substituting w_0 = w_N = 0 and the
/// ghosts w_{-1} = w_1, w_{N+1} = w_{N-1} into the five-point stencil node by node.
inline Eigen::MatrixXd dense_clamped_biharmonic(std::size_t n_cells) {
  const int N = static_cast<int>(n_cells);
  const double h = 1.0 / N;
  const int m = N - 1;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  const double stencil[5] = {1, -4, 6, -4, 1};
  for (int i = 1; i <= N - 1; ++i) {
    for (int s = -2; s <= 2; ++s) {
      int node = i + s;
      if (node == -1) node = 1;
      if (node == N + 1) node = N - 1;
      if (node == 0 || node == N) continue;
      L(i - 1, node - 1) += stencil[s + 2] / std::pow(h, 4);
    }
    L(i - 1, i - 1) += 1.0;
  }
  return L;
}

/// Dense Neumann Laplacian from the mirror-ghost stencil.
inline Eigen::MatrixXd dense_neumann_laplacian(std::size_t n_cells) {
  const int N = static_cast<int>(n_cells);
  const double h = 1.0 / N;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) {
    const int left = i == 0 ? 1 : i - 1;
    const int right = i == N ? N - 1 : i + 1;
    A(i, left) += 1.0 / (h * h);
    A(i, right) += 1.0 / (h * h);
    A(i, i) -= 2.0 / (h * h);
  }
  return A;
}

inline double manufactured_w(double x) { return x * x * (1 - x) * (1 - x); }

}  // namespace pdae::testing
