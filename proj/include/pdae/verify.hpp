#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdae/config.hpp"

namespace pdae {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyHooks {
  /// Runs on a private copy of the assembled operators before any check (fault injection).
  std::function<void(OperatorSet&)> mutate_operators;
};

/// Operator-property harness on the config's grid: self-adjointness, dissipativity,
/// maximality, contraction and semigroup law of exp(tA), SPD and coercivity of the
/// constraint operator, the constraint solve certificate, and the local Lipschitz
/// structure of F, G, L^{-1} and K.
std::vector<CheckResult> run_verification(const RunConfig& cfg, const VerifyHooks& hooks = {});

nlohmann::json to_json(const std::vector<CheckResult>& checks);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace pdae
