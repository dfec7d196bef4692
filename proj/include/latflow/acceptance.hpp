#pragma once

#include <string>
#include <vector>

namespace latflow {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the full acceptance suite (10 criteria). Deterministic given `seed`.
std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed = 20240817);

}  // namespace latflow
