#pragma once

#include <functional>
#include <string>

#include "pplab/report.hpp"

namespace pplab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  json details;
};

struct AcceptanceOptions {
  // called after each criterion finishes; used for live PASS/FAIL lines
  std::function<void(const CriterionResult&)> on_result;
  std::uint64_t seed = 20240901;
};

/// Run the full acceptance suite (all eleven criteria at their pinned
/// resolutions and tolerances). Deterministic for a fixed seed.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

/// Single criterion by id (1..11).
CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});

}  // namespace pplab
