#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "levycop/harness.hpp"

namespace levycop {

struct AcceptanceOptions {
  //! Worker threads for the Monte Carlo criteria; 0 selects all cores.
  int workers = 0;
  //! When set, Monte Carlo criteria write their report to report_dir / id.
  std::optional<std::filesystem::path> report_dir;
};

struct AcceptanceOutcome {
  std::string id;
  bool passed = false;
  std::string summary;
  std::vector<std::string> details;
  std::optional<ExperimentResult> experiment;
  double runtime_s = 0.0;
};

//! "AC-1" ... "AC-9".
std::vector<std::string> acceptance_ids();

//! Runs one criterion; exceptions are reported as a failed outcome.
AcceptanceOutcome run_acceptance(const std::string& id, const AcceptanceOptions& opts = {});

//! "AC-k PASS|FAIL  summary".
std::string format_outcome(const AcceptanceOutcome& outcome);

}  // namespace levycop
