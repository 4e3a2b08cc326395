#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "evapctl/config.hpp"

namespace evapctl {

struct VerifyRow {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;  ///< human-readable context; error text for rows that threw
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  bool all_pass() const;
  const VerifyRow* find(const std::string& name) const;
};

struct VerifyOptions {
  int lipschitz_pairs = 20;
  int taylor_directions = 3;
  std::vector<double> taylor_eps = {0.2, 0.1, 0.05, 0.025};
  int gradcheck_directions = 5;
  double gradcheck_eps = 1e-3;
};

/// Runs the property suite on the configured problem, in order: conservation, bounds with
/// theta = 0, Lipschitz panel, Taylor ladder, duality identity, gradient check, stationarity
/// of a manufactured optimum, projection characterization. A check that throws becomes a
/// failing row; nothing escapes. Deterministic given cfg.seed.
VerifyReport run_verify(const RunConfig& cfg, const VerifyOptions& opts = {});

/// verify_report.csv: "name,measured,threshold,pass".
void write_verify_report(const std::filesystem::path& path, const VerifyReport& report);

}  // namespace evapctl
