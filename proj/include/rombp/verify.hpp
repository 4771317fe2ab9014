#pragma once

#include <string>
#include <vector>

namespace rombp {

struct CheckInfo {
  std::string name;
  std::string description;
  double tolerance;
};

struct CheckResult {
  CheckInfo info;
  bool passed = false;
  double value = 0.0;  // the measured error the tolerance applies to
  std::string detail;
};

struct VerifyOptions {
  // Relative perturbation added to the measured data before the ROM is built;
  // the reference data stays clean. Zero disables it.
  double perturbation = 0.0;
};

const std::vector<CheckInfo>& verify_checks();

// Runs the named checks in registry order (all of them when `names` is
// empty). Unknown names throw ValidationError.
std::vector<CheckResult> run_verify(const std::vector<std::string>& names,
                                    const VerifyOptions& options = {});

}  // namespace rombp
