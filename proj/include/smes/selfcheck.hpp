#pragma once

#include <string>
#include <vector>

namespace smes {

/// Knobs exist so a test can perturb an oracle and watch the suite go red;
/// production callers use the defaults.
struct SelfcheckOptions {
  double adam_oracle_alpha = 0.5;  // balance coefficient fed to the Adam-equivalence run
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the embedded numerical invariant suites: SGD-limit equivalence,
/// Adam equivalence against a textbook reference, the gradient-scale law,
/// bias-correction exactness, and finite-difference gradient checks.
std::vector<SuiteResult> run_selfcheck(const SelfcheckOptions& options = {});

}  // namespace smes
