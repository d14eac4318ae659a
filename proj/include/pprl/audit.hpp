#pragma once

#include <string>
#include <vector>

#include "pprl/config.hpp"

namespace pprl {

// One mechanism in an agent's pipeline: how its per-invocation budget is
// obtained through the composition chain, the noise scale that budget
// requires, and the scale the calibration actually configures.
struct AuditRow {
  std::string mechanism;
  double epsilon = 0.0;  // per-invocation budget after all splits
  double delta = 0.0;
  double sensitivity = 0.0;
  double required_sigma = 0.0;
  double configured_sigma = 0.0;
  double ratio = 0.0;  // configured / required
  bool pass = false;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  bool pass() const {
    for (const AuditRow& r : rows)
      if (!r.pass) return false;
    return true;
  }
};

// Walks the composition chain for the configured agent and compares the
// implied minimal noise scales against the configured calibration.
AuditReport audit_privacy_arithmetic(const AgentSpec& agent, const EnvSpec& env, int K);

std::string audit_report_text(const AuditReport& report);

}  // namespace pprl
