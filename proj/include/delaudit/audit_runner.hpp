#pragma once

#include <string>

namespace delaudit {

// One audit described by a config document (JSON text). Reports embed the
// config, so a report can be replayed and byte-compared.
struct AuditResult {
  bool passed = false;
  std::string report_json;  // canonical key order, deterministic bytes
};

AuditResult run_audit_config(const std::string& config_json);

// Re-runs the config embedded in a report; returns true iff the recomputed
// report is byte-identical.
bool replay_report(const std::string& report_json, std::string* recomputed);

}  // namespace delaudit
