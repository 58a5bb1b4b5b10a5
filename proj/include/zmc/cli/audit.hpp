#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "zmc/residual.hpp"

namespace zmc::cli {

// Sampling plan used by `verify` and the audit for each equation: the
// interior lightcone with margin 0.02 T, the backward cone with rho <= 0.95,
// or the square [0, 0.5]^2 for the spacelike equation.
Sampler verification_sampler(EquationId eq, double T, int per_axis);

struct AuditClaim {
  std::string id;
  std::string description;
  std::string location;
  std::string claimed;
  std::string computed;
  std::string verdict;           // match | mismatch | qualitative-match | measured-no-claim
  std::string expected_verdict;  // fixed from the pre-build oracle runs
  nlohmann::json details = nlohmann::json::object();
};

struct AuditReport {
  std::vector<AuditClaim> claims;
  // Every verdict equals its expected verdict.
  bool as_expected() const;
};

AuditReport run_audit();

nlohmann::json to_json(const AuditReport& report);

}  // namespace zmc::cli
