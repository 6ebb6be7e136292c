#pragma once

// Post-hoc checks over a finished run. They rebuild request state from the
// request list, grant log and denials alone, without the scheduler.

#include <string>
#include <vector>

#include "packetgrid/engine.hpp"
#include "packetgrid/metrics.hpp"

namespace packetgrid {

struct AuditFinding {
  std::string microgrid_id;
  Slot slot = 0;
  RequestId request_id = 0;
  std::string what;
};

/// No packet goes to a request (other than a continuing uninterruptible run)
/// while a strictly higher-priority grantable request is left unmet that slot.
std::vector<AuditFinding> audit_priority_soundness(const MicrogridRun& run);

/// Uninterruptible grants are one packet per slot in unbroken runs, and every
/// completed request's last run covers exactly its packet count.
std::vector<AuditFinding> audit_contiguity(const MicrogridRun& run);

/// Every slot ledger balances exactly.
std::vector<AuditFinding> audit_ledgers(const MicrogridRun& run);

/// All of the above over every microgrid.
std::vector<AuditFinding> audit_run(const RunResult& result);

}  // namespace packetgrid
