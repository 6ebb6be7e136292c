#pragma once

// Inter-microgrid coordinator. Works like a tracker: microgrids register and
// announce their residual deficit or surplus each slot, and the matcher splits
// every deficit across directly linked surplus microgrids. Deficits are served
// in tit-for-tat order: the larger a microgrid's lifetime net export, the
// earlier it is served.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "packetgrid/energy_server.hpp"
#include "packetgrid/pem.hpp"
#include "packetgrid/rational.hpp"

namespace packetgrid {

struct InterconnectLink {
  std::string link_id;
  std::string endpoint_a;
  std::string endpoint_b;
  Wh capacity_wh_per_slot = 0;  // shared by both directions
  Rational loss_factor;          // fraction of sent energy lost, in [0, 1)

  bool connects(const std::string& x, const std::string& y) const {
    return (endpoint_a == x && endpoint_b == y) || (endpoint_a == y && endpoint_b == x);
  }
};

struct Transfer {
  Slot slot = 0;
  std::string from_microgrid;
  std::string to_microgrid;
  std::string link_id;
  Wh sent_wh = 0;
  Wh received_wh = 0;
  Wh loss_wh = 0;

  friend bool operator==(const Transfer&, const Transfer&) = default;
};

/// Lifetime net contribution per microgrid, in sent watt-hours.
struct ReciprocityLedger {
  std::map<std::string, Wh> balance;

  Wh of(const std::string& microgrid_id) const {
    auto it = balance.find(microgrid_id);
    return it == balance.end() ? 0 : it->second;
  }
  friend bool operator==(const ReciprocityLedger&, const ReciprocityLedger&) = default;
};

struct ParticipationChange {
  Slot effective_slot = 0;
  bool opted_in = true;
};

struct Registration {
  std::string microgrid_id;
  std::vector<ParticipationChange> history;  // ascending effective_slot

  bool opted_in_at(Slot slot) const;
};

/// Checks ids, endpoint distinctness, one link per pair, loss factor < 1.
void validate_links(std::span<const InterconnectLink> links, std::span<const std::string> microgrid_ids);

/// Deficit holders in service order: balance descending, then id ascending.
std::vector<std::string> deficit_service_order(std::span<const Announcement> announcements,
                                               const ReciprocityLedger& ledger);

/// Throws ProtocolViolation on a duplicate announcement.
std::vector<Transfer> match(std::span<const Announcement> announcements, std::span<const InterconnectLink> links,
                            const ReciprocityLedger& ledger, Slot slot);

struct MicrogridFlow {
  Wh incoming_wh = 0;  // received
  Wh outgoing_wh = 0;  // sent
  Wh losses_wh = 0;    // lost on transfers this microgrid received
};

struct LinkUsage {
  Slot slot = 0;
  std::string link_id;
  Wh used_wh = 0;
  Wh capacity_wh = 0;
};

struct Settlement {
  std::map<std::string, MicrogridFlow> flows;
  std::vector<LinkUsage> link_usage;
};

/// Aggregates transfers per microgrid and audits link usage. Throws
/// InvariantFailure when a link is over capacity, a transfer has no direct
/// link, or a transfer's loss arithmetic is inconsistent.
Settlement settle(std::span<const Transfer> transfers, std::span<const InterconnectLink> links, Slot slot);

/// Exporter += sent, importer -= sent. Losses stay on the link audit.
void update_reciprocity(ReciprocityLedger& ledger, std::span<const Transfer> transfers);

class HyperServer {
 public:
  HyperServer(std::vector<std::string> microgrid_ids, std::vector<InterconnectLink> links);

  /// Participation change effective from slot + 1. Throws ConfigError for an
  /// unknown microgrid.
  const Registration& register_microgrid(const std::string& microgrid_id, bool opted_in, Slot slot);

  bool participates(const std::string& microgrid_id, Slot slot) const;

  /// Filters out opted-out microgrids, matches, settles and updates the
  /// reciprocity ledger. Transfers and link usage are appended to the audit.
  Settlement run_slot(std::span<const Announcement> announcements, Slot slot);

  const ReciprocityLedger& ledger() const { return ledger_; }
  const std::vector<Transfer>& transfers() const { return transfers_; }
  const std::vector<LinkUsage>& link_audit() const { return link_audit_; }
  const std::vector<InterconnectLink>& links() const { return links_; }

 private:
  std::map<std::string, Registration> registrations_;
  std::vector<InterconnectLink> links_;
  ReciprocityLedger ledger_;
  std::vector<Transfer> transfers_;
  std::vector<LinkUsage> link_audit_;
};

}  // namespace packetgrid
