#include "packetgrid/pem.hpp"

#include "packetgrid/errors.hpp"

namespace packetgrid {

std::string_view to_string(LoadClass c) {
  return c == LoadClass::Interruptible ? "interruptible" : "uninterruptible";
}

LoadClass parse_load_class(std::string_view text) {
  if (text == "interruptible") return LoadClass::Interruptible;
  if (text == "uninterruptible") return LoadClass::Uninterruptible;
  throw ConfigError("unknown load class '" + std::string(text) + "'");
}

std::string_view to_string(SupplySource s) {
  switch (s) {
    case SupplySource::LocalGeneration: return "generation";
    case SupplySource::Storage: return "storage";
    case SupplySource::Import: return "import";
  }
  return "?";
}

std::string_view to_string(GrantKind k) {
  switch (k) {
    case GrantKind::Interruptible: return "interruptible";
    case GrantKind::RunStart: return "run_start";
    case GrantKind::RunContinue: return "run_continue";
  }
  return "?";
}

EnergyPacket make_packet(Wh configured_size_wh, std::string source, std::string sink) {
  if (configured_size_wh <= 0) throw ConfigError("packet size must be positive");
  return EnergyPacket{configured_size_wh, 1, std::move(source), std::move(sink)};
}

std::int64_t quantize_demand(Wh total_wh, Wh packet_size_wh) {
  if (packet_size_wh <= 0) {
    throw ConfigError("packet_size_wh must be positive, got " + std::to_string(packet_size_wh));
  }
  if (total_wh < 0) throw ConfigError("negative demand " + std::to_string(total_wh));
  return (total_wh + packet_size_wh - 1) / packet_size_wh;
}

PacketRequest make_request(const RequestSpec& spec, Wh packet_size_wh) {
  if (spec.earliest_start > spec.deadline) {
    throw ConfigError("device " + spec.device_id + ": empty window [" + std::to_string(spec.earliest_start) +
                      ", " + std::to_string(spec.deadline) + "]");
  }
  if (spec.total_wh <= 0) throw ConfigError("device " + spec.device_id + ": demand must be positive");

  PacketRequest r;
  r.request_id = spec.request_id;
  r.household_id = spec.household_id;
  r.device_id = spec.device_id;
  r.load_class = spec.load_class;
  r.priority = spec.priority;
  r.packet_count = quantize_demand(spec.total_wh, packet_size_wh);
  r.earliest_start = spec.earliest_start;
  r.deadline = spec.deadline;
  r.arrival_slot = spec.arrival_slot;

  if (r.load_class == LoadClass::Uninterruptible && r.window_length() < r.packet_count) {
    throw InfeasibleRequestError("device " + r.device_id + ": " + std::to_string(r.packet_count) +
                                 " contiguous packets do not fit window of " +
                                 std::to_string(r.window_length()) + " slots");
  }
  if (auto v = validate_request(r); !v.empty()) {
    throw ConfigError("device " + r.device_id + ": " + v.front().code + " (" + v.front().detail + ")");
  }
  return r;
}

std::vector<Violation> validate_request(const PacketRequest& r) {
  std::vector<Violation> out;
  if (r.earliest_start < 0 || r.deadline < 0 || r.arrival_slot < 0) {
    out.push_back({"negative slot", "slots must be non-negative"});
  }
  if (r.earliest_start > r.deadline) {
    out.push_back({"empty window", "earliest_start " + std::to_string(r.earliest_start) + " > deadline " +
                                       std::to_string(r.deadline)});
  }
  if (r.packet_count <= 0) {
    out.push_back({"non-positive packet count", "packet_count " + std::to_string(r.packet_count)});
  }
  if (r.load_class == LoadClass::Uninterruptible && r.packet_count > 0 && r.earliest_start <= r.deadline &&
      r.window_length() < r.packet_count) {
    out.push_back({"contiguous block cannot fit", std::to_string(r.packet_count) + " packets in window of " +
                                                      std::to_string(r.window_length())});
  }
  if (r.arrival_slot > r.earliest_start) {
    out.push_back({"arrival after earliest start", "arrival_slot " + std::to_string(r.arrival_slot) +
                                                       " > earliest_start " + std::to_string(r.earliest_start)});
  }
  return out;
}

}  // namespace packetgrid
