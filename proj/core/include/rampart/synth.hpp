#pragma once

#include <string>

#include "rampart/pcap.hpp"
#include "rampart/rng.hpp"

namespace rampart {

// Benign traffic mix, flows per second per archetype. Flow inter-arrivals are
// exponential; payload sizes and pacing are drawn per archetype below.
struct BenignMix {
  double web_flows_per_s = 3.0;        // HTTP GET + response on port 80
  double keepalive_flows_per_s = 1.5;  // sparse empty ACKs on a long-lived conn
  double ssh_flows_per_s = 0.8;        // small interactive segments on port 22
  double dns_flows_per_s = 1.5;        // UDP query/response
  double icmp_flows_per_s = 0.3;       // echo request/reply
};

struct AttackSpec {
  enum class Kind { kNone, kSynFlood, kHttpGetFlood };
  Kind kind = Kind::kNone;
  double rate = 15.0;  // SYN packets/s, or HTTP flood flows/s
  int source_pool = 50;
  std::string victim_ip = "203.0.113.80";
  uint16_t victim_port = 80;
  bool replies = true;        // victim answers SYNs while the backlog has room
  int backlog = 64;           // simulated half-open connection capacity
  double backlog_timeout_s = 3.0;
};

struct TrafficScenario {
  double duration_s = 60.0;
  uint64_t seed = 1;
  BenignMix benign;
  AttackSpec attack;
};

// Address plan (documentation ranges): benign clients in 192.0.2.0/24, benign
// servers in 203.0.113.0/24, attack sources in 198.51.100.0/24.
std::string attacker_cidr();
std::string benign_client_cidr();

// Benign-only traffic for the scenario's mix.
CaptureFile synth_benign(const TrafficScenario& sc);
// Attack-only traces.
CaptureFile synth_syn_flood(const TrafficScenario& sc);
CaptureFile synth_http_flood(const TrafficScenario& sc);
// Benign mix merged with the configured attack (the training-trace shape).
CaptureFile synth_scenario(const TrafficScenario& sc);

TrafficScenario scenario_from_json_file(const std::string& path);
std::string scenario_to_json(const TrafficScenario& sc);

}  // namespace rampart
