#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rampart/packet.hpp"

namespace rampart {

inline constexpr int kSampleRows = 10;  // packets per sample
inline constexpr int kSampleCols = 11;  // features per packet

// Fixed feature column order, shared by extraction, generation, augmentation
// and the detector. Index 11 ("flow_length") is not a matrix column; it names
// the padded-rows perturbation target in augmentation plans.
enum Feature : int {
  kFeatTime = 0,
  kFeatPacketLen = 1,
  kFeatHighestLayer = 2,
  kFeatIpFlags = 3,
  kFeatProtocols = 4,
  kFeatTcpLen = 5,
  kFeatTcpAck = 6,
  kFeatTcpFlags = 7,
  kFeatTcpWin = 8,
  kFeatUdpLen = 9,
  kFeatIcmpType = 10,
  kFeatFlowLength = 11,
};

inline constexpr std::array<const char*, 12> kFeatureNames = {
    "time",     "packet_len", "highest_layer", "ip_flags", "protocols", "tcp_len",
    "tcp_ack",  "tcp_flags",  "tcp_win",       "udp_len",  "icmp_type", "flow_length",
};

int feature_from_name(const std::string& name);

// Canonical bidirectional 5-tuple: the lower (ip, port) endpoint always comes
// first, so key(a->b) == key(b->a).
struct FlowKey {
  uint32_t ip_a = 0;
  uint16_t port_a = 0;
  uint32_t ip_b = 0;
  uint16_t port_b = 0;
  uint8_t proto = 0;

  static FlowKey from_packet(const PacketRecord& r);
  bool operator==(const FlowKey&) const = default;
  auto tie() const { return std::tie(ip_a, port_a, ip_b, port_b, proto); }
  bool operator<(const FlowKey& o) const { return tie() < o.tie(); }
  std::string str() const;
  static FlowKey parse(const std::string& s);
};

enum class Provenance : uint8_t {
  kOriginal = 0,
  kGadot = 1,
  kBfp = 2,
  kFgsm = 3,
  kDuplicateBenign = 4,
};

const char* provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& s);

// One 10x11 sample. Rows [flow_length..10) are exactly zero for extracted
// samples; feature-space augmentation may fill them (and then updates
// flow_length accordingly).
struct Sample {
  std::array<double, kSampleRows * kSampleCols> matrix{};
  int flow_length = 0;
  FlowKey key{};
  int64_t window = 0;
  int label = -1;  // -1 unlabeled, 0 benign, 1 DDoS
  Provenance provenance = Provenance::kOriginal;

  double& at(int row, int col) { return matrix[static_cast<size_t>(row * kSampleCols + col)]; }
  double at(int row, int col) const {
    return matrix[static_cast<size_t>(row * kSampleCols + col)];
  }
  // Count of rows that are not entirely zero, scanning from the end.
  int nonzero_rows() const;
};

struct ExtractOptions {
  double window_seconds = 10.0;
  int max_packets = kSampleRows;
};

// Raw (unnormalized) feature row for one packet. `window_first_us` is the
// timestamp of the first packet in the window; `ack_baseline` is the ack
// number of the first ACK-bearing packet of this flow in this window (TCP Ack
// is stored relative to it, modulo 2^32).
std::array<double, kSampleCols> featurize(const PacketRecord& r, uint64_t window_first_us,
                                          uint32_t ack_baseline);

// Groups packets into (flow, tumbling window) samples. Windows align to the
// first packet of the trace; rows are time-ordered with capture order breaking
// ties; flows longer than max_packets are truncated, shorter ones zero-padded.
// Output is sorted by (window, key).
std::vector<Sample> extract_samples(const std::vector<PacketRecord>& packets,
                                    const ExtractOptions& options = {});

struct NormalizationProfile {
  std::array<double, kSampleCols> min{};
  std::array<double, kSampleCols> max{};
};

// Fits per-feature min/max over the real (non-padded) rows.
NormalizationProfile fit_normalization(const std::vector<Sample>& samples);
// Maps real rows to [0,1]; a degenerate feature (max == min) maps to 0. With
// `clamp` set (test time), out-of-range values saturate at 0/1.
void apply_normalization(std::vector<Sample>& samples, const NormalizationProfile& p,
                         bool clamp);

// Minimal CIDR matcher for endpoint filters ("10.0.0.5" or "198.51.100.0/24").
struct CidrRange {
  uint32_t addr = 0;
  int prefix = 32;
  bool contains(uint32_t ip) const;
  static CidrRange parse(const std::string& s);
};

class IpSet {
 public:
  IpSet() = default;
  static IpSet parse(const std::vector<std::string>& specs);
  bool contains(uint32_t ip) const;
  bool empty() const { return ranges_.empty(); }
  bool overlaps(const IpSet& other) const;
  const std::vector<CidrRange>& ranges() const { return ranges_; }

 private:
  std::vector<CidrRange> ranges_;
};

// Labels a sample 1 iff its flow connects an attacker to a victim, else 0.
void label_by_endpoints(std::vector<Sample>& samples, const IpSet& attackers,
                        const IpSet& victims);

}  // namespace rampart
