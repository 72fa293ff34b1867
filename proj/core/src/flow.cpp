#include "rampart/flow.hpp"

#include <algorithm>
#include <map>

#include "rampart/error.hpp"

namespace rampart {

int feature_from_name(const std::string& name) {
  for (size_t i = 0; i < kFeatureNames.size(); ++i) {
    if (name == kFeatureNames[i]) return static_cast<int>(i);
  }
  throw ConfigError("unknown feature '" + name + "'");
}

FlowKey FlowKey::from_packet(const PacketRecord& r) {
  FlowKey k;
  k.proto = r.protocol;
  const bool src_first =
      std::make_pair(r.src_ip, r.src_port) <= std::make_pair(r.dst_ip, r.dst_port);
  if (src_first) {
    k.ip_a = r.src_ip;
    k.port_a = r.src_port;
    k.ip_b = r.dst_ip;
    k.port_b = r.dst_port;
  } else {
    k.ip_a = r.dst_ip;
    k.port_a = r.dst_port;
    k.ip_b = r.src_ip;
    k.port_b = r.src_port;
  }
  return k;
}

std::string FlowKey::str() const {
  return ip_to_string(ip_a) + ":" + std::to_string(port_a) + "-" + ip_to_string(ip_b) +
         ":" + std::to_string(port_b) + "/" + std::to_string(proto);
}

FlowKey FlowKey::parse(const std::string& s) {
  const size_t dash = s.find('-');
  const size_t slash = s.rfind('/');
  if (dash == std::string::npos || slash == std::string::npos || slash < dash) {
    throw ParseError("bad flow key '" + s + "'");
  }
  auto parse_endpoint = [](const std::string& ep, uint32_t& ip, uint16_t& port) {
    const size_t colon = ep.rfind(':');
    if (colon == std::string::npos) throw ParseError("bad endpoint '" + ep + "'");
    ip = ip_from_string(ep.substr(0, colon));
    port = static_cast<uint16_t>(std::stoul(ep.substr(colon + 1)));
  };
  FlowKey k;
  parse_endpoint(s.substr(0, dash), k.ip_a, k.port_a);
  parse_endpoint(s.substr(dash + 1, slash - dash - 1), k.ip_b, k.port_b);
  k.proto = static_cast<uint8_t>(std::stoul(s.substr(slash + 1)));
  return k;
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kOriginal: return "original";
    case Provenance::kGadot: return "gadot";
    case Provenance::kBfp: return "bfp";
    case Provenance::kFgsm: return "fgsm";
    case Provenance::kDuplicateBenign: return "duplicate-benign";
  }
  return "original";
}

Provenance provenance_from_name(const std::string& s) {
  for (Provenance p : {Provenance::kOriginal, Provenance::kGadot, Provenance::kBfp,
                       Provenance::kFgsm, Provenance::kDuplicateBenign}) {
    if (s == provenance_name(p)) return p;
  }
  throw ParseError("unknown provenance '" + s + "'");
}

int Sample::nonzero_rows() const {
  int n = kSampleRows;
  while (n > 0) {
    bool all_zero = true;
    for (int c = 0; c < kSampleCols; ++c) {
      if (at(n - 1, c) != 0.0) {
        all_zero = false;
        break;
      }
    }
    if (!all_zero) break;
    --n;
  }
  return n;
}

std::array<double, kSampleCols> featurize(const PacketRecord& r, uint64_t window_first_us,
                                          uint32_t ack_baseline) {
  std::array<double, kSampleCols> row{};
  row[kFeatTime] = static_cast<double>(r.ts_us - window_first_us) / 1e6;
  row[kFeatPacketLen] = r.ip_total_len;
  row[kFeatHighestLayer] = r.highest_layer;
  row[kFeatIpFlags] = r.ip_flags;
  row[kFeatProtocols] = r.protocols_mask;
  row[kFeatTcpLen] = r.tcp_payload_len;
  row[kFeatTcpAck] =
      r.tcp_has_ack ? static_cast<double>(static_cast<uint32_t>(r.tcp_ack - ack_baseline))
                    : 0.0;
  row[kFeatTcpFlags] = r.tcp_flags;
  row[kFeatTcpWin] = r.protocol == 6 ? r.tcp_win : 0.0;
  row[kFeatUdpLen] = r.udp_len;
  row[kFeatIcmpType] = r.icmp_type;
  return row;
}

std::vector<Sample> extract_samples(const std::vector<PacketRecord>& packets,
                                    const ExtractOptions& options) {
  if (options.window_seconds <= 0.0) {
    throw ConfigError("extract: window length must be positive");
  }
  if (options.max_packets < 1) {
    throw ConfigError("extract: max packets per sample must be >= 1");
  }
  if (packets.empty()) return {};

  // Stable time order; capture order breaks timestamp ties.
  std::vector<size_t> order(packets.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return packets[a].ts_us < packets[b].ts_us;
  });

  const uint64_t t0 = packets[order[0]].ts_us;
  const uint64_t window_us =
      static_cast<uint64_t>(options.window_seconds * 1e6 + 0.5);

  std::map<int64_t, uint64_t> window_first;
  std::map<std::pair<int64_t, FlowKey>, std::vector<size_t>> groups;
  for (size_t idx : order) {
    const PacketRecord& p = packets[idx];
    const int64_t w = static_cast<int64_t>((p.ts_us - t0) / window_us);
    window_first.emplace(w, p.ts_us);  // first packet of the window wins
    groups[{w, FlowKey::from_packet(p)}].push_back(idx);
  }

  std::vector<Sample> out;
  out.reserve(groups.size());
  for (const auto& [key, idxs] : groups) {
    Sample s;
    s.window = key.first;
    s.key = key.second;
    s.flow_length = static_cast<int>(
        std::min<size_t>(idxs.size(), static_cast<size_t>(options.max_packets)));
    uint32_t ack_baseline = 0;
    for (size_t i : idxs) {
      if (packets[i].tcp_has_ack) {
        ack_baseline = packets[i].tcp_ack;
        break;
      }
    }
    const uint64_t wf = window_first.at(key.first);
    const int rows = std::min(s.flow_length, kSampleRows);
    for (int r = 0; r < rows; ++r) {
      auto row = featurize(packets[idxs[static_cast<size_t>(r)]], wf, ack_baseline);
      for (int c = 0; c < kSampleCols; ++c) s.at(r, c) = row[static_cast<size_t>(c)];
    }
    out.push_back(s);
  }
  // std::map iteration already yields (window, key) order; keep it explicit.
  std::sort(out.begin(), out.end(), [](const Sample& a, const Sample& b) {
    return std::make_pair(a.window, a.key) < std::make_pair(b.window, b.key);
  });
  return out;
}

NormalizationProfile fit_normalization(const std::vector<Sample>& samples) {
  if (samples.empty()) throw ConfigError("fit_normalization: no samples");
  NormalizationProfile p;
  bool first = true;
  for (const Sample& s : samples) {
    for (int r = 0; r < s.flow_length; ++r) {
      for (int c = 0; c < kSampleCols; ++c) {
        const double v = s.at(r, c);
        if (first) {
          p.min[static_cast<size_t>(c)] = v;
          p.max[static_cast<size_t>(c)] = v;
        } else {
          p.min[static_cast<size_t>(c)] = std::min(p.min[static_cast<size_t>(c)], v);
          p.max[static_cast<size_t>(c)] = std::max(p.max[static_cast<size_t>(c)], v);
        }
      }
      first = false;
    }
  }
  return p;
}

void apply_normalization(std::vector<Sample>& samples, const NormalizationProfile& p,
                         bool clamp) {
  for (Sample& s : samples) {
    for (int r = 0; r < s.flow_length; ++r) {
      for (int c = 0; c < kSampleCols; ++c) {
        const double lo = p.min[static_cast<size_t>(c)];
        const double hi = p.max[static_cast<size_t>(c)];
        double v = s.at(r, c);
        v = (hi > lo) ? (v - lo) / (hi - lo) : 0.0;
        if (clamp) v = std::clamp(v, 0.0, 1.0);
        s.at(r, c) = v;
      }
    }
  }
}

bool CidrRange::contains(uint32_t ip) const {
  if (prefix == 0) return true;
  const uint32_t mask = prefix >= 32 ? 0xFFFFFFFFu : ~((1u << (32 - prefix)) - 1);
  return (ip & mask) == (addr & mask);
}

CidrRange CidrRange::parse(const std::string& s) {
  CidrRange r;
  const size_t slash = s.find('/');
  if (slash == std::string::npos) {
    r.addr = ip_from_string(s);
    r.prefix = 32;
  } else {
    r.addr = ip_from_string(s.substr(0, slash));
    r.prefix = std::stoi(s.substr(slash + 1));
    if (r.prefix < 0 || r.prefix > 32) throw ConfigError("bad prefix in '" + s + "'");
  }
  return r;
}

IpSet IpSet::parse(const std::vector<std::string>& specs) {
  IpSet set;
  for (const auto& s : specs) set.ranges_.push_back(CidrRange::parse(s));
  return set;
}

bool IpSet::contains(uint32_t ip) const {
  for (const auto& r : ranges_) {
    if (r.contains(ip)) return true;
  }
  return false;
}

bool IpSet::overlaps(const IpSet& other) const {
  for (const auto& r : ranges_) {
    if (other.contains(r.addr)) return true;
  }
  for (const auto& r : other.ranges_) {
    if (contains(r.addr)) return true;
  }
  return false;
}

void label_by_endpoints(std::vector<Sample>& samples, const IpSet& attackers,
                        const IpSet& victims) {
  if (attackers.empty()) {
    throw ConfigError("label_by_endpoints: attacker set is empty");
  }
  if (victims.empty()) {
    throw ConfigError("label_by_endpoints: victim set is empty");
  }
  if (attackers.overlaps(victims)) {
    throw ConfigError("label_by_endpoints: attacker and victim sets overlap");
  }
  for (Sample& s : samples) {
    const bool atk_a = attackers.contains(s.key.ip_a);
    const bool atk_b = attackers.contains(s.key.ip_b);
    const bool vic_a = victims.contains(s.key.ip_a);
    const bool vic_b = victims.contains(s.key.ip_b);
    s.label = ((atk_a && vic_b) || (atk_b && vic_a)) ? 1 : 0;
  }
}

}  // namespace rampart
