#include "rampart/packet.hpp"

#include <cstring>

#include "rampart/error.hpp"

namespace rampart {

namespace {

uint16_t rd16(const uint8_t* p) { return static_cast<uint16_t>((p[0] << 8) | p[1]); }

uint32_t rd32(const uint8_t* p) {
  return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
         (static_cast<uint32_t>(p[2]) << 8) | static_cast<uint32_t>(p[3]);
}

bool looks_like_http(const uint8_t* payload, size_t len) {
  static const char* prefixes[] = {"GET ", "POST ", "HEAD ", "PUT ", "DELETE ", "HTTP/"};
  for (const char* p : prefixes) {
    const size_t n = std::strlen(p);
    if (len >= n && std::memcmp(payload, p, n) == 0) return true;
  }
  return false;
}

}  // namespace

std::optional<PacketRecord> decode_frame(const RawFrame& frame, DecodeStats& stats) {
  const auto& b = frame.bytes;
  if (b.size() < 14) {
    ++stats.malformed;
    return std::nullopt;
  }
  const uint16_t ethertype = rd16(b.data() + 12);
  if (ethertype == 0x86DD) {
    ++stats.ipv6;
    return std::nullopt;
  }
  if (ethertype != 0x0800) {
    ++stats.non_ip;
    return std::nullopt;
  }
  const uint8_t* ip = b.data() + 14;
  const size_t ip_avail = b.size() - 14;
  if (ip_avail < 20 || (ip[0] >> 4) != 4) {
    ++stats.malformed;
    return std::nullopt;
  }
  const size_t ihl = static_cast<size_t>(ip[0] & 0x0F) * 4;
  const uint16_t total_len = rd16(ip + 2);
  if (ihl < 20 || ip_avail < total_len || total_len < ihl) {
    ++stats.malformed;
    return std::nullopt;
  }

  PacketRecord r;
  r.ts_us = frame.ts_us;
  r.src_ip = rd32(ip + 12);
  r.dst_ip = rd32(ip + 16);
  r.ip_flags = static_cast<uint8_t>(rd16(ip + 6) >> 13);
  r.ip_total_len = total_len;
  r.protocol = ip[9];
  r.protocols_mask = kProtoIp;

  const uint8_t* tp = ip + ihl;
  const size_t tp_len = total_len - ihl;

  if (r.protocol == 6 && tp_len >= 20) {
    r.protocols_mask |= kProtoTcp;
    r.highest_layer = kLayerTcp;
    r.src_port = rd16(tp);
    r.dst_port = rd16(tp + 2);
    r.tcp_seq = rd32(tp + 4);
    r.tcp_ack = rd32(tp + 8);
    const size_t doff = static_cast<size_t>(tp[12] >> 4) * 4;
    r.tcp_flags = static_cast<uint16_t>(((tp[12] & 0x01) << 8) | tp[13]);
    r.tcp_has_ack = (r.tcp_flags & kTcpAck) != 0;
    r.tcp_win = rd16(tp + 14);
    if (doff >= 20 && tp_len >= doff) {
      r.tcp_payload_len = static_cast<uint16_t>(tp_len - doff);
      const uint8_t* payload = tp + doff;
      if (r.tcp_payload_len > 0) {
        // Content-based, like a dissector: arbitrary bytes on port 80 are
        // still just TCP.
        if (looks_like_http(payload, r.tcp_payload_len)) {
          r.protocols_mask |= kProtoHttp;
          r.highest_layer = kLayerHttp;
        } else if (r.src_port == 443 || r.dst_port == 443) {
          r.protocols_mask |= kProtoTls;
          r.highest_layer = kLayerTls;
        }
      }
    }
  } else if (r.protocol == 17 && tp_len >= 8) {
    r.protocols_mask |= kProtoUdp;
    r.highest_layer = kLayerUdp;
    r.src_port = rd16(tp);
    r.dst_port = rd16(tp + 2);
    r.udp_len = rd16(tp + 4);
    if (r.src_port == 53 || r.dst_port == 53) {
      r.protocols_mask |= kProtoDns;
      r.highest_layer = kLayerDns;
    }
  } else if (r.protocol == 1 && tp_len >= 4) {
    r.protocols_mask |= kProtoIcmp;
    r.highest_layer = kLayerIcmp;
    r.icmp_type = tp[0];
  }
  return r;
}

std::vector<PacketRecord> decode_capture(const CaptureFile& capture, DecodeStats* stats) {
  if (capture.link_type != 1) {
    throw UnsupportedError("unsupported link type " + std::to_string(capture.link_type) +
                           " (only Ethernet captures are handled)");
  }
  DecodeStats local;
  DecodeStats& st = stats ? *stats : local;
  std::vector<PacketRecord> out;
  out.reserve(capture.frames.size());
  for (const RawFrame& f : capture.frames) {
    if (auto r = decode_frame(f, st)) out.push_back(*r);
  }
  return out;
}

std::vector<PacketRecord> parse_capture(const std::filesystem::path& path,
                                        DecodeStats* stats) {
  return decode_capture(read_pcap(path), stats);
}

std::string ip_to_string(uint32_t ip) {
  return std::to_string((ip >> 24) & 0xFF) + "." + std::to_string((ip >> 16) & 0xFF) +
         "." + std::to_string((ip >> 8) & 0xFF) + "." + std::to_string(ip & 0xFF);
}

uint32_t ip_from_string(const std::string& s) {
  uint32_t parts[4];
  size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    size_t next = (i < 3) ? s.find('.', pos) : s.size();
    if (next == std::string::npos) throw ConfigError("bad IPv4 address '" + s + "'");
    const std::string tok = s.substr(pos, next - pos);
    if (tok.empty() || tok.size() > 3) throw ConfigError("bad IPv4 address '" + s + "'");
    for (char c : tok) {
      if (c < '0' || c > '9') throw ConfigError("bad IPv4 address '" + s + "'");
    }
    const unsigned long v = std::stoul(tok);
    if (v > 255) throw ConfigError("bad IPv4 address '" + s + "'");
    parts[i] = static_cast<uint32_t>(v);
    pos = next + 1;
  }
  return (parts[0] << 24) | (parts[1] << 16) | (parts[2] << 8) | parts[3];
}

}  // namespace rampart
