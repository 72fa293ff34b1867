#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rampart/pcap.hpp"

namespace rampart {

// TCP flag bits (9-bit field: NS plus the classic byte-13 flags).
inline constexpr uint16_t kTcpFin = 0x001;
inline constexpr uint16_t kTcpSyn = 0x002;
inline constexpr uint16_t kTcpRst = 0x004;
inline constexpr uint16_t kTcpPsh = 0x008;
inline constexpr uint16_t kTcpAck = 0x010;
inline constexpr uint16_t kTcpUrg = 0x020;

// Protocol-presence bitmask used by the "Protocols" feature.
inline constexpr uint32_t kProtoIp = 1u << 0;
inline constexpr uint32_t kProtoTcp = 1u << 1;
inline constexpr uint32_t kProtoUdp = 1u << 2;
inline constexpr uint32_t kProtoIcmp = 1u << 3;
inline constexpr uint32_t kProtoHttp = 1u << 4;
inline constexpr uint32_t kProtoDns = 1u << 5;
inline constexpr uint32_t kProtoTls = 1u << 6;

// "Highest Layer" registry: a fixed integer code per deepest recognized
// protocol. Any injective, stable encoding works for the pipeline; this one is
// the documented constant.
inline constexpr uint16_t kLayerOther = 0;
inline constexpr uint16_t kLayerIcmp = 1;
inline constexpr uint16_t kLayerTcp = 6;
inline constexpr uint16_t kLayerUdp = 17;
inline constexpr uint16_t kLayerDns = 53;
inline constexpr uint16_t kLayerHttp = 80;
inline constexpr uint16_t kLayerTls = 443;

// Decoded header fields of one IPv4 packet — exactly what the 11-column
// feature row needs, plus the flow tuple.
struct PacketRecord {
  uint64_t ts_us = 0;
  uint32_t src_ip = 0;
  uint32_t dst_ip = 0;
  uint8_t ip_flags = 0;       // 3-bit value (reserved/DF/MF)
  uint16_t ip_total_len = 0;  // entire IP packet
  uint8_t protocol = 0;       // IP protocol number
  uint16_t src_port = 0;      // 0 unless TCP/UDP
  uint16_t dst_port = 0;
  uint16_t tcp_flags = 0;     // 9-bit flag field
  bool tcp_has_ack = false;
  uint32_t tcp_seq = 0;
  uint32_t tcp_ack = 0;
  uint16_t tcp_win = 0;
  uint16_t tcp_payload_len = 0;  // TCP segment payload bytes
  uint16_t udp_len = 0;          // UDP header + payload
  uint8_t icmp_type = 0;
  uint16_t highest_layer = kLayerOther;
  uint32_t protocols_mask = 0;
};

struct DecodeStats {
  uint64_t non_ip = 0;   // ARP and friends
  uint64_t ipv6 = 0;     // counted separately, also skipped
  uint64_t malformed = 0;
};

// Decodes one Ethernet frame; nullopt for anything that is not a sane IPv4
// packet (the caller counts skips).
std::optional<PacketRecord> decode_frame(const RawFrame& frame, DecodeStats& stats);

// Decodes a whole capture in order. Throws UnsupportedError for non-Ethernet
// link types.
std::vector<PacketRecord> decode_capture(const CaptureFile& capture, DecodeStats* stats);

// read_pcap + decode_capture.
std::vector<PacketRecord> parse_capture(const std::filesystem::path& path,
                                        DecodeStats* stats = nullptr);

std::string ip_to_string(uint32_t ip);
uint32_t ip_from_string(const std::string& s);

}  // namespace rampart
