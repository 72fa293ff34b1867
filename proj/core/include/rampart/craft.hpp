#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rampart/pcap.hpp"

// Frame assembly and in-place rewriting. Everything here produces packets
// whose IP/TCP/UDP/ICMP checksums are valid; a manipulated packet must never
// be one a stack would discard for a broken header.
namespace rampart::craft {

// RFC 1071 ones-complement sum.
uint16_t inet_checksum(std::span<const uint8_t> data);

struct TcpSpec {
  uint16_t flags = 0;
  uint32_t seq = 0;
  uint32_t ack = 0;
  uint16_t window = 64240;
  bool df = true;
  uint8_t ttl = 64;
  uint16_t ip_id = 0;
  std::vector<uint8_t> payload;
};

RawFrame tcp_frame(uint64_t ts_us, uint32_t src_ip, uint16_t src_port, uint32_t dst_ip,
                   uint16_t dst_port, const TcpSpec& spec);
RawFrame udp_frame(uint64_t ts_us, uint32_t src_ip, uint16_t src_port, uint32_t dst_ip,
                   uint16_t dst_port, std::span<const uint8_t> payload, bool df = true,
                   uint16_t ip_id = 0);
RawFrame icmp_echo_frame(uint64_t ts_us, uint32_t src_ip, uint32_t dst_ip, uint8_t type,
                         uint16_t ident, uint16_t seqno, size_t payload_len,
                         uint16_t ip_id = 0);
// Non-IP fixture frame (a minimal ARP request).
RawFrame arp_frame(uint64_t ts_us);

// Mutable view into an Ethernet/IPv4 frame. Setters rewrite header fields;
// refresh_checksums() must run before the frame is emitted.
class FrameView {
 public:
  static std::optional<FrameView> parse(std::vector<uint8_t>& bytes);

  bool is_tcp() const { return proto_ == 6; }
  bool is_udp() const { return proto_ == 17; }
  uint32_t src_ip() const;
  uint32_t dst_ip() const;
  bool df() const;
  uint16_t tcp_flags() const;
  uint32_t tcp_seq() const;
  size_t tcp_payload_len() const;

  void set_df(bool df);
  void set_tcp_seq(uint32_t seq);
  // Replaces the TCP payload, fixing the IP total length.
  void set_tcp_payload(std::span<const uint8_t> payload);
  void refresh_checksums();

 private:
  std::vector<uint8_t>* bytes_ = nullptr;
  size_t ip_off_ = 0;
  size_t tp_off_ = 0;
  uint8_t proto_ = 0;
};

// Independent validity check: re-sums the raw bytes and requires every
// present checksum (IP, TCP, UDP, ICMP) to verify. Deliberately shares no
// code path with the builders beyond the ones-complement primitive.
bool verify_frame_checksums(std::span<const uint8_t> frame);

}  // namespace rampart::craft
