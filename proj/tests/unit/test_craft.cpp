#include <doctest.h>

#include "rampart/craft.hpp"
#include "rampart/packet.hpp"
#include "rampart/rng.hpp"

using namespace rampart;
using craft::FrameView;

TEST_CASE("built frames verify: tcp, udp, icmp") {
  std::vector<uint8_t> payload{1, 2, 3, 4, 5};
  auto tcp = craft::tcp_frame(1, 0xC0A80001, 1000, 0xC0A80002, 80,
                              {.flags = static_cast<uint16_t>(kTcpSyn | kTcpAck),
                               .seq = 7, .ack = 9, .payload = payload});
  CHECK(craft::verify_frame_checksums(tcp.bytes));
  auto udp = craft::udp_frame(2, 0xC0A80001, 5353, 0xC0A80002, 53, payload);
  CHECK(craft::verify_frame_checksums(udp.bytes));
  auto icmp = craft::icmp_echo_frame(3, 0xC0A80001, 0xC0A80002, 8, 77, 1, 56);
  CHECK(craft::verify_frame_checksums(icmp.bytes));
}

TEST_CASE("verifier rejects corrupted bytes") {
  auto tcp = craft::tcp_frame(1, 0x0A000001, 1000, 0x0A000002, 80, {.flags = kTcpSyn});
  CHECK(craft::verify_frame_checksums(tcp.bytes));
  auto corrupt_ip = tcp;
  corrupt_ip.bytes[14 + 8] ^= 0x01;  // ttl
  CHECK_FALSE(craft::verify_frame_checksums(corrupt_ip.bytes));
  auto corrupt_tcp = tcp;
  corrupt_tcp.bytes[14 + 20 + 14] ^= 0x01;  // window
  CHECK_FALSE(craft::verify_frame_checksums(corrupt_tcp.bytes));
}

TEST_CASE("frame view mutations keep checksums valid") {
  auto f = craft::tcp_frame(1, 0x0A000001, 1000, 0x0A000002, 80,
                            {.flags = kTcpSyn, .seq = 5, .df = false});
  auto v = FrameView::parse(f.bytes);
  REQUIRE(v.has_value());
  CHECK_FALSE(v->df());
  v->set_df(true);
  v->refresh_checksums();
  CHECK(craft::verify_frame_checksums(f.bytes));
  CHECK(FrameView::parse(f.bytes)->df());

  std::vector<uint8_t> payload(37, 0xAB);
  v = FrameView::parse(f.bytes);
  v->set_tcp_payload(payload);
  v = FrameView::parse(f.bytes);
  v->refresh_checksums();
  CHECK(craft::verify_frame_checksums(f.bytes));
  CHECK(FrameView::parse(f.bytes)->tcp_payload_len() == 37);
  // flags untouched by the payload rewrite
  CHECK((FrameView::parse(f.bytes)->tcp_flags() & kTcpSyn) != 0);

  DecodeStats st;
  RawFrame rf{1, f.bytes};
  auto rec = decode_frame(rf, st);
  REQUIRE(rec.has_value());
  CHECK(rec->tcp_payload_len == 37);
  CHECK(rec->ip_total_len == 40 + 37);
}

TEST_CASE("inet checksum matches a known vector") {
  // From the classic IP header example: checksum of this header is 0xb861.
  std::vector<uint8_t> hdr = {0x45, 0x00, 0x00, 0x73, 0x00, 0x00, 0x40, 0x00, 0x40, 0x11,
                              0x00, 0x00, 0xc0, 0xa8, 0x00, 0x01, 0xc0, 0xa8, 0x00, 0xc7};
  CHECK(craft::inet_checksum(hdr) == 0xb861);
}
