#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "rampart/craft.hpp"
#include "rampart/error.hpp"
#include "rampart/packet.hpp"
#include "rampart/pcap.hpp"

using namespace rampart;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) { return fs::temp_directory_path() / name; }

void append_u32(std::string& s, uint32_t v, bool swap) {
  uint8_t b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<uint8_t>((v >> (8 * i)) & 0xFF);
  if (swap) std::swap(b[0], b[3]), std::swap(b[1], b[2]);
  s.append(reinterpret_cast<char*>(b), 4);
}

std::string global_header(bool swap, uint32_t linktype = 1) {
  std::string s;
  append_u32(s, 0xa1b2c3d4, swap);
  // version 2.4 as two u16: encode as one u32 with halves
  if (!swap) {
    s += std::string("\x02\x00\x04\x00", 4);
  } else {
    s += std::string("\x00\x02\x00\x04", 4);
  }
  append_u32(s, 0, swap);
  append_u32(s, 0, swap);
  append_u32(s, 65535, swap);
  append_u32(s, linktype, swap);
  return s;
}

}  // namespace

TEST_CASE("round-trip write/read") {
  CaptureFile cap;
  cap.frames.push_back(craft::tcp_frame(1000001, 0x0a000001, 1234, 0x0a000002, 80,
                                        {.flags = kTcpSyn, .seq = 42}));
  cap.frames.push_back(craft::arp_frame(2000002));
  auto path = temp_file("rampart_rt.pcap");
  write_pcap(path, cap);
  CaptureFile back = read_pcap(path);
  CHECK(back.link_type == 1);
  REQUIRE(back.frames.size() == 2);
  CHECK(back.frames[0].ts_us == 1000001);
  CHECK(back.frames[1].ts_us == 2000002);
  CHECK(back.frames[0].bytes == cap.frames[0].bytes);
  CHECK(back.frames[1].bytes == cap.frames[1].bytes);
  fs::remove(path);
}

TEST_CASE("hand-assembled capture with three TCP packets decodes to hand-computed fields") {
  // 10.0.0.1:1234 -> 10.0.0.2:80, bare SYN; then SYN-ACK back; then ACK with
  // 5 payload bytes. Every field below is written out by hand.
  auto mk = [](uint32_t src, uint16_t sport, uint32_t dst, uint16_t dport, uint16_t flags,
               uint32_t seq, uint32_t ack, uint16_t win, bool df,
               const std::string& payload) {
    std::string eth(14, '\0');
    eth[12] = 0x08;  // IPv4
    std::string ip(20, '\0');
    ip[0] = 0x45;
    const uint16_t total = static_cast<uint16_t>(20 + 20 + payload.size());
    ip[2] = static_cast<char>(total >> 8);
    ip[3] = static_cast<char>(total & 0xFF);
    ip[6] = static_cast<char>(df ? 0x40 : 0x00);
    ip[8] = 64;
    ip[9] = 6;
    for (int i = 0; i < 4; ++i) ip[12 + i] = static_cast<char>((src >> (24 - 8 * i)) & 0xFF);
    for (int i = 0; i < 4; ++i) ip[16 + i] = static_cast<char>((dst >> (24 - 8 * i)) & 0xFF);
    std::string tcp(20, '\0');
    tcp[0] = static_cast<char>(sport >> 8);
    tcp[1] = static_cast<char>(sport & 0xFF);
    tcp[2] = static_cast<char>(dport >> 8);
    tcp[3] = static_cast<char>(dport & 0xFF);
    for (int i = 0; i < 4; ++i) tcp[4 + i] = static_cast<char>((seq >> (24 - 8 * i)) & 0xFF);
    for (int i = 0; i < 4; ++i) tcp[8 + i] = static_cast<char>((ack >> (24 - 8 * i)) & 0xFF);
    tcp[12] = 0x50;
    tcp[13] = static_cast<char>(flags & 0xFF);
    tcp[14] = static_cast<char>(win >> 8);
    tcp[15] = static_cast<char>(win & 0xFF);
    return eth + ip + tcp + payload;
  };

  std::string body;
  auto add_record = [&](uint32_t sec, uint32_t usec, const std::string& frame) {
    append_u32(body, sec, false);
    append_u32(body, usec, false);
    append_u32(body, static_cast<uint32_t>(frame.size()), false);
    append_u32(body, static_cast<uint32_t>(frame.size()), false);
    body += frame;
  };
  add_record(10, 0, mk(0x0a000001, 1234, 0x0a000002, 80, 0x02, 100, 0, 512, false, ""));
  add_record(10, 500, mk(0x0a000002, 80, 0x0a000001, 1234, 0x12, 900, 101, 29200, true, ""));
  add_record(10, 900, mk(0x0a000001, 1234, 0x0a000002, 80, 0x18, 101, 901, 512, true, "hello"));

  auto path = temp_file("rampart_hand.pcap");
  std::ofstream f(path, std::ios::binary);
  f << global_header(false) << body;
  f.close();

  DecodeStats stats;
  auto records = parse_capture(path, &stats);
  REQUIRE(records.size() == 3);
  CHECK(stats.non_ip == 0);

  CHECK(records[0].ts_us == 10000000);
  CHECK(records[0].src_ip == 0x0a000001);
  CHECK(records[0].dst_ip == 0x0a000002);
  CHECK(records[0].src_port == 1234);
  CHECK(records[0].dst_port == 80);
  CHECK(records[0].tcp_flags == 0x02);  // SYN only
  CHECK(records[0].ip_flags == 0);      // DF clear
  CHECK(records[0].ip_total_len == 40);
  CHECK(records[0].tcp_payload_len == 0);
  CHECK(records[0].tcp_win == 512);
  CHECK_FALSE(records[0].tcp_has_ack);

  CHECK(records[1].tcp_flags == 0x12);  // SYN|ACK
  CHECK(records[1].ip_flags == 2);      // DF set
  CHECK(records[1].tcp_ack == 101);
  CHECK(records[1].tcp_has_ack);

  CHECK(records[2].ts_us == 10000900);
  CHECK(records[2].tcp_payload_len == 5);
  CHECK(records[2].ip_total_len == 45);
  CHECK(records[2].highest_layer == kLayerTcp);  // "hello" is not HTTP
  fs::remove(path);
}

TEST_CASE("byte-swapped capture reads identically") {
  std::string frame(60, '\x55');
  std::string le, be;
  le = global_header(false);
  append_u32(le, 7, false);
  append_u32(le, 13, false);
  append_u32(le, static_cast<uint32_t>(frame.size()), false);
  append_u32(le, static_cast<uint32_t>(frame.size()), false);
  le += frame;
  be = global_header(true);
  append_u32(be, 7, true);
  append_u32(be, 13, true);
  append_u32(be, static_cast<uint32_t>(frame.size()), true);
  append_u32(be, static_cast<uint32_t>(frame.size()), true);
  be += frame;

  auto p1 = temp_file("rampart_le.pcap");
  auto p2 = temp_file("rampart_be.pcap");
  std::ofstream(p1, std::ios::binary) << le;
  std::ofstream(p2, std::ios::binary) << be;
  CaptureFile a = read_pcap(p1);
  CaptureFile b = read_pcap(p2);
  REQUIRE(a.frames.size() == 1);
  REQUIRE(b.frames.size() == 1);
  CHECK(a.frames[0].ts_us == b.frames[0].ts_us);
  CHECK(a.frames[0].bytes == b.frames[0].bytes);
  fs::remove(p1);
  fs::remove(p2);
}

TEST_CASE("ARP frame is skipped and counted") {
  CaptureFile cap;
  cap.frames.push_back(craft::arp_frame(5));
  DecodeStats stats;
  auto records = decode_capture(cap, &stats);
  CHECK(records.empty());
  CHECK(stats.non_ip == 1);
}

TEST_CASE("empty capture yields empty stream") {
  auto path = temp_file("rampart_empty.pcap");
  std::ofstream(path, std::ios::binary) << global_header(false);
  DecodeStats stats;
  CHECK(parse_capture(path, &stats).empty());
  fs::remove(path);
}

TEST_CASE("bad magic reported at offset zero") {
  auto path = temp_file("rampart_badmagic.pcap");
  std::ofstream(path, std::ios::binary) << std::string(24, '\x01');
  try {
    read_pcap(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 0);
  }
  fs::remove(path);
}

TEST_CASE("truncated record reports its byte offset") {
  auto path = temp_file("rampart_trunc.pcap");
  std::string s = global_header(false);
  append_u32(s, 1, false);
  append_u32(s, 2, false);
  append_u32(s, 100, false);  // claims 100 bytes
  append_u32(s, 100, false);
  s += std::string(10, '\x00');  // provides 10
  std::ofstream(path, std::ios::binary) << s;
  try {
    read_pcap(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 40);  // 24-byte header + 16-byte record header
  }
  fs::remove(path);
}

TEST_CASE("unknown link type is unsupported") {
  auto path = temp_file("rampart_linktype.pcap");
  std::ofstream(path, std::ios::binary) << global_header(false, 101);  // raw IP
  CHECK_THROWS_AS(parse_capture(path, nullptr), UnsupportedError);
  fs::remove(path);
}
