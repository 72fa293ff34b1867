#include "rampart/craft.hpp"

#include <cstring>

#include "rampart/error.hpp"

namespace rampart::craft {

namespace {

void wr16(uint8_t* p, uint16_t v) {
  p[0] = static_cast<uint8_t>(v >> 8);
  p[1] = static_cast<uint8_t>(v & 0xFF);
}

void wr32(uint8_t* p, uint32_t v) {
  p[0] = static_cast<uint8_t>(v >> 24);
  p[1] = static_cast<uint8_t>((v >> 16) & 0xFF);
  p[2] = static_cast<uint8_t>((v >> 8) & 0xFF);
  p[3] = static_cast<uint8_t>(v & 0xFF);
}

uint16_t rd16(const uint8_t* p) { return static_cast<uint16_t>((p[0] << 8) | p[1]); }
uint32_t rd32(const uint8_t* p) {
  return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
         (static_cast<uint32_t>(p[2]) << 8) | static_cast<uint32_t>(p[3]);
}

uint32_t sum16(std::span<const uint8_t> data, uint32_t acc) {
  size_t i = 0;
  for (; i + 1 < data.size(); i += 2) {
    acc += static_cast<uint32_t>((data[i] << 8) | data[i + 1]);
  }
  if (i < data.size()) acc += static_cast<uint32_t>(data[i] << 8);
  return acc;
}

uint16_t fold(uint32_t acc) {
  while (acc >> 16) acc = (acc & 0xFFFF) + (acc >> 16);
  return static_cast<uint16_t>(~acc & 0xFFFF);
}

uint32_t pseudo_header_sum(const uint8_t* ip, uint16_t seg_len, uint8_t proto) {
  uint32_t acc = 0;
  acc += rd16(ip + 12);
  acc += rd16(ip + 14);
  acc += rd16(ip + 16);
  acc += rd16(ip + 18);
  acc += proto;
  acc += seg_len;
  return acc;
}

void write_ethernet(std::vector<uint8_t>& b, uint32_t src_ip, uint32_t dst_ip) {
  // Locally administered MACs derived from the IPs.
  b[0] = 0x02;
  b[1] = 0x00;
  wr32(b.data() + 2, dst_ip);
  b[6] = 0x02;
  b[7] = 0x00;
  wr32(b.data() + 8, src_ip);
  b[12] = 0x08;
  b[13] = 0x00;
}

void write_ipv4(uint8_t* ip, uint16_t total_len, uint16_t id, bool df, uint8_t ttl,
                uint8_t proto, uint32_t src, uint32_t dst) {
  ip[0] = 0x45;
  ip[1] = 0;
  wr16(ip + 2, total_len);
  wr16(ip + 4, id);
  wr16(ip + 6, df ? 0x4000 : 0x0000);
  ip[8] = ttl;
  ip[9] = proto;
  wr16(ip + 10, 0);
  wr32(ip + 12, src);
  wr32(ip + 16, dst);
  wr16(ip + 10, fold(sum16({ip, 20}, 0)));
}

void tcp_checksum_fix(uint8_t* ip) {
  const size_t ihl = static_cast<size_t>(ip[0] & 0x0F) * 4;
  const uint16_t total = rd16(ip + 2);
  const uint16_t seg_len = static_cast<uint16_t>(total - ihl);
  uint8_t* tcp = ip + ihl;
  wr16(tcp + 16, 0);
  uint32_t acc = pseudo_header_sum(ip, seg_len, 6);
  wr16(tcp + 16, fold(sum16({tcp, seg_len}, acc)));
}

}  // namespace

uint16_t inet_checksum(std::span<const uint8_t> data) { return fold(sum16(data, 0)); }

RawFrame tcp_frame(uint64_t ts_us, uint32_t src_ip, uint16_t src_port, uint32_t dst_ip,
                   uint16_t dst_port, const TcpSpec& spec) {
  const size_t tcp_len = 20 + spec.payload.size();
  const uint16_t total = static_cast<uint16_t>(20 + tcp_len);
  RawFrame f;
  f.ts_us = ts_us;
  f.bytes.assign(14 + total, 0);
  write_ethernet(f.bytes, src_ip, dst_ip);
  uint8_t* ip = f.bytes.data() + 14;
  write_ipv4(ip, total, spec.ip_id, spec.df, spec.ttl, 6, src_ip, dst_ip);
  uint8_t* tcp = ip + 20;
  wr16(tcp, src_port);
  wr16(tcp + 2, dst_port);
  wr32(tcp + 4, spec.seq);
  wr32(tcp + 8, spec.ack);
  tcp[12] = static_cast<uint8_t>(0x50 | ((spec.flags >> 8) & 0x01));
  tcp[13] = static_cast<uint8_t>(spec.flags & 0xFF);
  wr16(tcp + 14, spec.window);
  // checksum at +16, urgent pointer at +18 stay zero for now
  if (!spec.payload.empty()) {
    std::memcpy(tcp + 20, spec.payload.data(), spec.payload.size());
  }
  tcp_checksum_fix(ip);
  return f;
}

RawFrame udp_frame(uint64_t ts_us, uint32_t src_ip, uint16_t src_port, uint32_t dst_ip,
                   uint16_t dst_port, std::span<const uint8_t> payload, bool df,
                   uint16_t ip_id) {
  const uint16_t udp_len = static_cast<uint16_t>(8 + payload.size());
  const uint16_t total = static_cast<uint16_t>(20 + udp_len);
  RawFrame f;
  f.ts_us = ts_us;
  f.bytes.assign(14 + total, 0);
  write_ethernet(f.bytes, src_ip, dst_ip);
  uint8_t* ip = f.bytes.data() + 14;
  write_ipv4(ip, total, ip_id, df, 64, 17, src_ip, dst_ip);
  uint8_t* udp = ip + 20;
  wr16(udp, src_port);
  wr16(udp + 2, dst_port);
  wr16(udp + 4, udp_len);
  if (!payload.empty()) std::memcpy(udp + 8, payload.data(), payload.size());
  uint32_t acc = pseudo_header_sum(ip, udp_len, 17);
  uint16_t ck = fold(sum16({udp, udp_len}, acc));
  if (ck == 0) ck = 0xFFFF;
  wr16(udp + 6, ck);
  return f;
}

RawFrame icmp_echo_frame(uint64_t ts_us, uint32_t src_ip, uint32_t dst_ip, uint8_t type,
                         uint16_t ident, uint16_t seqno, size_t payload_len,
                         uint16_t ip_id) {
  const uint16_t icmp_len = static_cast<uint16_t>(8 + payload_len);
  const uint16_t total = static_cast<uint16_t>(20 + icmp_len);
  RawFrame f;
  f.ts_us = ts_us;
  f.bytes.assign(14 + total, 0);
  write_ethernet(f.bytes, src_ip, dst_ip);
  uint8_t* ip = f.bytes.data() + 14;
  write_ipv4(ip, total, ip_id, true, 64, 1, src_ip, dst_ip);
  uint8_t* icmp = ip + 20;
  icmp[0] = type;
  icmp[1] = 0;
  wr16(icmp + 4, ident);
  wr16(icmp + 6, seqno);
  for (size_t i = 0; i < payload_len; ++i) {
    icmp[8 + i] = static_cast<uint8_t>('a' + (i % 26));
  }
  wr16(icmp + 2, fold(sum16({icmp, icmp_len}, 0)));
  return f;
}

RawFrame arp_frame(uint64_t ts_us) {
  RawFrame f;
  f.ts_us = ts_us;
  f.bytes.assign(42, 0);
  for (int i = 0; i < 6; ++i) f.bytes[static_cast<size_t>(i)] = 0xFF;  // broadcast
  f.bytes[6] = 0x02;
  f.bytes[12] = 0x08;
  f.bytes[13] = 0x06;  // ARP
  uint8_t* arp = f.bytes.data() + 14;
  wr16(arp, 1);        // Ethernet
  wr16(arp + 2, 0x0800);
  arp[4] = 6;
  arp[5] = 4;
  wr16(arp + 6, 1);    // request
  return f;
}

std::optional<FrameView> FrameView::parse(std::vector<uint8_t>& bytes) {
  if (bytes.size() < 34) return std::nullopt;
  if (bytes[12] != 0x08 || bytes[13] != 0x00) return std::nullopt;
  FrameView v;
  v.bytes_ = &bytes;
  v.ip_off_ = 14;
  const uint8_t* ip = bytes.data() + 14;
  if ((ip[0] >> 4) != 4) return std::nullopt;
  const size_t ihl = static_cast<size_t>(ip[0] & 0x0F) * 4;
  if (ihl < 20 || bytes.size() < 14 + ihl) return std::nullopt;
  v.tp_off_ = 14 + ihl;
  v.proto_ = ip[9];
  return v;
}

uint32_t FrameView::src_ip() const { return rd32(bytes_->data() + ip_off_ + 12); }
uint32_t FrameView::dst_ip() const { return rd32(bytes_->data() + ip_off_ + 16); }

bool FrameView::df() const {
  return (rd16(bytes_->data() + ip_off_ + 6) & 0x4000) != 0;
}

uint16_t FrameView::tcp_flags() const {
  const uint8_t* tcp = bytes_->data() + tp_off_;
  return static_cast<uint16_t>(((tcp[12] & 0x01) << 8) | tcp[13]);
}

uint32_t FrameView::tcp_seq() const { return rd32(bytes_->data() + tp_off_ + 4); }

size_t FrameView::tcp_payload_len() const {
  const uint8_t* ip = bytes_->data() + ip_off_;
  const size_t ihl = static_cast<size_t>(ip[0] & 0x0F) * 4;
  const uint16_t total = rd16(ip + 2);
  const uint8_t* tcp = bytes_->data() + tp_off_;
  const size_t doff = static_cast<size_t>(tcp[12] >> 4) * 4;
  return total - ihl - doff;
}

void FrameView::set_df(bool df) {
  uint8_t* ip = bytes_->data() + ip_off_;
  uint16_t frag = rd16(ip + 6);
  frag = static_cast<uint16_t>(df ? (frag | 0x4000) : (frag & ~0x4000));
  wr16(ip + 6, frag);
}

void FrameView::set_tcp_seq(uint32_t seq) { wr32(bytes_->data() + tp_off_ + 4, seq); }

void FrameView::set_tcp_payload(std::span<const uint8_t> payload) {
  if (!is_tcp()) throw Error("set_tcp_payload: not a TCP frame");
  uint8_t* ip = bytes_->data() + ip_off_;
  const size_t ihl = static_cast<size_t>(ip[0] & 0x0F) * 4;
  const uint8_t* tcp = bytes_->data() + tp_off_;
  const size_t doff = static_cast<size_t>(tcp[12] >> 4) * 4;
  const size_t header_bytes = ip_off_ + ihl + doff;
  bytes_->resize(header_bytes);
  bytes_->insert(bytes_->end(), payload.begin(), payload.end());
  ip = bytes_->data() + ip_off_;  // resize may reallocate
  wr16(ip + 2, static_cast<uint16_t>(ihl + doff + payload.size()));
}

void FrameView::refresh_checksums() {
  uint8_t* ip = bytes_->data() + ip_off_;
  const size_t ihl = static_cast<size_t>(ip[0] & 0x0F) * 4;
  wr16(ip + 10, 0);
  wr16(ip + 10, fold(sum16({ip, ihl}, 0)));
  const uint16_t total = rd16(ip + 2);
  const uint16_t seg_len = static_cast<uint16_t>(total - ihl);
  uint8_t* tp = bytes_->data() + tp_off_;
  if (proto_ == 6) {
    wr16(tp + 16, 0);
    uint32_t acc = pseudo_header_sum(ip, seg_len, 6);
    wr16(tp + 16, fold(sum16({tp, seg_len}, acc)));
  } else if (proto_ == 17) {
    wr16(tp + 6, 0);
    uint32_t acc = pseudo_header_sum(ip, seg_len, 17);
    uint16_t ck = fold(sum16({tp, seg_len}, acc));
    if (ck == 0) ck = 0xFFFF;
    wr16(tp + 6, ck);
  } else if (proto_ == 1) {
    wr16(tp + 2, 0);
    wr16(tp + 2, fold(sum16({tp, seg_len}, 0)));
  }
}

bool verify_frame_checksums(std::span<const uint8_t> frame) {
  if (frame.size() < 34) return false;
  if (frame[12] != 0x08 || frame[13] != 0x00) return true;  // nothing to verify
  const uint8_t* ip = frame.data() + 14;
  if ((ip[0] >> 4) != 4) return false;
  const size_t ihl = static_cast<size_t>(ip[0] & 0x0F) * 4;
  const uint16_t total = rd16(ip + 2);
  if (frame.size() < 14 + static_cast<size_t>(total) || total < ihl) return false;
  // A valid IP header sums to 0xFFFF before complementing, i.e. fold() == 0.
  if (fold(sum16({ip, ihl}, 0)) != 0) return false;
  const uint8_t proto = ip[9];
  const uint8_t* tp = ip + ihl;
  const uint16_t seg_len = static_cast<uint16_t>(total - ihl);
  if (proto == 6) {
    if (seg_len < 20) return false;
    return fold(sum16({tp, seg_len}, pseudo_header_sum(ip, seg_len, 6))) == 0;
  }
  if (proto == 17) {
    if (seg_len < 8) return false;
    if (rd16(tp + 6) == 0) return false;  // we always emit UDP checksums
    return fold(sum16({tp, seg_len}, pseudo_header_sum(ip, seg_len, 17))) == 0;
  }
  if (proto == 1) {
    if (seg_len < 4) return false;
    return fold(sum16({tp, seg_len}, 0)) == 0;
  }
  return true;
}

}  // namespace rampart::craft
