#include <doctest.h>

#include <algorithm>

#include "rampart/craft.hpp"
#include "rampart/error.hpp"
#include "rampart/flow.hpp"
#include "rampart/rng.hpp"
#include "rampart/synth.hpp"
#include "support/naive_extractor.hpp"

using namespace rampart;

namespace {

PacketRecord decode_one(const RawFrame& f) {
  DecodeStats st;
  auto r = decode_frame(f, st);
  REQUIRE(r.has_value());
  return *r;
}

PacketRecord tcp_pkt(uint64_t ts_us, uint32_t src, uint16_t sport, uint32_t dst,
                     uint16_t dport, uint16_t flags, uint32_t seq = 0, uint32_t ack = 0) {
  return decode_one(craft::tcp_frame(ts_us, src, sport, dst, dport,
                                     {.flags = flags, .seq = seq, .ack = ack}));
}

constexpr uint32_t kA = 0x0A000001;  // 10.0.0.1
constexpr uint32_t kB = 0x0A000002;  // 10.0.0.2

}  // namespace

TEST_CASE("bidirectional grouping: SYN + SYN-ACK form one sample") {
  std::vector<PacketRecord> pkts{
      tcp_pkt(1000, kA, 1234, kB, 80, kTcpSyn, 100),
      tcp_pkt(2000, kB, 80, kA, 1234, static_cast<uint16_t>(kTcpSyn | kTcpAck), 500, 101),
  };
  auto samples = extract_samples(pkts);
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].flow_length == 2);
  CHECK(samples[0].key == FlowKey::from_packet(pkts[0]));
  CHECK(samples[0].key == FlowKey::from_packet(pkts[1]));
}

TEST_CASE("13 packets in one window truncate to 10") {
  std::vector<PacketRecord> pkts;
  for (int i = 0; i < 13; ++i) {
    pkts.push_back(tcp_pkt(1000 + static_cast<uint64_t>(i) * 1000, kA, 1234, kB, 80,
                           kTcpAck, 100 + static_cast<uint32_t>(i)));
  }
  auto samples = extract_samples(pkts);
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].flow_length == 10);
  // row 9 present, rows beyond gone: matrix has exactly 10 rows by shape
  CHECK(samples[0].at(9, kFeatPacketLen) == 40.0);
}

TEST_CASE("window arithmetic: packets at 1s and 11s split into two samples") {
  std::vector<PacketRecord> pkts{
      tcp_pkt(1000000, kA, 1234, kB, 80, kTcpSyn),
      tcp_pkt(11000000, kA, 1234, kB, 80, kTcpSyn),
  };
  auto samples = extract_samples(pkts, {.window_seconds = 10.0, .max_packets = 10});
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].flow_length == 1);
  CHECK(samples[1].flow_length == 1);
  CHECK(samples[0].window == 0);
  CHECK(samples[1].window == 1);
}

TEST_CASE("featurize: first packet of the window has Time zero") {
  auto p = tcp_pkt(5000000, kA, 1234, kB, 80, kTcpSyn);
  auto row = featurize(p, p.ts_us, 0);
  CHECK(row[kFeatTime] == 0.0);
}

TEST_CASE("featurize: pure SYN row") {
  auto p = tcp_pkt(1000, kA, 1234, kB, 80, kTcpSyn, 42);
  auto row = featurize(p, 1000, 0);
  CHECK(row[kFeatTcpFlags] == 2.0);  // SYN bit only
  CHECK(row[kFeatTcpLen] == 0.0);    // no payload
  CHECK(row[kFeatUdpLen] == 0.0);
  CHECK(row[kFeatIcmpType] == 0.0);
  CHECK(row[kFeatTcpAck] == 0.0);    // no ACK flag
}

TEST_CASE("featurize: UDP DNS packet with 64-byte payload has UDP Len 72") {
  std::vector<uint8_t> payload(64, 0x11);
  auto f = craft::udp_frame(1000, kA, 5555, kB, 53, payload);
  auto p = decode_one(f);
  auto row = featurize(p, 1000, 0);
  CHECK(row[kFeatUdpLen] == 72.0);  // 8-byte header + payload
  CHECK(row[kFeatTcpLen] == 0.0);
  CHECK(row[kFeatTcpFlags] == 0.0);
  CHECK(row[kFeatTcpWin] == 0.0);
  CHECK(row[kFeatHighestLayer] == kLayerDns);
}

TEST_CASE("normalization: min-max, degenerate column, clamping") {
  std::vector<PacketRecord> pkts{
      tcp_pkt(0, kA, 1, kB, 2, kTcpSyn),
      tcp_pkt(1000, kA, 1, kB, 2, kTcpSyn),
  };
  auto samples = extract_samples(pkts);
  REQUIRE(samples.size() == 1);

  // Hand-build raw samples to exercise the rules directly.
  Sample s;
  s.flow_length = 2;
  s.at(0, 0) = 0.0;
  s.at(0, 1) = 100.0;
  s.at(1, 0) = 0.0;   // constant column
  s.at(1, 1) = 25.0;
  std::vector<Sample> v{s};
  auto prof = fit_normalization(v);
  CHECK(prof.min[1] == 25.0);
  CHECK(prof.max[1] == 100.0);
  apply_normalization(v, prof, false);
  CHECK(v[0].at(0, 0) == 0.0);  // max == min maps to 0
  CHECK(v[0].at(1, 0) == 0.0);
  CHECK(v[0].at(0, 1) == 1.0);
  CHECK(v[0].at(1, 1) == 0.0);

  // value above training max at test time clamps to 1; 25 in [0,100] is 0.25
  Sample t;
  t.flow_length = 1;
  t.at(0, 1) = 250.0;
  t.at(0, 2) = 25.0;
  NormalizationProfile p2{};
  p2.min[1] = 0.0;
  p2.max[1] = 100.0;
  p2.min[2] = 0.0;
  p2.max[2] = 100.0;
  std::vector<Sample> tv{t};
  apply_normalization(tv, p2, true);
  CHECK(tv[0].at(0, 1) == 1.0);
  CHECK(tv[0].at(0, 2) == 0.25);
}

TEST_CASE("labeling by endpoints") {
  std::vector<PacketRecord> pkts{
      tcp_pkt(1000, ip_from_string("10.0.0.5"), 999, ip_from_string("192.168.1.1"), 80,
              kTcpSyn),
      // reverse-direction packet of the same attack flow
      tcp_pkt(2000, ip_from_string("192.168.1.1"), 80, ip_from_string("10.0.0.5"), 999,
              static_cast<uint16_t>(kTcpSyn | kTcpAck)),
      tcp_pkt(3000, ip_from_string("172.16.0.1"), 5000, ip_from_string("172.16.0.2"), 80,
              kTcpSyn),
  };
  auto samples = extract_samples(pkts);
  REQUIRE(samples.size() == 2);
  auto attackers = IpSet::parse({"10.0.0.5"});
  auto victims = IpSet::parse({"192.168.1.1"});
  label_by_endpoints(samples, attackers, victims);
  int labeled_1 = 0, labeled_0 = 0;
  for (const auto& s : samples) {
    if (s.label == 1) ++labeled_1;
    if (s.label == 0) ++labeled_0;
  }
  CHECK(labeled_1 == 1);  // both directions fold into the one attack sample
  CHECK(labeled_0 == 1);

  CHECK_THROWS_AS(label_by_endpoints(samples, IpSet{}, victims), ConfigError);
  CHECK_THROWS_AS(label_by_endpoints(samples, attackers, attackers), ConfigError);
}

TEST_CASE("zero-padding invariant on synthesized traffic") {
  TrafficScenario sc;
  sc.duration_s = 5.0;
  sc.seed = 31;
  auto cap = synth_benign(sc);
  auto pkts = decode_capture(cap, nullptr);
  auto samples = extract_samples(pkts);
  REQUIRE(samples.size() > 5);
  for (const auto& s : samples) {
    CHECK(s.flow_length >= 1);
    for (int r = s.flow_length; r < kSampleRows; ++r) {
      for (int c = 0; c < kSampleCols; ++c) {
        CHECK(s.at(r, c) == 0.0);
      }
    }
  }
}

TEST_CASE("extraction is order-insensitive for unique timestamps") {
  TrafficScenario sc;
  sc.duration_s = 4.0;
  sc.seed = 32;
  auto pkts = decode_capture(synth_benign(sc), nullptr);
  // Deduplicate timestamps so order is fully determined by time.
  std::sort(pkts.begin(), pkts.end(),
            [](const PacketRecord& a, const PacketRecord& b) { return a.ts_us < b.ts_us; });
  for (size_t i = 1; i < pkts.size(); ++i) {
    if (pkts[i].ts_us <= pkts[i - 1].ts_us) pkts[i].ts_us = pkts[i - 1].ts_us + 1;
  }
  auto base = extract_samples(pkts);
  auto shuffled = pkts;
  Rng rng(7);
  rng.shuffle(shuffled);
  auto again = extract_samples(shuffled);
  REQUIRE(base.size() == again.size());
  for (size_t i = 0; i < base.size(); ++i) {
    CHECK(base[i].matrix == again[i].matrix);
    CHECK(base[i].flow_length == again[i].flow_length);
    CHECK(base[i].key == again[i].key);
    CHECK(base[i].window == again[i].window);
  }
}

TEST_CASE("naive reference extractor agrees on random small captures") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    TrafficScenario sc;
    sc.duration_s = 2.5;
    sc.seed = seed * 101;
    sc.benign.web_flows_per_s = 1.2;
    sc.benign.keepalive_flows_per_s = 0.8;
    sc.benign.dns_flows_per_s = 1.0;
    sc.benign.icmp_flows_per_s = 0.5;
    sc.benign.ssh_flows_per_s = 0.5;
    auto pkts = decode_capture(synth_benign(sc), nullptr);
    if (pkts.size() > 50) pkts.resize(50);
    if (pkts.empty()) continue;

    auto got = extract_samples(pkts);
    auto want = naive::naive_extract(pkts, 10.0, 10);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
      CAPTURE(seed);
      CAPTURE(i);
      CHECK(got[i].window == want[i].window);
      CHECK(got[i].key.ip_a == want[i].ip_a);
      CHECK(got[i].key.port_a == want[i].port_a);
      CHECK(got[i].key.ip_b == want[i].ip_b);
      CHECK(got[i].key.port_b == want[i].port_b);
      CHECK(got[i].flow_length == want[i].flow_length);
      for (size_t j = 0; j < got[i].matrix.size(); ++j) {
        CHECK(got[i].matrix[j] == doctest::Approx(want[i].matrix[j]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("extract option validation") {
  std::vector<PacketRecord> none;
  CHECK(extract_samples(none).empty());
  CHECK_THROWS_AS(extract_samples(none, {.window_seconds = 0.0}), ConfigError);
  CHECK_THROWS_AS(extract_samples(none, {.window_seconds = 10.0, .max_packets = 0}),
                  ConfigError);
}

TEST_CASE("feature name registry") {
  CHECK(feature_from_name("time") == kFeatTime);
  CHECK(feature_from_name("flow_length") == kFeatFlowLength);
  CHECK_THROWS_AS(feature_from_name("bogus"), ConfigError);
}
