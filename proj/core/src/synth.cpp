#include "rampart/synth.hpp"

#include <algorithm>
#include <deque>
#include <fstream>

#include <json.hpp>

#include "rampart/craft.hpp"
#include "rampart/error.hpp"
#include "rampart/packet.hpp"

namespace rampart {

using craft::TcpSpec;
using nlohmann::json;

namespace {

// Fixed capture epoch so traces are identical for identical scenarios.
constexpr uint64_t kBaseUs = 1600000000ULL * 1000000ULL;

constexpr uint32_t ip4(uint32_t a, uint32_t b, uint32_t c, uint32_t d) {
  return (a << 24) | (b << 16) | (c << 8) | d;
}

constexpr uint32_t kClientNet = ip4(192, 0, 2, 0);
constexpr uint32_t kAttackNet = ip4(198, 51, 100, 0);
constexpr uint32_t kWebServerBase = ip4(203, 0, 113, 10);  // .10-.15
constexpr uint32_t kSshServer = ip4(203, 0, 113, 22);
constexpr uint32_t kDnsServer = ip4(203, 0, 113, 53);
constexpr uint32_t kPingTarget = ip4(203, 0, 113, 99);

const uint16_t kWinChoices[] = {8192, 16384, 29200, 64240, 65535};

uint16_t pick_win(Rng& rng) {
  return kWinChoices[rng.uniform_int(0, 4)];
}

uint64_t us(double seconds) { return static_cast<uint64_t>(seconds * 1e6 + 0.5); }

struct FlowCtx {
  Rng* rng;
  std::vector<RawFrame>* out;
  uint16_t ip_id = 0;

  void push(RawFrame f) { out->push_back(std::move(f)); }
  uint16_t next_id() { return ++ip_id; }
};

std::vector<uint8_t> http_get_payload(Rng& rng, size_t target_len) {
  std::string s = "GET /page" + std::to_string(rng.uniform_int(0, 9999)) +
                  " HTTP/1.1\r\nHost: web.example.net\r\nAccept: */*\r\n";
  while (s.size() + 2 < target_len) {
    s += "X-Pad: ";
    const size_t fill = std::min(target_len - 2 - s.size(),
                                 static_cast<size_t>(rng.uniform_int(8, 40)));
    for (size_t i = 0; i < fill; ++i) s += static_cast<char>('a' + rng.uniform_int(0, 25));
    s += "\r\n";
  }
  s += "\r\n";
  return {s.begin(), s.end()};
}

std::vector<uint8_t> random_payload(Rng& rng, size_t len) {
  std::vector<uint8_t> p(len);
  for (auto& b : p) b = static_cast<uint8_t>(rng.uniform_int(0, 255));
  return p;
}

std::vector<uint8_t> http_response_payload(Rng& rng, size_t target_len) {
  std::string s = "HTTP/1.1 200 OK\r\nContent-Type: text/html\r\n\r\n";
  std::vector<uint8_t> p(s.begin(), s.end());
  while (p.size() < target_len) {
    p.push_back(static_cast<uint8_t>('a' + rng.uniform_int(0, 25)));
  }
  return p;
}

// Client fetches a page: handshake, GET, paced response segments, optional
// teardown. Human-scale gaps.
void emit_web_flow(FlowCtx& ctx, uint64_t start) {
  Rng& rng = *ctx.rng;
  const uint32_t client = kClientNet + static_cast<uint32_t>(rng.uniform_int(2, 250));
  const uint32_t server = kWebServerBase + static_cast<uint32_t>(rng.uniform_int(0, 5));
  const uint16_t cport = static_cast<uint16_t>(rng.uniform_int(1024, 64000));
  const uint32_t isn_c = static_cast<uint32_t>(rng.next_u64());
  const uint32_t isn_s = static_cast<uint32_t>(rng.next_u64());
  const uint16_t win_c = pick_win(rng);
  const uint16_t win_s = pick_win(rng);
  const uint64_t rtt = us(rng.uniform(0.005, 0.060));

  uint64_t t = start;
  ctx.push(craft::tcp_frame(t, client, cport, server, 80,
                            {.flags = kTcpSyn, .seq = isn_c, .ack = 0, .window = win_c,
                             .df = true, .ip_id = ctx.next_id()}));
  t += rtt / 2;
  ctx.push(craft::tcp_frame(t, server, 80, client, cport,
                            {.flags = static_cast<uint16_t>(kTcpSyn | kTcpAck),
                             .seq = isn_s, .ack = isn_c + 1, .window = win_s,
                             .df = true, .ip_id = ctx.next_id()}));
  t += rtt / 2;
  ctx.push(craft::tcp_frame(t, client, cport, server, 80,
                            {.flags = kTcpAck, .seq = isn_c + 1, .ack = isn_s + 1,
                             .window = win_c, .df = true, .ip_id = ctx.next_id()}));

  t += us(rng.uniform(0.010, 0.300));
  auto get = http_get_payload(rng, static_cast<size_t>(rng.uniform_int(100, 600)));
  const uint32_t get_len = static_cast<uint32_t>(get.size());
  ctx.push(craft::tcp_frame(t, client, cport, server, 80,
                            {.flags = static_cast<uint16_t>(kTcpPsh | kTcpAck),
                             .seq = isn_c + 1, .ack = isn_s + 1, .window = win_c,
                             .df = true, .ip_id = ctx.next_id(), .payload = get}));

  uint32_t served = 0;
  const int n_seg = static_cast<int>(rng.uniform_int(1, 3));
  for (int i = 0; i < n_seg; ++i) {
    t += us(rng.uniform(0.020, 0.250));
    const size_t seg = static_cast<size_t>(rng.uniform_int(200, 1400));
    const bool last = (i == n_seg - 1);
    // first segment carries the status line, continuations are raw body bytes
    auto body = (i == 0) ? http_response_payload(rng, seg) : random_payload(rng, seg);
    ctx.push(craft::tcp_frame(
        t, server, 80, client, cport,
        {.flags = static_cast<uint16_t>(last ? (kTcpPsh | kTcpAck) : kTcpAck),
         .seq = isn_s + 1 + served, .ack = isn_c + 1 + get_len, .window = win_s,
         .df = true, .ip_id = ctx.next_id(), .payload = std::move(body)}));
    served += static_cast<uint32_t>(seg);
    if (rng.uniform() < 0.8) {
      t += us(rng.uniform(0.001, 0.040));
      ctx.push(craft::tcp_frame(t, client, cport, server, 80,
                                {.flags = kTcpAck, .seq = isn_c + 1 + get_len,
                                 .ack = isn_s + 1 + served, .window = win_c,
                                 .df = true, .ip_id = ctx.next_id()}));
    }
  }

  if (rng.uniform() < 0.7) {
    t += us(rng.uniform(0.010, 0.400));
    ctx.push(craft::tcp_frame(t, client, cport, server, 80,
                              {.flags = static_cast<uint16_t>(kTcpFin | kTcpAck),
                               .seq = isn_c + 1 + get_len, .ack = isn_s + 1 + served,
                               .window = win_c, .df = true, .ip_id = ctx.next_id()}));
    t += rtt / 2;
    ctx.push(craft::tcp_frame(t, server, 80, client, cport,
                              {.flags = static_cast<uint16_t>(kTcpFin | kTcpAck),
                               .seq = isn_s + 1 + served, .ack = isn_c + 2 + get_len,
                               .window = win_s, .df = true, .ip_id = ctx.next_id()}));
    t += rtt / 2;
    ctx.push(craft::tcp_frame(t, client, cport, server, 80,
                              {.flags = kTcpAck, .seq = isn_c + 2 + get_len,
                               .ack = isn_s + 2 + served, .window = win_c,
                               .df = true, .ip_id = ctx.next_id()}));
  }
}

// Sparse empty ACKs on an already-established connection.
void emit_keepalive_flow(FlowCtx& ctx, uint64_t start) {
  Rng& rng = *ctx.rng;
  const uint32_t client = kClientNet + static_cast<uint32_t>(rng.uniform_int(2, 250));
  const uint32_t server = kWebServerBase + static_cast<uint32_t>(rng.uniform_int(0, 5));
  const uint16_t cport = static_cast<uint16_t>(rng.uniform_int(1024, 64000));
  const uint16_t sport = 8080;
  const uint32_t seq_c = static_cast<uint32_t>(rng.next_u64());
  const uint32_t seq_s = static_cast<uint32_t>(rng.next_u64());
  const uint16_t win_c = pick_win(rng);
  const uint16_t win_s = pick_win(rng);
  uint64_t t = start;
  const int n = static_cast<int>(rng.uniform_int(3, 7));
  for (int i = 0; i < n; ++i) {
    const bool from_client = (i % 2 == 0);
    ctx.push(craft::tcp_frame(
        t, from_client ? client : server, from_client ? cport : sport,
        from_client ? server : client, from_client ? sport : cport,
        {.flags = kTcpAck, .seq = from_client ? seq_c : seq_s,
         .ack = from_client ? seq_s : seq_c,
         .window = from_client ? win_c : win_s, .df = true, .ip_id = ctx.next_id()}));
    t += us(rng.uniform(0.5, 3.0));
  }
}

void emit_ssh_flow(FlowCtx& ctx, uint64_t start) {
  Rng& rng = *ctx.rng;
  const uint32_t client = kClientNet + static_cast<uint32_t>(rng.uniform_int(2, 250));
  const uint16_t cport = static_cast<uint16_t>(rng.uniform_int(1024, 64000));
  const uint32_t isn_c = static_cast<uint32_t>(rng.next_u64());
  const uint32_t isn_s = static_cast<uint32_t>(rng.next_u64());
  const uint16_t win_c = pick_win(rng);
  const uint16_t win_s = pick_win(rng);
  const uint64_t rtt = us(rng.uniform(0.002, 0.040));

  uint64_t t = start;
  ctx.push(craft::tcp_frame(t, client, cport, kSshServer, 22,
                            {.flags = kTcpSyn, .seq = isn_c, .window = win_c,
                             .df = true, .ip_id = ctx.next_id()}));
  t += rtt / 2;
  ctx.push(craft::tcp_frame(t, kSshServer, 22, client, cport,
                            {.flags = static_cast<uint16_t>(kTcpSyn | kTcpAck),
                             .seq = isn_s, .ack = isn_c + 1, .window = win_s,
                             .df = true, .ip_id = ctx.next_id()}));
  t += rtt / 2;
  ctx.push(craft::tcp_frame(t, client, cport, kSshServer, 22,
                            {.flags = kTcpAck, .seq = isn_c + 1, .ack = isn_s + 1,
                             .window = win_c, .df = true, .ip_id = ctx.next_id()}));
  uint32_t off_c = 1, off_s = 1;
  const int n = static_cast<int>(rng.uniform_int(3, 6));
  for (int i = 0; i < n; ++i) {
    t += us(rng.uniform(0.050, 0.800));
    const bool from_client = (i % 2 == 0);
    const size_t len = static_cast<size_t>(rng.uniform_int(36, 120));
    ctx.push(craft::tcp_frame(
        t, from_client ? client : kSshServer, from_client ? cport : uint16_t{22},
        from_client ? kSshServer : client, from_client ? uint16_t{22} : cport,
        {.flags = static_cast<uint16_t>(kTcpPsh | kTcpAck),
         .seq = (from_client ? isn_c : isn_s) + (from_client ? off_c : off_s),
         .ack = (from_client ? isn_s : isn_c) + (from_client ? off_s : off_c),
         .window = from_client ? win_c : win_s, .df = true, .ip_id = ctx.next_id(),
         .payload = random_payload(rng, len)}));
    (from_client ? off_c : off_s) += static_cast<uint32_t>(len);
  }
}

void emit_dns_flow(FlowCtx& ctx, uint64_t start) {
  Rng& rng = *ctx.rng;
  const uint32_t client = kClientNet + static_cast<uint32_t>(rng.uniform_int(2, 250));
  const uint16_t cport = static_cast<uint16_t>(rng.uniform_int(1024, 64000));
  ctx.push(craft::udp_frame(start, client, cport, kDnsServer, 53,
                            random_payload(rng, static_cast<size_t>(rng.uniform_int(20, 45))),
                            true, ctx.next_id()));
  const uint64_t t = start + us(rng.uniform(0.005, 0.080));
  ctx.push(craft::udp_frame(t, kDnsServer, 53, client, cport,
                            random_payload(rng, static_cast<size_t>(rng.uniform_int(40, 220))),
                            true, ctx.next_id()));
}

void emit_icmp_flow(FlowCtx& ctx, uint64_t start) {
  Rng& rng = *ctx.rng;
  const uint32_t client = kClientNet + static_cast<uint32_t>(rng.uniform_int(2, 250));
  const uint16_t ident = static_cast<uint16_t>(rng.uniform_int(1, 65535));
  ctx.push(craft::icmp_echo_frame(start, client, kPingTarget, 8, ident, 1, 56,
                                  ctx.next_id()));
  ctx.push(craft::icmp_echo_frame(start + us(rng.uniform(0.0003, 0.020)), kPingTarget,
                                  client, 0, ident, 1, 56, ctx.next_id()));
}

// Exponential arrival times over [0, duration).
std::vector<uint64_t> arrivals(double rate_per_s, double duration_s, Rng& rng) {
  std::vector<uint64_t> out;
  if (rate_per_s <= 0.0 || duration_s <= 0.0) return out;
  double t = rng.exponential(1.0 / rate_per_s);
  while (t < duration_s) {
    out.push_back(kBaseUs + us(t));
    t += rng.exponential(1.0 / rate_per_s);
  }
  return out;
}

void sort_frames(std::vector<RawFrame>& frames) {
  std::stable_sort(frames.begin(), frames.end(),
                   [](const RawFrame& a, const RawFrame& b) { return a.ts_us < b.ts_us; });
}

std::vector<RawFrame> benign_frames(const TrafficScenario& sc) {
  std::vector<RawFrame> frames;
  struct Archetype {
    const char* tag;
    double rate;
    void (*emit)(FlowCtx&, uint64_t);
  };
  const Archetype kinds[] = {
      {"web", sc.benign.web_flows_per_s, emit_web_flow},
      {"keepalive", sc.benign.keepalive_flows_per_s, emit_keepalive_flow},
      {"ssh", sc.benign.ssh_flows_per_s, emit_ssh_flow},
      {"dns", sc.benign.dns_flows_per_s, emit_dns_flow},
      {"icmp", sc.benign.icmp_flows_per_s, emit_icmp_flow},
  };
  for (const auto& k : kinds) {
    Rng arr_rng(Rng::derive(sc.seed, std::string("benign-arrivals-") + k.tag));
    Rng flow_rng(Rng::derive(sc.seed, std::string("benign-flows-") + k.tag));
    FlowCtx ctx{&flow_rng, &frames};
    for (uint64_t t : arrivals(k.rate, sc.duration_s, arr_rng)) k.emit(ctx, t);
  }
  return frames;
}

std::vector<RawFrame> syn_flood_frames(const TrafficScenario& sc) {
  std::vector<RawFrame> frames;
  const AttackSpec& atk = sc.attack;
  const uint32_t victim = ip_from_string(atk.victim_ip);
  Rng arr_rng(Rng::derive(sc.seed, "attack-arrivals"));
  Rng rng(Rng::derive(sc.seed, "attack-flows"));
  FlowCtx ctx{&rng, &frames};

  std::deque<uint64_t> backlog;  // expiry times of half-open slots
  const uint64_t timeout = us(atk.backlog_timeout_s);
  uint32_t sport_counter = static_cast<uint32_t>(rng.uniform_int(0, 9999));

  for (uint64_t t : arrivals(atk.rate, sc.duration_s, arr_rng)) {
    const uint32_t src =
        kAttackNet + 1 +
        static_cast<uint32_t>(rng.uniform_int(0, std::max(1, atk.source_pool) - 1));
    const uint16_t sport = static_cast<uint16_t>(1024 + (sport_counter++ % 64000));
    const uint32_t seq = static_cast<uint32_t>(rng.next_u64());
    // Flood SYNs: no payload, DF clear, small fixed window.
    ctx.push(craft::tcp_frame(t, src, sport, victim, atk.victim_port,
                              {.flags = kTcpSyn, .seq = seq, .ack = 0, .window = 512,
                               .df = false, .ip_id = ctx.next_id()}));
    if (!atk.replies) continue;
    while (!backlog.empty() && backlog.front() <= t) backlog.pop_front();
    if (static_cast<int>(backlog.size()) < atk.backlog) {
      backlog.push_back(t + timeout);
      const uint64_t rt = t + us(rng.uniform(0.0002, 0.002));
      ctx.push(craft::tcp_frame(rt, victim, atk.victim_port, src, sport,
                                {.flags = static_cast<uint16_t>(kTcpSyn | kTcpAck),
                                 .seq = static_cast<uint32_t>(rng.next_u64()),
                                 .ack = seq + 1, .window = 29200, .df = true,
                                 .ip_id = ctx.next_id()}));
    }
  }
  return frames;
}

std::vector<RawFrame> http_flood_frames(const TrafficScenario& sc) {
  std::vector<RawFrame> frames;
  const AttackSpec& atk = sc.attack;
  const uint32_t victim = ip_from_string(atk.victim_ip);
  Rng arr_rng(Rng::derive(sc.seed, "attack-arrivals"));
  Rng rng(Rng::derive(sc.seed, "attack-flows"));
  FlowCtx ctx{&rng, &frames};
  uint32_t sport_counter = static_cast<uint32_t>(rng.uniform_int(0, 9999));

  // Fixed request bytes: flood tools recycle one template.
  const std::string req_str =
      "GET / HTTP/1.1\r\nHost: " + atk.victim_ip +
      "\r\nUser-Agent: Mozilla/4.0 (compatible; MSIE 6.0; Windows NT 5.1)\r\n\r\n";
  const std::vector<uint8_t> req(req_str.begin(), req_str.end());

  for (uint64_t t0 : arrivals(atk.rate, sc.duration_s, arr_rng)) {
    const uint32_t bot =
        kAttackNet + 1 +
        static_cast<uint32_t>(rng.uniform_int(0, std::max(1, atk.source_pool) - 1));
    const uint16_t sport = static_cast<uint16_t>(1024 + (sport_counter++ % 64000));
    const uint32_t isn_c = static_cast<uint32_t>(rng.next_u64());
    const uint32_t isn_s = static_cast<uint32_t>(rng.next_u64());
    auto gap = [&] { return us(rng.uniform(0.0002, 0.003)); };

    uint64_t t = t0;
    ctx.push(craft::tcp_frame(t, bot, sport, victim, atk.victim_port,
                              {.flags = kTcpSyn, .seq = isn_c, .window = 8192,
                               .df = true, .ip_id = ctx.next_id()}));
    t += gap();
    ctx.push(craft::tcp_frame(t, victim, atk.victim_port, bot, sport,
                              {.flags = static_cast<uint16_t>(kTcpSyn | kTcpAck),
                               .seq = isn_s, .ack = isn_c + 1, .window = 29200,
                               .df = true, .ip_id = ctx.next_id()}));
    t += gap();
    ctx.push(craft::tcp_frame(t, bot, sport, victim, atk.victim_port,
                              {.flags = kTcpAck, .seq = isn_c + 1, .ack = isn_s + 1,
                               .window = 8192, .df = true, .ip_id = ctx.next_id()}));
    // Flood tools hold the connection open and pump requests through it;
    // some connections die early, so flow lengths vary.
    uint32_t sent = 0, served = 0;
    const int n_gets = static_cast<int>(rng.uniform_int(1, 8));
    for (int g = 0; g < n_gets; ++g) {
      t += gap();
      ctx.push(craft::tcp_frame(t, bot, sport, victim, atk.victim_port,
                                {.flags = static_cast<uint16_t>(kTcpPsh | kTcpAck),
                                 .seq = isn_c + 1 + sent, .ack = isn_s + 1 + served,
                                 .window = 8192, .df = true, .ip_id = ctx.next_id(),
                                 .payload = req}));
      sent += static_cast<uint32_t>(req.size());
      t += gap();
      const size_t resp_len = static_cast<size_t>(rng.uniform_int(150, 350));
      ctx.push(craft::tcp_frame(t, victim, atk.victim_port, bot, sport,
                                {.flags = static_cast<uint16_t>(kTcpPsh | kTcpAck),
                                 .seq = isn_s + 1 + served, .ack = isn_c + 1 + sent,
                                 .window = 29200, .df = true, .ip_id = ctx.next_id(),
                                 .payload = http_response_payload(rng, resp_len)}));
      served += static_cast<uint32_t>(resp_len);
      t += gap();
      ctx.push(craft::tcp_frame(t, bot, sport, victim, atk.victim_port,
                                {.flags = kTcpAck, .seq = isn_c + 1 + sent,
                                 .ack = isn_s + 1 + served, .window = 8192,
                                 .df = true, .ip_id = ctx.next_id()}));
    }
  }
  return frames;
}

}  // namespace

std::string attacker_cidr() { return "198.51.100.0/24"; }
std::string benign_client_cidr() { return "192.0.2.0/24"; }

CaptureFile synth_benign(const TrafficScenario& sc) {
  CaptureFile cap;
  cap.frames = benign_frames(sc);
  sort_frames(cap.frames);
  return cap;
}

CaptureFile synth_syn_flood(const TrafficScenario& sc) {
  if (sc.attack.kind != AttackSpec::Kind::kSynFlood) {
    throw ConfigError("synth_syn_flood: scenario attack kind is not syn_flood");
  }
  CaptureFile cap;
  cap.frames = syn_flood_frames(sc);
  sort_frames(cap.frames);
  return cap;
}

CaptureFile synth_http_flood(const TrafficScenario& sc) {
  if (sc.attack.kind != AttackSpec::Kind::kHttpGetFlood) {
    throw ConfigError("synth_http_flood: scenario attack kind is not http_get_flood");
  }
  CaptureFile cap;
  cap.frames = http_flood_frames(sc);
  sort_frames(cap.frames);
  return cap;
}

CaptureFile synth_scenario(const TrafficScenario& sc) {
  CaptureFile cap;
  cap.frames = benign_frames(sc);
  std::vector<RawFrame> attack;
  switch (sc.attack.kind) {
    case AttackSpec::Kind::kNone:
      break;
    case AttackSpec::Kind::kSynFlood:
      attack = syn_flood_frames(sc);
      break;
    case AttackSpec::Kind::kHttpGetFlood:
      attack = http_flood_frames(sc);
      break;
  }
  cap.frames.insert(cap.frames.end(), std::make_move_iterator(attack.begin()),
                    std::make_move_iterator(attack.end()));
  sort_frames(cap.frames);
  return cap;
}

TrafficScenario scenario_from_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open scenario '" + path + "'");
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ParseError("scenario '" + path + "': " + e.what());
  }
  TrafficScenario sc;
  sc.duration_s = j.value("duration_s", sc.duration_s);
  sc.seed = j.value("seed", sc.seed);
  if (j.contains("benign")) {
    const json& b = j["benign"];
    sc.benign.web_flows_per_s = b.value("web_flows_per_s", sc.benign.web_flows_per_s);
    sc.benign.keepalive_flows_per_s =
        b.value("keepalive_flows_per_s", sc.benign.keepalive_flows_per_s);
    sc.benign.ssh_flows_per_s = b.value("ssh_flows_per_s", sc.benign.ssh_flows_per_s);
    sc.benign.dns_flows_per_s = b.value("dns_flows_per_s", sc.benign.dns_flows_per_s);
    sc.benign.icmp_flows_per_s = b.value("icmp_flows_per_s", sc.benign.icmp_flows_per_s);
  }
  if (j.contains("attack")) {
    const json& a = j["attack"];
    const std::string kind = a.value("kind", "none");
    if (kind == "none") {
      sc.attack.kind = AttackSpec::Kind::kNone;
    } else if (kind == "syn_flood") {
      sc.attack.kind = AttackSpec::Kind::kSynFlood;
    } else if (kind == "http_get_flood") {
      sc.attack.kind = AttackSpec::Kind::kHttpGetFlood;
    } else {
      throw ConfigError("scenario: unknown attack kind '" + kind + "'");
    }
    sc.attack.rate = a.value("rate", sc.attack.rate);
    sc.attack.source_pool = a.value("source_pool", sc.attack.source_pool);
    sc.attack.victim_ip = a.value("victim_ip", sc.attack.victim_ip);
    sc.attack.victim_port = a.value("victim_port", sc.attack.victim_port);
    sc.attack.replies = a.value("replies", sc.attack.replies);
    sc.attack.backlog = a.value("backlog", sc.attack.backlog);
    sc.attack.backlog_timeout_s = a.value("backlog_timeout_s", sc.attack.backlog_timeout_s);
  }
  if (sc.duration_s < 0.0) throw ConfigError("scenario: negative duration");
  if (sc.attack.kind != AttackSpec::Kind::kNone && sc.attack.rate <= 0.0) {
    throw ConfigError("scenario: attack rate must be positive");
  }
  return sc;
}

std::string scenario_to_json(const TrafficScenario& sc) {
  const char* kind = "none";
  if (sc.attack.kind == AttackSpec::Kind::kSynFlood) kind = "syn_flood";
  if (sc.attack.kind == AttackSpec::Kind::kHttpGetFlood) kind = "http_get_flood";
  json j{
      {"duration_s", sc.duration_s},
      {"seed", sc.seed},
      {"benign",
       {{"web_flows_per_s", sc.benign.web_flows_per_s},
        {"keepalive_flows_per_s", sc.benign.keepalive_flows_per_s},
        {"ssh_flows_per_s", sc.benign.ssh_flows_per_s},
        {"dns_flows_per_s", sc.benign.dns_flows_per_s},
        {"icmp_flows_per_s", sc.benign.icmp_flows_per_s}}},
      {"attack",
       {{"kind", kind},
        {"rate", sc.attack.rate},
        {"source_pool", sc.attack.source_pool},
        {"victim_ip", sc.attack.victim_ip},
        {"victim_port", sc.attack.victim_port},
        {"replies", sc.attack.replies},
        {"backlog", sc.attack.backlog},
        {"backlog_timeout_s", sc.attack.backlog_timeout_s}}},
  };
  return j.dump(2);
}

}  // namespace rampart
