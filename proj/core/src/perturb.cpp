#include "rampart/perturb.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "rampart/craft.hpp"
#include "rampart/error.hpp"
#include "rampart/packet.hpp"

namespace rampart {

using craft::FrameView;
using nlohmann::json;

namespace {

uint64_t us(double seconds) { return static_cast<uint64_t>(seconds * 1e6 + 0.5); }

struct Decoded {
  bool ok = false;
  PacketRecord rec;
};

Decoded decode(const RawFrame& f) {
  DecodeStats st;
  Decoded d;
  if (auto r = decode_frame(f, st)) {
    d.ok = true;
    d.rec = *r;
  }
  return d;
}

bool is_attack_packet(const PacketRecord& r, const PerturbationSpec& spec) {
  return spec.attackers.contains(r.src_ip) && spec.victims.contains(r.dst_ip);
}

bool is_attack_flow(const PacketRecord& r, const PerturbationSpec& spec) {
  return (spec.attackers.contains(r.src_ip) && spec.victims.contains(r.dst_ip)) ||
         (spec.attackers.contains(r.dst_ip) && spec.victims.contains(r.src_ip));
}

}  // namespace

const char* perturb_kind_name(PerturbKind k) {
  switch (k) {
    case PerturbKind::kIpFlags: return "ip_flags";
    case PerturbKind::kTcpLen: return "tcp_len";
    case PerturbKind::kPaddingReplacement: return "padding_replacement";
    case PerturbKind::kSynReplication: return "syn_replication";
    case PerturbKind::kDelay: return "delay";
    case PerturbKind::kFragmentation: return "fragmentation";
  }
  return "?";
}

PerturbKind perturb_kind_from_name(const std::string& name) {
  for (PerturbKind k :
       {PerturbKind::kIpFlags, PerturbKind::kTcpLen, PerturbKind::kPaddingReplacement,
        PerturbKind::kSynReplication, PerturbKind::kDelay, PerturbKind::kFragmentation}) {
    if (name == perturb_kind_name(k)) return k;
  }
  throw ConfigError("unknown perturbation kind '" + name + "'");
}

PerturbParams default_params(PerturbKind kind) {
  PerturbParams p;
  switch (kind) {
    case PerturbKind::kIpFlags:
      break;
    case PerturbKind::kTcpLen:
      break;
    case PerturbKind::kPaddingReplacement:
      p.count_min = 1;
      p.count_max = 8;
      p.delay_min_s = 0.001;
      p.delay_max_s = 0.050;
      break;
    case PerturbKind::kSynReplication:
      p.count_min = 1;
      p.count_max = 4;
      p.delay_min_s = 0.010;
      p.delay_max_s = 0.200;
      break;
    case PerturbKind::kDelay:
      // 30-250x the flood's native pacing, while typical flows still fit one
      // 10 s window (longer gaps mostly shear flows into window fragments,
      // which perturbs flow_length more than Time).
      p.delay_min_s = 0.05;
      p.delay_max_s = 0.4;
      break;
    case PerturbKind::kFragmentation:
      break;
  }
  return p;
}

std::string PerturbSummary::to_text() const {
  std::string out = "perturbation summary\n";
  for (const auto& [k, v] : counters) {
    out += "  " + k + "=" + std::to_string(v) + "\n";
  }
  out += "  warnings=" + std::to_string(warnings) + "\n";
  return out;
}

void perturb_ip_flags(std::vector<RawFrame>& frames, const PerturbationSpec& spec,
                      Rng& rng, PerturbSummary& summary) {
  uint64_t touched = 0;
  for (RawFrame& f : frames) {
    Decoded d = decode(f);
    if (!d.ok || !is_attack_packet(d.rec, spec)) continue;
    auto view = FrameView::parse(f.bytes);
    if (!view) throw Error("ip_flags: attack filter matched a non-IP frame");
    view->set_df(rng.coin());
    view->refresh_checksums();
    ++touched;
  }
  summary.counters["ip_flags.packets_touched"] += touched;
}

void perturb_tcp_len(std::vector<RawFrame>& frames, const PerturbStep& step,
                     const PerturbationSpec& spec, Rng& rng, PerturbSummary& summary) {
  uint64_t touched = 0, clamped = 0;
  for (RawFrame& f : frames) {
    Decoded d = decode(f);
    if (!d.ok || !is_attack_packet(d.rec, spec)) continue;
    if (d.rec.protocol != 6 || (d.rec.tcp_flags & kTcpSyn) == 0) continue;
    int len = static_cast<int>(
        rng.uniform_int(step.params.payload_min, step.params.payload_max));
    if (len > 1460) {
      len = 1460;
      ++clamped;
    }
    std::vector<uint8_t> payload(static_cast<size_t>(len));
    for (auto& b : payload) b = static_cast<uint8_t>(rng.uniform_int(0, 255));
    auto view = FrameView::parse(f.bytes);
    if (!view) throw Error("tcp_len: attack filter matched a non-IP frame");
    view->set_tcp_payload(payload);
    view = FrameView::parse(f.bytes);  // payload resize invalidates offsets
    view->refresh_checksums();
    ++touched;
  }
  summary.counters["tcp_len.packets_touched"] += touched;
  summary.counters["tcp_len.payloads_clamped"] += clamped;
  summary.warnings += clamped;
}

void inject_padding_packets(std::vector<RawFrame>& frames, const PerturbStep& step,
                            const PerturbationSpec& spec, Rng& rng,
                            PerturbSummary& summary) {
  uint64_t inserted = 0;
  std::vector<RawFrame> added;
  for (const RawFrame& f : frames) {
    Decoded d = decode(f);
    if (!d.ok || !is_attack_packet(d.rec, spec)) continue;
    if (d.rec.protocol != 6 || (d.rec.tcp_flags & kTcpSyn) == 0) continue;
    const int k =
        static_cast<int>(rng.uniform_int(step.params.count_min, step.params.count_max));
    // Dummies look like benign keepalives: same 5-tuple, empty ACKs, DF set.
    const uint32_t ack = static_cast<uint32_t>(rng.next_u64());
    uint64_t t = f.ts_us;
    for (int j = 0; j < k; ++j) {
      const uint64_t proposed =
          t + us(rng.uniform(step.params.delay_min_s, step.params.delay_max_s));
      t = std::max(proposed, t + 1);  // collisions resolved by +1 us
      added.push_back(craft::tcp_frame(
          t, d.rec.src_ip, d.rec.src_port, d.rec.dst_ip, d.rec.dst_port,
          {.flags = kTcpAck, .seq = d.rec.tcp_seq + 1, .ack = ack, .window = 64240,
           .df = true, .ip_id = static_cast<uint16_t>(rng.uniform_int(1, 65535))}));
      ++inserted;
    }
  }
  frames.insert(frames.end(), std::make_move_iterator(added.begin()),
                std::make_move_iterator(added.end()));
  summary.counters["padding_replacement.packets_inserted"] += inserted;
}

void replicate_syn(std::vector<RawFrame>& frames, const PerturbStep& step,
                   const PerturbationSpec& spec, Rng& rng, PerturbSummary& summary) {
  uint64_t inserted = 0;
  std::vector<RawFrame> added;
  for (const RawFrame& f : frames) {
    Decoded d = decode(f);
    if (!d.ok || !is_attack_packet(d.rec, spec)) continue;
    if (d.rec.protocol != 6 || (d.rec.tcp_flags & kTcpSyn) == 0) continue;
    const int r =
        static_cast<int>(rng.uniform_int(step.params.count_min, step.params.count_max));
    uint64_t t = f.ts_us;
    for (int j = 0; j < r; ++j) {
      const uint64_t proposed =
          t + us(rng.uniform(step.params.delay_min_s, step.params.delay_max_s));
      t = std::max(proposed, t + 1);
      RawFrame copy = f;  // byte-identical replica, new timestamp
      copy.ts_us = t;
      added.push_back(std::move(copy));
      ++inserted;
    }
  }
  frames.insert(frames.end(), std::make_move_iterator(added.begin()),
                std::make_move_iterator(added.end()));
  summary.counters["syn_replication.packets_inserted"] += inserted;
}

void inject_delays(std::vector<RawFrame>& frames, const PerturbStep& step,
                   const PerturbationSpec& spec, Rng& rng, PerturbSummary& summary) {
  // Stretch gaps per flow; order within the flow is preserved because shifts
  // accumulate monotonically.
  std::map<FlowKey, std::vector<size_t>> flows;
  for (size_t i = 0; i < frames.size(); ++i) {
    Decoded d = decode(frames[i]);
    if (!d.ok || !is_attack_flow(d.rec, spec)) continue;
    flows[FlowKey::from_packet(d.rec)].push_back(i);
  }
  uint64_t touched = 0;
  for (auto& [key, idxs] : flows) {
    std::stable_sort(idxs.begin(), idxs.end(),
                     [&](size_t a, size_t b) { return frames[a].ts_us < frames[b].ts_us; });
    uint64_t shift = 0;
    for (size_t i = 1; i < idxs.size(); ++i) {
      shift += us(rng.uniform(step.params.delay_min_s, step.params.delay_max_s));
      frames[idxs[i]].ts_us += shift;
      ++touched;
    }
  }
  summary.counters["delay.packets_shifted"] += touched;
}

void fragment_packets(std::vector<RawFrame>& frames, const PerturbStep& step,
                      const PerturbationSpec& spec, Rng& rng, PerturbSummary& summary) {
  (void)rng;
  uint64_t split = 0, produced = 0, attack_seen = 0;
  std::vector<RawFrame> out;
  out.reserve(frames.size());
  const size_t mss = static_cast<size_t>(std::max(1, step.params.mss));
  for (RawFrame& f : frames) {
    Decoded d = decode(f);
    const bool attack = d.ok && is_attack_packet(d.rec, spec) && d.rec.protocol == 6;
    if (attack) ++attack_seen;
    if (!attack || d.rec.tcp_payload_len <= mss) {
      out.push_back(std::move(f));  // no payload beyond one segment: pass through
      continue;
    }
    auto view = FrameView::parse(f.bytes);
    const size_t ihl = 20;  // builders emit no IP options
    const size_t doff_off = 14 + ihl + 12;
    const size_t doff = static_cast<size_t>(f.bytes[doff_off] >> 4) * 4;
    const size_t payload_off = 14 + ihl + doff;
    const std::vector<uint8_t> payload(f.bytes.begin() + static_cast<long>(payload_off),
                                       f.bytes.end());
    const uint16_t flags = view->tcp_flags();
    const uint32_t seq0 = view->tcp_seq();
    const size_t n = (payload.size() + mss - 1) / mss;
    uint64_t t = f.ts_us;
    for (size_t i = 0; i < n; ++i) {
      const size_t lo = i * mss;
      const size_t hi = std::min(payload.size(), lo + mss);
      RawFrame frag;
      frag.bytes = f.bytes;
      frag.ts_us = (i == 0) ? t : std::max(t + us(step.params.frag_gap_s), t + 1);
      t = frag.ts_us;
      auto fv = FrameView::parse(frag.bytes);
      fv->set_tcp_seq(seq0 + static_cast<uint32_t>(lo));
      fv->set_tcp_payload({payload.data() + lo, hi - lo});
      // SYN only on the first segment; PSH/FIN only on the last.
      uint16_t fl = flags;
      if (i > 0) fl = static_cast<uint16_t>(fl & ~kTcpSyn);
      if (i + 1 < n) fl = static_cast<uint16_t>(fl & ~(kTcpPsh | kTcpFin));
      frag.bytes[doff_off + 1] = static_cast<uint8_t>(fl & 0xFF);
      frag.bytes[doff_off] =
          static_cast<uint8_t>((frag.bytes[doff_off] & 0xFE) | ((fl >> 8) & 0x01));
      fv = FrameView::parse(frag.bytes);
      fv->refresh_checksums();
      out.push_back(std::move(frag));
      ++produced;
    }
    ++split;
  }
  frames = std::move(out);
  if (split == 0 && attack_seen > 0) {
    // e.g. fragmentation requested on a payload-free SYN-only trace
    ++summary.warnings;
  }
  summary.counters["fragmentation.packets_split"] += split;
  summary.counters["fragmentation.fragments_produced"] += produced;
}

CaptureFile perturb_capture(const CaptureFile& input, const PerturbationSpec& spec,
                            PerturbSummary* summary) {
  if (spec.steps.empty()) {
    throw ConfigError("perturb: spec lists no perturbation kinds");
  }
  if (spec.attackers.empty() || spec.victims.empty()) {
    throw ConfigError("perturb: attack endpoint filter is empty");
  }
  PerturbSummary local;
  PerturbSummary& sum = summary ? *summary : local;
  std::vector<RawFrame> frames = input.frames;
  for (size_t i = 0; i < spec.steps.size(); ++i) {
    const PerturbStep& step = spec.steps[i];
    Rng rng(Rng::derive(spec.seed, perturb_kind_name(step.kind), i));
    switch (step.kind) {
      case PerturbKind::kIpFlags: perturb_ip_flags(frames, spec, rng, sum); break;
      case PerturbKind::kTcpLen: perturb_tcp_len(frames, step, spec, rng, sum); break;
      case PerturbKind::kPaddingReplacement:
        inject_padding_packets(frames, step, spec, rng, sum);
        break;
      case PerturbKind::kSynReplication:
        replicate_syn(frames, step, spec, rng, sum);
        break;
      case PerturbKind::kDelay: inject_delays(frames, step, spec, rng, sum); break;
      case PerturbKind::kFragmentation:
        fragment_packets(frames, step, spec, rng, sum);
        break;
    }
  }
  std::stable_sort(frames.begin(), frames.end(),
                   [](const RawFrame& a, const RawFrame& b) { return a.ts_us < b.ts_us; });
  CaptureFile out;
  out.link_type = input.link_type;
  out.frames = std::move(frames);
  return out;
}

PerturbationSpec perturb_spec_from_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open perturbation spec '" + path + "'");
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ParseError("perturbation spec '" + path + "': " + e.what());
  }
  PerturbationSpec spec;
  spec.seed = j.value("seed", uint64_t{1});
  spec.attackers = IpSet::parse(j.value("attackers", std::vector<std::string>{}));
  spec.victims = IpSet::parse(j.value("victims", std::vector<std::string>{}));
  if (!j.contains("steps") || !j["steps"].is_array() || j["steps"].empty()) {
    throw ConfigError("perturbation spec: 'steps' must be a non-empty list");
  }
  for (const json& s : j["steps"]) {
    PerturbStep step;
    step.kind = perturb_kind_from_name(s.at("kind").get<std::string>());
    step.params = default_params(step.kind);
    step.params.payload_min = s.value("payload_min", step.params.payload_min);
    step.params.payload_max = s.value("payload_max", step.params.payload_max);
    step.params.count_min = s.value("count_min", step.params.count_min);
    step.params.count_max = s.value("count_max", step.params.count_max);
    step.params.delay_min_s = s.value("delay_min_s", step.params.delay_min_s);
    step.params.delay_max_s = s.value("delay_max_s", step.params.delay_max_s);
    step.params.mss = s.value("mss", step.params.mss);
    step.params.frag_gap_s = s.value("frag_gap_s", step.params.frag_gap_s);
    if (step.params.payload_min < 1 || step.params.payload_max < step.params.payload_min ||
        step.params.count_min < 0 || step.params.count_max < step.params.count_min ||
        step.params.delay_min_s < 0 || step.params.delay_max_s < step.params.delay_min_s ||
        step.params.mss < 1) {
      throw ConfigError(std::string("perturbation spec: bad parameters for '") +
                        perturb_kind_name(step.kind) + "'");
    }
    spec.steps.push_back(step);
  }
  return spec;
}

}  // namespace rampart
