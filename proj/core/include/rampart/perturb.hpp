#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rampart/flow.hpp"
#include "rampart/pcap.hpp"
#include "rampart/rng.hpp"

// Problem-space perturbation: rewrites attack packets of a capture so the
// extracted features drift toward benign while the attack semantics survive
// (SYNs stay SYNs, the victim endpoint is never altered, checksums stay
// valid, non-attack packets are byte-identical).
namespace rampart {

enum class PerturbKind {
  kIpFlags,            // DF bit of each attack packet set by a fair coin
  kTcpLen,             // attack SYNs gain a random payload
  kPaddingReplacement, // dummy same-flow ACKs injected after each attack SYN
  kSynReplication,     // each attack SYN repeated with a variable delay
  kDelay,              // inter-packet gaps of attack flows stretched
  kFragmentation,      // payload-bearing attack packets split at an MSS
};

const char* perturb_kind_name(PerturbKind k);
PerturbKind perturb_kind_from_name(const std::string& name);

struct PerturbParams {
  int payload_min = 1;       // tcp_len
  int payload_max = 500;
  int count_min = 1;         // padding dummies / SYN replicas
  int count_max = 8;
  double delay_min_s = 0.001;
  double delay_max_s = 0.050;
  int mss = 64;              // fragmentation segment cap
  double frag_gap_s = 0.0001;
};

PerturbParams default_params(PerturbKind kind);

struct PerturbStep {
  PerturbKind kind;
  PerturbParams params;
};

struct PerturbationSpec {
  std::vector<PerturbStep> steps;
  uint64_t seed = 1;
  IpSet attackers;  // packets with src in here and dst in victims are "attack packets"
  IpSet victims;
};

struct PerturbSummary {
  std::map<std::string, uint64_t> counters;
  uint64_t warnings = 0;
  std::string to_text() const;
};

// Individual rewrites, applied in place on a frame list (an op may append or
// replace frames; ordering is restored by the composer).
void perturb_ip_flags(std::vector<RawFrame>& frames, const PerturbationSpec& spec,
                      Rng& rng, PerturbSummary& summary);
void perturb_tcp_len(std::vector<RawFrame>& frames, const PerturbStep& step,
                     const PerturbationSpec& spec, Rng& rng, PerturbSummary& summary);
void inject_padding_packets(std::vector<RawFrame>& frames, const PerturbStep& step,
                            const PerturbationSpec& spec, Rng& rng,
                            PerturbSummary& summary);
void replicate_syn(std::vector<RawFrame>& frames, const PerturbStep& step,
                   const PerturbationSpec& spec, Rng& rng, PerturbSummary& summary);
void inject_delays(std::vector<RawFrame>& frames, const PerturbStep& step,
                   const PerturbationSpec& spec, Rng& rng, PerturbSummary& summary);
void fragment_packets(std::vector<RawFrame>& frames, const PerturbStep& step,
                      const PerturbationSpec& spec, Rng& rng, PerturbSummary& summary);

// Applies the steps in listed order and re-sorts the result by timestamp.
CaptureFile perturb_capture(const CaptureFile& input, const PerturbationSpec& spec,
                            PerturbSummary* summary = nullptr);

PerturbationSpec perturb_spec_from_json_file(const std::string& path);

}  // namespace rampart
