#include <benchmark/benchmark.h>

#include "rampart/augment.hpp"
#include "rampart/flow.hpp"
#include "rampart/metrics.hpp"
#include "rampart/packet.hpp"
#include "rampart/synth.hpp"

using namespace rampart;

static TrafficScenario bench_scenario() {
  TrafficScenario sc;
  sc.duration_s = 10.0;
  sc.seed = 99;
  sc.attack.kind = AttackSpec::Kind::kSynFlood;
  sc.attack.rate = 50.0;
  return sc;
}

static void BM_SynthScenario(benchmark::State& state) {
  auto sc = bench_scenario();
  for (auto _ : state) {
    benchmark::DoNotOptimize(synth_scenario(sc).frames.size());
  }
}
BENCHMARK(BM_SynthScenario);

static void BM_DecodeCapture(benchmark::State& state) {
  auto cap = synth_scenario(bench_scenario());
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_capture(cap, nullptr).size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cap.frames.size()));
}
BENCHMARK(BM_DecodeCapture);

static void BM_ExtractSamples(benchmark::State& state) {
  auto packets = decode_capture(synth_scenario(bench_scenario()), nullptr);
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_samples(packets).size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(packets.size()));
}
BENCHMARK(BM_ExtractSamples);

static void BM_ComputeMetrics(benchmark::State& state) {
  Rng rng(5);
  std::vector<int> labels(100000), preds(100000);
  for (size_t i = 0; i < labels.size(); ++i) {
    labels[i] = static_cast<int>(rng.uniform_int(0, 1));
    preds[i] = static_cast<int>(rng.uniform_int(0, 1));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_metrics(labels, preds).tp);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(labels.size()));
}
BENCHMARK(BM_ComputeMetrics);

static void BM_GadotAugment(benchmark::State& state) {
  auto packets = decode_capture(synth_scenario(bench_scenario()), nullptr);
  LabeledDataset ds;
  ds.samples = extract_samples(packets);
  label_by_endpoints(ds.samples, IpSet::parse({attacker_cidr()}),
                     IpSet::parse({"203.0.113.80"}));
  ds.profile = fit_normalization(ds.samples);
  apply_normalization(ds.samples, ds.profile, false);
  ds.normalized = true;
  auto gan = make_gan({}, 3);
  auto plan = PerturbationPlan::all();
  for (auto _ : state) {
    benchmark::DoNotOptimize(gadot_augment(ds, plan, gan, 4).samples.size());
  }
}
BENCHMARK(BM_GadotAugment);
