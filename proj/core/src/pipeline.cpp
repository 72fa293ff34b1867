#include "rampart/pipeline.hpp"

#include <fstream>

#include <json.hpp>

#include "rampart/augment.hpp"
#include "rampart/craft.hpp"
#include "rampart/detector.hpp"
#include "rampart/error.hpp"
#include "rampart/gan.hpp"
#include "rampart/hash.hpp"
#include "rampart/version.hpp"

namespace rampart {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json config_to_json(const PipelineConfig& c) {
  return json{{"seed", c.seed},
              {"scale", c.scale},
              {"train_duration_s", c.train_duration_s},
              {"test_duration_s", c.test_duration_s},
              {"syn_rate", c.syn_rate},
              {"http_rate", c.http_rate},
              {"gan_iterations", c.gan_iterations},
              {"detector_epochs", c.detector_epochs},
              {"fgsm_epsilon", c.fgsm_epsilon},
              {"window_seconds", c.window_seconds},
              {"max_packets", c.max_packets},
              {"deterministic", c.deterministic}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

// Provenance sidecar for artifacts that cannot embed metadata themselves
// (pcap traces, report tables).
void write_meta(const fs::path& for_path, const PipelineConfig& config,
                uint64_t stage_seed) {
  json j{{"tool_version", kVersion},
         {"config_hash", pipeline_config_hash(config)},
         {"seed", config.seed},
         {"stage_seed", stage_seed}};
  write_text(fs::path(for_path.string() + ".meta.json"), j.dump(2) + "\n");
}

struct ScenarioPlan {
  std::string name;
  AttackSpec::Kind kind;
  double rate;
  std::vector<std::pair<std::string, std::vector<PerturbKind>>> perturbations;
};

LabeledDataset balanced_train_dataset(const PipelineConfig& config,
                                      const fs::path& trace, const IpSet& attackers,
                                      const IpSet& victims, uint64_t seed) {
  ExtractOptions opts{config.window_seconds, config.max_packets};
  LabeledDataset raw = extract_dataset(trace, opts, attackers, victims, nullptr);
  balance_dataset(raw, Rng::derive(seed, "train-balance"));
  raw.meta.seed = seed;
  return raw;
}

}  // namespace

std::string pipeline_config_hash(const PipelineConfig& config) {
  return hash_hex(fnv1a64(config_to_json(config).dump()));
}

PipelineConfig pipeline_config_from_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config '" + path + "'");
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ParseError("config '" + path + "': " + e.what());
  }
  PipelineConfig c;
  c.seed = j.value("seed", c.seed);
  c.scale = j.value("scale", c.scale);
  c.out_dir = j.value("out_dir", c.out_dir.string());
  c.train_duration_s = j.value("train_duration_s", c.train_duration_s);
  c.test_duration_s = j.value("test_duration_s", c.test_duration_s);
  c.syn_rate = j.value("syn_rate", c.syn_rate);
  c.http_rate = j.value("http_rate", c.http_rate);
  c.gan_iterations = j.value("gan_iterations", c.gan_iterations);
  c.detector_epochs = j.value("detector_epochs", c.detector_epochs);
  c.fgsm_epsilon = j.value("fgsm_epsilon", c.fgsm_epsilon);
  c.window_seconds = j.value("window_seconds", c.window_seconds);
  c.max_packets = j.value("max_packets", c.max_packets);
  c.deterministic = j.value("deterministic", c.deterministic);
  return c;
}

LabeledDataset extract_dataset(const fs::path& pcap_path, const ExtractOptions& options,
                               const IpSet& attackers, const IpSet& victims,
                               const NormalizationProfile* apply_profile,
                               DecodeStats* stats) {
  auto packets = parse_capture(pcap_path, stats);
  LabeledDataset ds;
  ds.samples = extract_samples(packets, options);
  if (!attackers.empty() && !victims.empty()) {
    label_by_endpoints(ds.samples, attackers, victims);
  }
  if (!ds.samples.empty()) {
    if (apply_profile) {
      ds.profile = *apply_profile;
      apply_normalization(ds.samples, ds.profile, /*clamp=*/true);
    } else {
      ds.profile = fit_normalization(ds.samples);
      apply_normalization(ds.samples, ds.profile, /*clamp=*/false);
    }
    ds.normalized = true;
  }
  ds.meta.tool_version = kVersion;
  ds.meta.source = pcap_path.string();
  ds.meta.window_seconds = options.window_seconds;
  ds.meta.max_packets = options.max_packets;
  return ds;
}

std::vector<std::pair<std::string, std::vector<PerturbKind>>> syn_perturbations() {
  using K = PerturbKind;
  return {
      {"ip_flags", {K::kIpFlags}},
      {"tcp_len", {K::kTcpLen}},
      {"padding_replacement", {K::kPaddingReplacement}},
      {"syn_replication", {K::kSynReplication}},
      {"ip_flags+tcp_len+padding_replacement",
       {K::kIpFlags, K::kTcpLen, K::kPaddingReplacement}},
      {"ip_flags+tcp_len+syn_replication",
       {K::kIpFlags, K::kTcpLen, K::kSynReplication}},
  };
}

std::vector<std::pair<std::string, std::vector<PerturbKind>>> http_perturbations() {
  using K = PerturbKind;
  return {
      {"delay", {K::kDelay}},
      {"fragmentation", {K::kFragmentation}},
  };
}

std::vector<ScenarioArtifacts> run_reproduce(const PipelineConfig& config) {
  const std::vector<ScenarioPlan> plans = {
      {"syn", AttackSpec::Kind::kSynFlood, config.syn_rate, syn_perturbations()},
      {"http", AttackSpec::Kind::kHttpGetFlood, config.http_rate, http_perturbations()},
  };

  std::vector<ScenarioArtifacts> results;
  for (const ScenarioPlan& plan : plans) {
    ScenarioArtifacts art;
    art.name = plan.name;
    art.dir = config.out_dir / plan.name;
    const fs::path traces = art.dir / "traces";
    const fs::path datasets = art.dir / "datasets";
    const fs::path models = art.dir / "models";
    const fs::path reports = art.dir / "reports";
    for (const auto& d : {traces, datasets, models, reports}) fs::create_directories(d);

    const uint64_t sseed = Rng::derive(config.seed, "scenario-" + plan.name);
    const IpSet attackers = IpSet::parse({attacker_cidr()});
    const std::string victim_ip = "203.0.113.80";
    const IpSet victims = IpSet::parse({victim_ip});

    // --- synthesize train and test traces ---
    TrafficScenario train_sc;
    train_sc.duration_s = config.train_duration_s;
    train_sc.seed = Rng::derive(sseed, "train-trace");
    train_sc.attack.kind = plan.kind;
    train_sc.attack.rate = plan.rate;
    train_sc.attack.victim_ip = victim_ip;
    write_pcap(traces / "train.pcap", synth_scenario(train_sc));
    write_meta(traces / "train.pcap", config, train_sc.seed);

    TrafficScenario benign_sc;
    benign_sc.duration_s = config.test_duration_s;
    benign_sc.seed = Rng::derive(sseed, "test-benign-trace");
    write_pcap(traces / "test_benign.pcap", synth_benign(benign_sc));
    write_meta(traces / "test_benign.pcap", config, benign_sc.seed);

    TrafficScenario attack_sc;
    attack_sc.duration_s = config.test_duration_s;
    attack_sc.seed = Rng::derive(sseed, "test-attack-trace");
    attack_sc.attack.kind = plan.kind;
    attack_sc.attack.rate = plan.rate;
    attack_sc.attack.victim_ip = victim_ip;
    write_pcap(traces / "test_attack.pcap",
               plan.kind == AttackSpec::Kind::kSynFlood ? synth_syn_flood(attack_sc)
                                                        : synth_http_flood(attack_sc));
    write_meta(traces / "test_attack.pcap", config, attack_sc.seed);

    // --- datasets ---
    const ExtractOptions opts{config.window_seconds, config.max_packets};
    LabeledDataset train =
        balanced_train_dataset(config, traces / "train.pcap", attackers, victims, sseed);
    train.meta.config_hash = pipeline_config_hash(config);
    save_dataset(datasets / "train.json", train);

    LabeledDataset test_benign = extract_dataset(traces / "test_benign.pcap", opts,
                                                 attackers, victims, &train.profile);
    test_benign.meta.config_hash = train.meta.config_hash;
    test_benign.meta.seed = benign_sc.seed;
    save_dataset(datasets / "test_benign.json", test_benign);

    LabeledDataset test_attack = extract_dataset(traces / "test_attack.pcap", opts,
                                                 attackers, victims, &train.profile);
    test_attack.meta.config_hash = train.meta.config_hash;
    test_attack.meta.seed = attack_sc.seed;
    save_dataset(datasets / "test_attack.json", test_attack);

    // --- plain detector and GAN ---
    DetectorConfig det_cfg;
    det_cfg.max_epochs = config.detector_epochs;
    DetectorModel plain =
        train_detector(train, det_cfg, Rng::derive(sseed, "detector-plain"));
    save_detector(models / "plain.ckpt", plain,
                  {{"config_hash", train.meta.config_hash}});

    GanConfig gan_cfg;
    gan_cfg.iterations = config.gan_iterations;
    std::vector<Sample> benign_samples;
    for (const auto& s : train.samples) {
      if (s.label == 0) benign_samples.push_back(s);
    }
    GanModel gan = train_wgan_gp(benign_samples, gan_cfg, Rng::derive(sseed, "gan"));
    save_gan(models / "gan.ckpt", gan, {{"config_hash", train.meta.config_hash}});

    // --- augmented datasets and hardened detectors ---
    const PerturbationPlan full_plan = PerturbationPlan::all();
    struct Method {
      const char* name;
      LabeledDataset data;
    };
    std::vector<Method> methods;
    methods.push_back(
        {"gadot", gadot_augment(train, full_plan, gan, Rng::derive(sseed, "aug-gadot"))});
    methods.push_back(
        {"bfp", bfp_augment(train, full_plan, Rng::derive(sseed, "aug-bfp"))});
    methods.push_back({"fgsm", fgsm_augment(train, plain, {config.fgsm_epsilon},
                                            Rng::derive(sseed, "aug-fgsm"))});

    std::map<std::string, DetectorModel> hardened;
    for (auto& m : methods) {
      m.data.meta.tool_version = kVersion;
      m.data.meta.config_hash = train.meta.config_hash;
      save_dataset(datasets / (std::string(m.name) + ".json"), m.data);
      hardened[m.name] = train_detector(
          m.data, det_cfg, Rng::derive(sseed, std::string("detector-") + m.name));
      save_detector(models / (std::string(m.name) + ".ckpt"), hardened[m.name],
                    {{"config_hash", train.meta.config_hash}});
    }

    // --- perturbed traces ---
    CaptureFile attack_capture = read_pcap(traces / "test_attack.pcap");
    ExperimentGrid grid;
    grid.benign_pool = test_benign.samples;
    grid.unperturbed_attack = test_attack.samples;
    for (const auto& [name, kinds] : plan.perturbations) {
      PerturbationSpec spec;
      spec.seed = Rng::derive(sseed, "perturb-" + name);
      spec.attackers = attackers;
      spec.victims = victims;
      for (PerturbKind k : kinds) spec.steps.push_back({k, default_params(k)});
      PerturbSummary summary;
      CaptureFile perturbed = perturb_capture(attack_capture, spec, &summary);
      const fs::path out = traces / ("perturbed_" + name + ".pcap");
      write_pcap(out, perturbed);
      write_meta(out, config, spec.seed);
      write_text(traces / ("perturbed_" + name + ".summary.txt"), summary.to_text());

      LabeledDataset pert =
          extract_dataset(out, opts, attackers, victims, &train.profile);
      grid.perturbed_attack.emplace_back(name, std::move(pert.samples));
    }

    // --- evaluate ---
    grid.before = &plain;
    for (const auto& [name, model] : hardened) grid.methods[name] = &model;
    art.grid = run_grid(grid);

    write_text(reports / "grid.csv", render_grid_csv(art.grid));
    write_text(reports / "grid.txt",
               render_grid_text(art.grid, "Perturbed-trace evaluation (" + plan.name +
                                              " scenario)"));
    write_text(reports / "unperturbed.csv", render_unperturbed_csv(art.grid));
    write_text(reports / "unperturbed.txt",
               render_unperturbed_text(
                   art.grid, "Unperturbed test evaluation (" + plan.name + " scenario)"));
    write_meta(reports / "grid.csv", config, sseed);

    results.push_back(std::move(art));
  }

  json manifest{{"tool_version", kVersion},
                {"config", config_to_json(config)},
                {"config_hash", pipeline_config_hash(config)},
                {"scenarios", json::array()}};
  for (const auto& art : results) manifest["scenarios"].push_back(art.name);
  write_text(config.out_dir / "manifest.json", manifest.dump(2) + "\n");
  return results;
}

}  // namespace rampart
