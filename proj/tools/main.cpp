#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rampart/augment.hpp"
#include "rampart/detector.hpp"
#include "rampart/error.hpp"
#include "rampart/evalgrid.hpp"
#include "rampart/gan.hpp"
#include "rampart/hash.hpp"
#include "rampart/pipeline.hpp"
#include "rampart/version.hpp"

using namespace rampart;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

void require_input(const fs::path& path) {
  if (!fs::exists(path)) {
    throw ConfigError("input file not found: '" + path.string() + "'");
  }
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= csv.size()) {
    size_t next = csv.find(',', pos);
    if (next == std::string::npos) next = csv.size();
    if (next > pos) out.push_back(csv.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

std::string args_hash(const std::vector<std::string>& parts) {
  uint64_t h = 1469598103934665603ULL;
  for (const auto& p : parts) h = fnv1a64(p, h);
  return hash_hex(h);
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
}

// Provenance sidecar for artifacts whose format cannot embed metadata.
void write_meta_sidecar(const fs::path& for_path, const std::string& config_hash,
                        uint64_t seed) {
  json j{{"tool_version", kVersion}, {"config_hash", config_hash}, {"seed", seed}};
  write_text_file(fs::path(for_path.string() + ".meta.json"), j.dump(2) + "\n");
}

// ---- synth ----

struct SynthArgs {
  std::string scenario_file;
  std::string out = "trace.pcap";
  std::string mode = "all";  // all | benign | attack
  int64_t seed = -1;
  double duration = -1.0;
  std::string attack_kind;
  double attack_rate = -1.0;
};

int cmd_synth(const SynthArgs& a) {
  TrafficScenario sc;
  if (!a.scenario_file.empty()) {
    require_input(a.scenario_file);
    sc = scenario_from_json_file(a.scenario_file);
  }
  if (a.seed >= 0) sc.seed = static_cast<uint64_t>(a.seed);
  if (a.duration >= 0) sc.duration_s = a.duration;
  if (!a.attack_kind.empty()) {
    if (a.attack_kind == "none") sc.attack.kind = AttackSpec::Kind::kNone;
    else if (a.attack_kind == "syn_flood") sc.attack.kind = AttackSpec::Kind::kSynFlood;
    else if (a.attack_kind == "http_get_flood")
      sc.attack.kind = AttackSpec::Kind::kHttpGetFlood;
    else throw ConfigError("unknown attack kind '" + a.attack_kind + "'");
  }
  if (a.attack_rate > 0) sc.attack.rate = a.attack_rate;

  CaptureFile cap;
  if (a.mode == "all") {
    cap = synth_scenario(sc);
  } else if (a.mode == "benign") {
    cap = synth_benign(sc);
  } else if (a.mode == "attack") {
    if (sc.attack.kind == AttackSpec::Kind::kSynFlood) cap = synth_syn_flood(sc);
    else if (sc.attack.kind == AttackSpec::Kind::kHttpGetFlood) cap = synth_http_flood(sc);
    else throw ConfigError("--mode attack requires an attack kind");
  } else {
    throw ConfigError("unknown --mode '" + a.mode + "'");
  }
  write_pcap(a.out, cap);
  write_meta_sidecar(a.out,
                     args_hash({a.scenario_file, a.mode, std::to_string(sc.duration_s),
                                std::to_string(sc.attack.rate)}),
                     sc.seed);
  std::cout << "wrote " << cap.frames.size() << " packets to " << a.out << "\n";
  return kExitOk;
}

// ---- extract ----

struct ExtractArgs {
  std::string in;
  std::string out = "dataset.json";
  double window = 10.0;
  int max_packets = kSampleRows;
  std::string profile_from;
  std::string attackers;
  std::string victims;
  int64_t seed = 0;
};

int cmd_extract(const ExtractArgs& a) {
  require_input(a.in);
  NormalizationProfile profile;
  bool have_profile = false;
  if (!a.profile_from.empty()) {
    require_input(a.profile_from);
    profile = load_dataset(a.profile_from).profile;
    have_profile = true;
  }
  IpSet attackers, victims;
  if (!a.attackers.empty()) attackers = IpSet::parse(split_list(a.attackers));
  if (!a.victims.empty()) victims = IpSet::parse(split_list(a.victims));

  DecodeStats stats;
  LabeledDataset ds =
      extract_dataset(a.in, {a.window, a.max_packets}, attackers, victims,
                      have_profile ? &profile : nullptr, &stats);
  ds.meta.seed = static_cast<uint64_t>(a.seed);
  ds.meta.config_hash = args_hash({a.in, std::to_string(a.window),
                                   std::to_string(a.max_packets), a.attackers, a.victims});
  save_dataset(a.out, ds);
  std::cout << "extracted " << ds.samples.size() << " samples (benign "
            << ds.count_label(0) << ", ddos " << ds.count_label(1) << ", unlabeled "
            << ds.count_label(-1) << "); skipped " << stats.non_ip << " non-IP, "
            << stats.ipv6 << " IPv6 frames -> " << a.out << "\n";
  return kExitOk;
}

// ---- train-gan ----

struct TrainGanArgs {
  std::string data;
  std::string out = "gan.ckpt";
  int iters = 1500;
  int batch = 32;
  int critic_steps = 5;
  double lambda = 10.0;
  double lr = 1e-3;
  uint64_t seed = 1;
};

int cmd_train_gan(const TrainGanArgs& a) {
  require_input(a.data);
  LabeledDataset ds = load_dataset(a.data);
  std::vector<Sample> benign;
  for (const auto& s : ds.samples) {
    if (s.label == 0) benign.push_back(s);
  }
  GanConfig cfg;
  cfg.iterations = a.iters;
  cfg.batch_size = a.batch;
  cfg.critic_steps = a.critic_steps;
  cfg.gp_lambda = a.lambda;
  cfg.lr = a.lr;
  GanModel model = train_wgan_gp(benign, cfg, a.seed);
  save_gan(a.out, model,
           {{"config_hash", args_hash({a.data, std::to_string(a.iters),
                                       std::to_string(a.seed)})}});
  double final_w = model.history.empty() ? 0.0 : model.history.back().wasserstein;
  std::cout << "trained gan on " << benign.size() << " benign samples, " << a.iters
            << " iterations (final W estimate " << final_w << ") -> " << a.out << "\n";
  return kExitOk;
}

// ---- augment ----

struct AugmentArgs {
  std::string data;
  std::string method;
  std::string plan = "all";
  std::string gan;
  std::string model;
  double eps = 0.1;
  uint64_t seed = 1;
  std::string out = "augmented.json";
};

int cmd_augment(const AugmentArgs& a) {
  require_input(a.data);
  LabeledDataset T = load_dataset(a.data);
  PerturbationPlan plan = PerturbationPlan::parse(a.plan);
  LabeledDataset out;
  if (a.method == "gadot") {
    if (a.gan.empty()) throw ConfigError("--method gadot requires --gan");
    require_input(a.gan);
    out = gadot_augment(T, plan, load_gan(a.gan), a.seed);
  } else if (a.method == "bfp") {
    out = bfp_augment(T, plan, a.seed);
  } else if (a.method == "fgsm") {
    if (a.model.empty()) throw ConfigError("--method fgsm requires --model");
    require_input(a.model);
    out = fgsm_augment(T, load_detector(a.model), {a.eps}, a.seed);
  } else {
    throw ConfigError("unknown method '" + a.method + "' (gadot|bfp|fgsm)");
  }
  out.meta.tool_version = kVersion;
  out.meta.config_hash = args_hash({a.data, a.method, a.plan, std::to_string(a.seed)});
  save_dataset(a.out, out);
  std::cout << "augmented " << T.samples.size() << " -> " << out.samples.size()
            << " samples (" << a.method << ") -> " << a.out << "\n";
  return kExitOk;
}

// ---- train ----

struct TrainArgs {
  std::string data;
  std::string out = "detector.ckpt";
  int epochs = 50;
  int batch = 64;
  double lr = 1e-3;
  uint64_t seed = 1;
};

int cmd_train(const TrainArgs& a) {
  require_input(a.data);
  LabeledDataset ds = load_dataset(a.data);
  DetectorConfig cfg;
  cfg.max_epochs = a.epochs;
  cfg.batch_size = a.batch;
  cfg.lr = a.lr;
  DetectorModel model = train_detector(ds, cfg, a.seed);
  save_detector(a.out, model,
                {{"config_hash",
                  args_hash({a.data, std::to_string(a.epochs), std::to_string(a.seed)})}});
  double last = model.loss_history.empty() ? 0.0 : model.loss_history.back();
  std::cout << "trained detector for " << model.epochs_trained
            << " epochs (final loss " << last << ") -> " << a.out << "\n";
  return kExitOk;
}

// ---- classify ----

struct ClassifyArgs {
  std::string model;
  std::string data;
  std::string out = "scores.csv";
};

int cmd_classify(const ClassifyArgs& a) {
  require_input(a.model);
  require_input(a.data);
  DetectorModel model = load_detector(a.model);
  LabeledDataset ds = load_dataset(a.data);
  std::vector<double> scores;
  auto preds = detector_classify(model, ds.samples, &scores);
  std::string csv = "index,score,prediction,label\n";
  char buf[64];
  for (size_t i = 0; i < scores.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.6f,%d,%d\n", i, scores[i], preds[i],
                  ds.samples[i].label);
    csv += buf;
  }
  write_text_file(a.out, csv);
  write_meta_sidecar(a.out, args_hash({a.model, a.data}), 0);
  std::cout << "classified " << scores.size() << " samples -> " << a.out << "\n";
  return kExitOk;
}

// ---- perturb ----

struct PerturbArgs {
  std::string in;
  std::string out;
  std::string spec;
  int64_t seed = -1;
};

int cmd_perturb(const PerturbArgs& a) {
  require_input(a.in);
  require_input(a.spec);
  PerturbationSpec spec = perturb_spec_from_json_file(a.spec);
  if (a.seed >= 0) spec.seed = static_cast<uint64_t>(a.seed);
  CaptureFile cap = read_pcap(a.in);
  PerturbSummary summary;
  CaptureFile out = perturb_capture(cap, spec, &summary);
  write_pcap(a.out, out);
  write_meta_sidecar(a.out, args_hash({a.in, a.spec}), spec.seed);
  std::cout << summary.to_text();
  std::cout << "wrote " << out.frames.size() << " packets to " << a.out << "\n";
  return kExitOk;
}

// ---- evaluate ----

struct EvaluateArgs {
  std::string config;
  std::string out_dir = "reports";
};

int cmd_evaluate(const EvaluateArgs& a) {
  require_input(a.config);
  std::ifstream f(a.config);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ParseError("evaluate config '" + a.config + "': " + e.what());
  }
  const ExtractOptions opts{j.value("window_seconds", 10.0),
                            j.value("max_packets", kSampleRows)};
  const IpSet attackers = IpSet::parse(j.at("attackers").get<std::vector<std::string>>());
  const IpSet victims = IpSet::parse(j.at("victims").get<std::vector<std::string>>());

  auto need = [&](const std::string& cell, const std::string& path) {
    if (!fs::exists(path)) {
      throw ConfigError("grid cell '" + cell + "': missing artifact '" + path + "'");
    }
    return path;
  };

  NormalizationProfile profile =
      load_dataset(need("profile", j.at("profile_from").get<std::string>())).profile;

  ExperimentGrid grid;
  grid.benign_pool =
      load_dataset(need("benign_pool", j.at("benign_pool").get<std::string>())).samples;
  grid.unperturbed_attack =
      extract_dataset(need("unperturbed", j.at("unperturbed_trace").get<std::string>()),
                      opts, attackers, victims, &profile)
          .samples;
  for (const auto& [name, path] : j.at("perturbed_traces").items()) {
    grid.perturbed_attack.emplace_back(
        name, extract_dataset(need(name, path.get<std::string>()), opts, attackers,
                              victims, &profile)
                  .samples);
  }

  DetectorModel before =
      load_detector(need("before", j.at("models").at("before").get<std::string>()));
  std::map<std::string, DetectorModel> models;
  for (const auto& m : kGridMethods) {
    models[m] = load_detector(need(m, j.at("models").at(m).get<std::string>()));
  }
  grid.before = &before;
  for (const auto& m : kGridMethods) grid.methods[m] = &models[m];

  GridResult result = run_grid(grid);
  fs::create_directories(a.out_dir);
  const std::string title = j.value("title", std::string("Perturbed-trace evaluation"));
  write_text_file(fs::path(a.out_dir) / "grid.csv", render_grid_csv(result));
  write_text_file(fs::path(a.out_dir) / "grid.txt", render_grid_text(result, title));
  write_text_file(fs::path(a.out_dir) / "unperturbed.csv",
                  render_unperturbed_csv(result));
  write_text_file(fs::path(a.out_dir) / "unperturbed.txt",
                  render_unperturbed_text(result, title + " (unperturbed)"));
  write_meta_sidecar(fs::path(a.out_dir) / "grid.csv", args_hash({a.config}), 0);
  std::cout << render_grid_text(result, title);
  return kExitOk;
}

// ---- reproduce ----

struct ReproduceArgs {
  uint64_t seed = 7;
  std::string scale = "desk";
  std::string out_dir = "runs/desk";
  std::string config;
  int gan_iters = -1;
  int detector_epochs = -1;
};

int cmd_reproduce(const ReproduceArgs& a) {
  PipelineConfig cfg;
  if (!a.config.empty()) {
    require_input(a.config);
    cfg = pipeline_config_from_json_file(a.config);
  }
  cfg.seed = a.seed;
  cfg.scale = a.scale;
  cfg.out_dir = a.out_dir;
  if (a.gan_iters > 0) cfg.gan_iterations = a.gan_iters;
  if (a.detector_epochs > 0) cfg.detector_epochs = a.detector_epochs;
  if (cfg.scale != "desk") {
    throw ConfigError("unknown scale '" + cfg.scale + "' (desk is the supported scale)");
  }
  auto results = run_reproduce(cfg);
  for (const auto& art : results) {
    std::cout << "scenario " << art.name << ": reports under "
              << (art.dir / "reports").string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial-training workbench for flow-based DDoS detectors"};
  app.set_version_flag("--version", std::string(kVersion));
  bool deterministic = false;
  app.add_flag("--deterministic", deterministic,
               "Force single-threaded numeric paths (the default; reserved)");
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic traffic capture");
  synth->add_option("--scenario", synth_args.scenario_file, "Scenario JSON file");
  synth->add_option("--out", synth_args.out, "Output pcap path");
  synth->add_option("--mode", synth_args.mode, "all | benign | attack");
  synth->add_option("--seed", synth_args.seed, "Override scenario seed");
  synth->add_option("--duration", synth_args.duration, "Override duration (s)");
  synth->add_option("--attack-kind", synth_args.attack_kind,
                    "none | syn_flood | http_get_flood");
  synth->add_option("--attack-rate", synth_args.attack_rate, "Override attack rate");

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand("extract", "Extract flow samples from a capture");
  extract->add_option("--in", extract_args.in, "Input pcap")->required();
  extract->add_option("--out", extract_args.out, "Output dataset JSON");
  extract->add_option("--window", extract_args.window, "Time window length (s)");
  extract->add_option("--max-packets", extract_args.max_packets, "Packets per sample");
  extract->add_option("--profile-from", extract_args.profile_from,
                      "Apply the normalization profile of this dataset");
  extract->add_option("--attackers", extract_args.attackers,
                      "Comma-separated attacker IPs/CIDRs for labeling");
  extract->add_option("--victims", extract_args.victims,
                      "Comma-separated victim IPs/CIDRs for labeling");
  extract->add_option("--seed", extract_args.seed, "Seed recorded in metadata");

  TrainGanArgs gan_args;
  auto* tgan = app.add_subcommand("train-gan", "Train the WGAN-GP on benign samples");
  tgan->add_option("--data", gan_args.data, "Training dataset JSON")->required();
  tgan->add_option("--out", gan_args.out, "Output checkpoint");
  tgan->add_option("--iters", gan_args.iters, "Training iterations");
  tgan->add_option("--batch", gan_args.batch, "Batch size");
  tgan->add_option("--critic-steps", gan_args.critic_steps, "Critic steps per iteration");
  tgan->add_option("--lambda", gan_args.lambda, "Gradient penalty coefficient");
  tgan->add_option("--lr", gan_args.lr, "Adam learning rate");
  tgan->add_option("--seed", gan_args.seed, "Seed");

  AugmentArgs augment_args;
  auto* augment = app.add_subcommand("augment", "Build an adversarial training dataset");
  augment->add_option("--data", augment_args.data, "Input dataset JSON")->required();
  augment->add_option("--method", augment_args.method, "gadot | bfp | fgsm")->required();
  augment->add_option("--plan", augment_args.plan, "Comma-separated features or 'all'");
  augment->add_option("--gan", augment_args.gan, "GAN checkpoint (gadot)");
  augment->add_option("--model", augment_args.model, "Detector checkpoint (fgsm)");
  augment->add_option("--eps", augment_args.eps, "FGSM l-inf budget");
  augment->add_option("--seed", augment_args.seed, "Seed");
  augment->add_option("--out", augment_args.out, "Output dataset JSON");

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train the detector");
  train->add_option("--data", train_args.data, "Training dataset JSON")->required();
  train->add_option("--out", train_args.out, "Output checkpoint");
  train->add_option("--epochs", train_args.epochs, "Max epochs");
  train->add_option("--batch", train_args.batch, "Batch size");
  train->add_option("--lr", train_args.lr, "Adam learning rate");
  train->add_option("--seed", train_args.seed, "Seed");

  ClassifyArgs classify_args;
  auto* classify = app.add_subcommand("classify", "Score samples with a detector");
  classify->add_option("--model", classify_args.model, "Detector checkpoint")->required();
  classify->add_option("--data", classify_args.data, "Dataset JSON")->required();
  classify->add_option("--out", classify_args.out, "Output scores CSV");

  PerturbArgs perturb_args;
  auto* perturb = app.add_subcommand("perturb", "Rewrite attack packets of a capture");
  perturb->add_option("--in", perturb_args.in, "Input pcap")->required();
  perturb->add_option("--out", perturb_args.out, "Output pcap")->required();
  perturb->add_option("--spec", perturb_args.spec, "Perturbation spec JSON")->required();
  perturb->add_option("--seed", perturb_args.seed, "Override spec seed");

  EvaluateArgs evaluate_args;
  auto* evaluate = app.add_subcommand("evaluate", "Run the before/after metric grid");
  evaluate->add_option("--config", evaluate_args.config, "Grid config JSON")->required();
  evaluate->add_option("--out-dir", evaluate_args.out_dir, "Report directory");

  ReproduceArgs reproduce_args;
  auto* reproduce =
      app.add_subcommand("reproduce", "Run the full desk-scale experiment end to end");
  reproduce->add_option("--seed", reproduce_args.seed, "Master seed");
  reproduce->add_option("--scale", reproduce_args.scale, "Experiment scale (desk)");
  reproduce->add_option("--out-dir", reproduce_args.out_dir, "Output directory");
  reproduce->add_option("--config", reproduce_args.config, "Pipeline config JSON");
  reproduce->add_option("--gan-iters", reproduce_args.gan_iters, "Override GAN iterations");
  reproduce->add_option("--detector-epochs", reproduce_args.detector_epochs,
                        "Override detector epochs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synth) return cmd_synth(synth_args);
    if (*extract) return cmd_extract(extract_args);
    if (*tgan) return cmd_train_gan(gan_args);
    if (*augment) return cmd_augment(augment_args);
    if (*train) return cmd_train(train_args);
    if (*classify) return cmd_classify(classify_args);
    if (*perturb) return cmd_perturb(perturb_args);
    if (*evaluate) return cmd_evaluate(evaluate_args);
    if (*reproduce) return cmd_reproduce(reproduce_args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
