#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rampart/dataset.hpp"
#include "rampart/evalgrid.hpp"
#include "rampart/perturb.hpp"
#include "rampart/synth.hpp"

namespace rampart {

// Desk-scale end-to-end run: for each scenario (SYN flood, HTTP GET flood)
// synthesize traces, extract and label datasets, train the plain detector and
// the WGAN-GP, build the three augmented datasets, train the hardened
// detectors, rewrite the attack test trace once per perturbation, and evaluate
// the whole grid against a fixed benign test pool.
struct PipelineConfig {
  uint64_t seed = 7;
  std::string scale = "desk";
  std::filesystem::path out_dir = "runs/desk";
  double train_duration_s = 50.0;
  double test_duration_s = 30.0;
  double syn_rate = 20.0;         // SYN packets/s in the SYN scenario
  double http_rate = 6.0;         // flood flows/s in the HTTP scenario
  int gan_iterations = 1500;
  int detector_epochs = 50;
  double fgsm_epsilon = 0.1;
  double window_seconds = 10.0;
  int max_packets = kSampleRows;
  bool deterministic = true;      // single-threaded numeric paths
};

PipelineConfig pipeline_config_from_json_file(const std::string& path);
std::string pipeline_config_hash(const PipelineConfig& config);

// Extraction helper shared by the CLI and the pipeline: parse + window +
// label + normalize (fit on train, apply elsewhere).
LabeledDataset extract_dataset(const std::filesystem::path& pcap_path,
                               const ExtractOptions& options, const IpSet& attackers,
                               const IpSet& victims,
                               const NormalizationProfile* apply_profile,
                               DecodeStats* stats = nullptr);

// The per-scenario perturbation grids (names and step lists).
std::vector<std::pair<std::string, std::vector<PerturbKind>>> syn_perturbations();
std::vector<std::pair<std::string, std::vector<PerturbKind>>> http_perturbations();

struct ScenarioArtifacts {
  std::string name;  // "syn" or "http"
  std::filesystem::path dir;
  GridResult grid;
};

// Runs everything under config.out_dir; returns the per-scenario results.
std::vector<ScenarioArtifacts> run_reproduce(const PipelineConfig& config);

}  // namespace rampart
