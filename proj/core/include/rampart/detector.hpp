#pragma once

#include <filesystem>
#include <map>
#include <vector>

#include "rampart/autodiff.hpp"
#include "rampart/checkpoint.hpp"
#include "rampart/dataset.hpp"
#include "rampart/nn.hpp"

namespace rampart {

// Compact convolutional binary classifier over 10x11 samples: a bank of
// `kernels` filters spanning all 11 columns with height `kernel_height` plus a
// bank of `row_kernels` height-1 filters (per-packet pattern detectors), each
// ReLU + global max-pooled over rows, then a dense layer to one sigmoid
// output. The height-1 bank lets "some row looks like attack traffic" survive
// perturbations that only pad or reorder the remaining rows.
struct DetectorConfig {
  int kernels = 64;
  int kernel_height = 3;
  int row_kernels = 32;
  double lr = 1e-3;
  int batch_size = 64;
  int max_epochs = 50;
  int patience = 8;          // epochs without val improvement before stopping
  double val_fraction = 0.1;
  double threshold = 0.5;    // score >= threshold classifies as DDoS
};

struct DetectorModel {
  ParamSet params;
  DetectorConfig config;
  uint64_t seed = 0;
  int epochs_trained = 0;
  std::string dataset_hash;
  std::vector<double> loss_history;  // per-epoch mean training loss
};

DetectorModel make_detector(const DetectorConfig& config, uint64_t seed);

// Logits for a (N,1,10,11) input var; shared by training, scoring and FGSM.
ad::Var detector_logits(const DetectorModel& model, const ad::Var& x);

// Binary cross-entropy + Adam, seeded validation split, early stop on
// validation-F1 plateau. epochs==0 returns the freshly initialized model.
DetectorModel train_detector(const LabeledDataset& dataset, const DetectorConfig& config,
                             uint64_t seed);

// Sigmoid scores in [0,1], one per sample; deterministic and batch-invariant.
std::vector<double> detector_scores(const DetectorModel& model,
                                    const std::vector<Sample>& samples);
std::vector<int> detector_classify(const DetectorModel& model,
                                   const std::vector<Sample>& samples,
                                   std::vector<double>* scores_out = nullptr);

void save_detector(const std::filesystem::path& path, const DetectorModel& model,
                   const std::map<std::string, std::string>& extra_meta = {});
DetectorModel load_detector(const std::filesystem::path& path);

}  // namespace rampart
