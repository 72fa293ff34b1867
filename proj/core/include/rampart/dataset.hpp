#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rampart/flow.hpp"
#include "rampart/tensor.hpp"

namespace rampart {

struct DatasetMeta {
  std::string tool_version;
  std::string config_hash;
  std::string source;   // originating trace or dataset
  std::string method;   // augmentation method, when applicable
  std::string plan;     // comma-joined feature plan, when applicable
  uint64_t seed = 0;
  double window_seconds = 10.0;
  int max_packets = kSampleRows;
  double eps = 0.0;
};

// Samples T with labels Y (stored per sample) plus the normalization profile
// they were produced with.
struct LabeledDataset {
  std::vector<Sample> samples;
  NormalizationProfile profile{};
  bool normalized = false;
  DatasetMeta meta;

  size_t count_label(int label) const;
  std::vector<size_t> indices_of(int label) const;
};

// JSON container, self-describing with a format/version header. Doubles
// round-trip exactly (shortest-representation printing).
void save_dataset(const std::filesystem::path& path, const LabeledDataset& ds);
LabeledDataset load_dataset(const std::filesystem::path& path);

// Content hash over matrices, labels and flow lengths (not provenance), used
// for model metadata and byte-level comparisons.
std::string dataset_hash(const LabeledDataset& ds);

// (N, 1, 10, 11) batch tensor.
Tensor samples_to_batch(const std::vector<Sample>& samples);
Tensor samples_to_batch(const std::vector<Sample>& samples,
                        const std::vector<size_t>& idxs);
// (N, 1) label tensor.
Tensor labels_to_tensor(const std::vector<Sample>& samples,
                        const std::vector<size_t>& idxs);

}  // namespace rampart
