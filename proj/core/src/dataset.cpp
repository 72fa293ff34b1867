#include "rampart/dataset.hpp"

#include <fstream>

#include <json.hpp>

#include "rampart/error.hpp"
#include "rampart/hash.hpp"

namespace rampart {

using nlohmann::json;

size_t LabeledDataset::count_label(int label) const {
  size_t n = 0;
  for (const Sample& s : samples) n += (s.label == label);
  return n;
}

std::vector<size_t> LabeledDataset::indices_of(int label) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].label == label) out.push_back(i);
  }
  return out;
}

void save_dataset(const std::filesystem::path& path, const LabeledDataset& ds) {
  json j;
  j["format"] = "rampart-dataset";
  j["version"] = 1;
  j["metadata"] = {
      {"tool_version", ds.meta.tool_version}, {"config_hash", ds.meta.config_hash},
      {"source", ds.meta.source},             {"method", ds.meta.method},
      {"plan", ds.meta.plan},                 {"seed", ds.meta.seed},
      {"window_seconds", ds.meta.window_seconds},
      {"max_packets", ds.meta.max_packets},   {"eps", ds.meta.eps},
  };
  j["normalized"] = ds.normalized;
  j["normalization"] = {
      {"min", std::vector<double>(ds.profile.min.begin(), ds.profile.min.end())},
      {"max", std::vector<double>(ds.profile.max.begin(), ds.profile.max.end())},
  };
  json samples = json::array();
  for (const Sample& s : ds.samples) {
    json e;
    e["key"] = s.key.str();
    e["window"] = s.window;
    e["flow_length"] = s.flow_length;
    e["label"] = s.label;
    e["provenance"] = provenance_name(s.provenance);
    e["matrix"] = std::vector<double>(s.matrix.begin(), s.matrix.end());
    samples.push_back(std::move(e));
  }
  j["samples"] = std::move(samples);

  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << j.dump() << "\n";
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ParseError("dataset '" + path.string() + "': " + e.what());
  }
  if (j.value("format", "") != "rampart-dataset") {
    throw ParseError("dataset '" + path.string() + "': not a rampart dataset");
  }
  if (j.value("version", 0) != 1) {
    throw ParseError("dataset '" + path.string() + "': unsupported version");
  }
  LabeledDataset ds;
  const json& m = j.at("metadata");
  ds.meta.tool_version = m.value("tool_version", "");
  ds.meta.config_hash = m.value("config_hash", "");
  ds.meta.source = m.value("source", "");
  ds.meta.method = m.value("method", "");
  ds.meta.plan = m.value("plan", "");
  ds.meta.seed = m.value("seed", uint64_t{0});
  ds.meta.window_seconds = m.value("window_seconds", 10.0);
  ds.meta.max_packets = m.value("max_packets", kSampleRows);
  ds.meta.eps = m.value("eps", 0.0);
  ds.normalized = j.value("normalized", false);
  const auto jmin = j.at("normalization").at("min").get<std::vector<double>>();
  const auto jmax = j.at("normalization").at("max").get<std::vector<double>>();
  if (jmin.size() != kSampleCols || jmax.size() != kSampleCols) {
    throw ParseError("dataset '" + path.string() + "': normalization profile must have " +
                     std::to_string(kSampleCols) + " features");
  }
  std::copy(jmin.begin(), jmin.end(), ds.profile.min.begin());
  std::copy(jmax.begin(), jmax.end(), ds.profile.max.begin());
  for (const json& e : j.at("samples")) {
    Sample s;
    s.key = FlowKey::parse(e.at("key").get<std::string>());
    s.window = e.at("window").get<int64_t>();
    s.flow_length = e.at("flow_length").get<int>();
    s.label = e.at("label").get<int>();
    s.provenance = provenance_from_name(e.at("provenance").get<std::string>());
    const auto mat = e.at("matrix").get<std::vector<double>>();
    if (mat.size() != s.matrix.size()) {
      throw ParseError("dataset '" + path.string() + "': sample matrix must have " +
                       std::to_string(s.matrix.size()) + " values");
    }
    std::copy(mat.begin(), mat.end(), s.matrix.begin());
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

std::string dataset_hash(const LabeledDataset& ds) {
  uint64_t h = 1469598103934665603ULL;
  for (const Sample& s : ds.samples) {
    h = fnv1a64(std::span<const uint8_t>(
                    reinterpret_cast<const uint8_t*>(s.matrix.data()),
                    s.matrix.size() * sizeof(double)),
                h);
    const int32_t label = s.label;
    const int32_t fl = s.flow_length;
    h = fnv1a64(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(&label),
                                         sizeof(label)),
                h);
    h = fnv1a64(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(&fl), sizeof(fl)),
                h);
  }
  return hash_hex(h);
}

Tensor samples_to_batch(const std::vector<Sample>& samples) {
  std::vector<size_t> idxs(samples.size());
  for (size_t i = 0; i < idxs.size(); ++i) idxs[i] = i;
  return samples_to_batch(samples, idxs);
}

Tensor samples_to_batch(const std::vector<Sample>& samples,
                        const std::vector<size_t>& idxs) {
  if (idxs.empty()) throw ConfigError("samples_to_batch: empty batch");
  Tensor t({static_cast<int64_t>(idxs.size()), 1, kSampleRows, kSampleCols});
  double* p = t.data();
  for (size_t i = 0; i < idxs.size(); ++i) {
    const Sample& s = samples[idxs[i]];
    std::copy(s.matrix.begin(), s.matrix.end(), p + i * s.matrix.size());
  }
  return t;
}

Tensor labels_to_tensor(const std::vector<Sample>& samples,
                        const std::vector<size_t>& idxs) {
  Tensor t({static_cast<int64_t>(idxs.size()), 1});
  for (size_t i = 0; i < idxs.size(); ++i) {
    const int label = samples[idxs[i]].label;
    if (label < 0) throw ConfigError("labels_to_tensor: unlabeled sample in batch");
    t[static_cast<int64_t>(i)] = label;
  }
  return t;
}

}  // namespace rampart
