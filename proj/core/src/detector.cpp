#include "rampart/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rampart/adam.hpp"
#include "rampart/error.hpp"
#include "rampart/metrics.hpp"
#include "rampart/rng.hpp"
#include "rampart/version.hpp"

namespace rampart {

namespace {

struct ValScore {
  double f1 = 0.0;
  double loss = 0.0;
};

ValScore validate(const DetectorModel& model, const std::vector<Sample>& samples,
                  const std::vector<size_t>& idxs) {
  std::vector<Sample> view;
  view.reserve(idxs.size());
  for (size_t i : idxs) view.push_back(samples[i]);
  std::vector<double> scores;
  auto preds = detector_classify(model, view, &scores);
  std::vector<int> labels;
  labels.reserve(idxs.size());
  for (size_t i : idxs) labels.push_back(samples[i].label);
  ValScore v;
  v.f1 = compute_metrics(labels, preds).f1.value_or(0.0);
  double loss = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    const double p = std::clamp(scores[i], 1e-12, 1.0 - 1e-12);
    loss += labels[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
  }
  v.loss = loss / static_cast<double>(std::max<size_t>(1, scores.size()));
  return v;
}

std::vector<Tensor> snapshot(const ParamSet& p) {
  std::vector<Tensor> out;
  for (const auto& v : p.vars()) out.push_back(v.value());
  return out;
}

void restore(ParamSet& p, const std::vector<Tensor>& snap) {
  auto tensors = p.tensors();
  for (size_t i = 0; i < tensors.size(); ++i) *tensors[i] = snap[i];
}

}  // namespace

DetectorModel make_detector(const DetectorConfig& config, uint64_t seed) {
  DetectorModel m;
  m.config = config;
  m.seed = seed;
  Rng rng(Rng::derive(seed, "detector-init"));
  const int64_t k = config.kernels;
  const int64_t kh = config.kernel_height;
  const int64_t r = config.row_kernels;
  m.params.add("conv.w", init_he({k, 1, kh, kSampleCols}, kh * kSampleCols, rng));
  m.params.add("conv.b", Tensor({k}));
  m.params.add("row.w", init_he({r, 1, 1, kSampleCols}, kSampleCols, rng));
  m.params.add("row.b", Tensor({r}));
  m.params.add("fc.w", init_he({k, 1}, k + r, rng));
  m.params.add("fc_row.w", init_he({r, 1}, k + r, rng));
  m.params.add("fc.b", Tensor({1}));
  return m;
}

ad::Var detector_logits(const DetectorModel& model, const ad::Var& x) {
  const auto& v = model.params.vars();
  ad::Var h = ad::conv2d(x, v[0], 0, 0);  // (N, k, 10-kh+1, 1)
  h = ad::relu(ad::bias_add_chan(h, v[1]));
  ad::Var rows = ad::conv2d(x, v[2], 0, 0);  // (N, r, 10, 1)
  rows = ad::relu(ad::bias_add_chan(rows, v[3]));
  // concat-then-dense expressed as a sum of two dense heads
  ad::Var logits = ad::add(ad::matmul(ad::global_max_pool(h), v[4]),
                           ad::matmul(ad::global_max_pool(rows), v[5]));
  return ad::bias_add_cols(logits, v[6]);  // (N, 1)
}

DetectorModel train_detector(const LabeledDataset& dataset, const DetectorConfig& config,
                             uint64_t seed) {
  const size_t n0 = dataset.count_label(0);
  const size_t n1 = dataset.count_label(1);
  if (dataset.samples.empty() || n0 == 0 || n1 == 0) {
    throw ConfigError("train_detector: need a non-empty dataset with both classes");
  }
  DetectorModel model = make_detector(config, seed);
  model.dataset_hash = dataset_hash(dataset);
  if (config.max_epochs == 0) return model;

  Rng rng(Rng::derive(seed, "detector-train"));
  std::vector<size_t> idxs(dataset.samples.size());
  for (size_t i = 0; i < idxs.size(); ++i) idxs[i] = i;
  rng.shuffle(idxs);
  size_t n_val = static_cast<size_t>(static_cast<double>(idxs.size()) * config.val_fraction);
  n_val = std::min(n_val, idxs.size() - 1);
  const std::vector<size_t> val_idx(idxs.begin(), idxs.begin() + static_cast<long>(n_val));
  std::vector<size_t> train_idx(idxs.begin() + static_cast<long>(n_val), idxs.end());

  Adam opt({.lr = config.lr});
  double best_f1 = -1.0;
  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<Tensor> best = snapshot(model.params);
  int best_epoch = 0;
  int stale = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(train_idx);
    double loss_sum = 0.0;
    size_t batches = 0;
    for (size_t off = 0; off < train_idx.size(); off += static_cast<size_t>(config.batch_size)) {
      const size_t end = std::min(train_idx.size(), off + static_cast<size_t>(config.batch_size));
      const std::vector<size_t> batch(train_idx.begin() + static_cast<long>(off),
                                      train_idx.begin() + static_cast<long>(end));
      ad::Var x = ad::constant(samples_to_batch(dataset.samples, batch));
      ad::Var logits = detector_logits(model, x);
      ad::Var loss = bce_with_logits(logits, labels_to_tensor(dataset.samples, batch));
      auto grads = ad::gradients(loss, model.params.vars());
      std::vector<Tensor> grad_values;
      grad_values.reserve(grads.size());
      for (const auto& g : grads) grad_values.push_back(g.value());
      opt.step(model.params.tensors(), grad_values);
      if (!model.params.all_finite()) {
        throw Error("train_detector: non-finite parameters at epoch " +
                    std::to_string(epoch));
      }
      loss_sum += loss.value().item();
      ++batches;
    }
    model.loss_history.push_back(loss_sum / static_cast<double>(std::max<size_t>(1, batches)));
    model.epochs_trained = epoch;

    if (!val_idx.empty()) {
      // Plateau rule: a higher F1 always counts as progress; at equal F1
      // (e.g. saturated at 1.0) a clearly lower validation loss still counts,
      // so adversarial variants keep consolidating.
      const ValScore v = validate(model, dataset.samples, val_idx);
      const bool better = v.f1 > best_f1 + 1e-9 ||
                          (v.f1 >= best_f1 - 1e-9 && v.loss < best_loss - 1e-6);
      if (better) {
        best_f1 = std::max(best_f1, v.f1);
        best_loss = v.loss;
        best = snapshot(model.params);
        best_epoch = epoch;
        stale = 0;
      } else if (++stale >= config.patience) {
        restore(model.params, best);
        model.epochs_trained = best_epoch;
        break;
      }
    }
  }
  if (!val_idx.empty() && best_f1 >= 0.0) {
    restore(model.params, best);
    if (best_epoch > 0) model.epochs_trained = best_epoch;
  }
  return model;
}

std::vector<double> detector_scores(const DetectorModel& model,
                                    const std::vector<Sample>& samples) {
  std::vector<double> scores;
  scores.reserve(samples.size());
  constexpr size_t kChunk = 256;
  for (size_t off = 0; off < samples.size(); off += kChunk) {
    const size_t end = std::min(samples.size(), off + kChunk);
    std::vector<size_t> idxs;
    idxs.reserve(end - off);
    for (size_t i = off; i < end; ++i) idxs.push_back(i);
    ad::Var x = ad::constant(samples_to_batch(samples, idxs));
    ad::Var s = ad::sigmoid(detector_logits(model, x));
    for (int64_t i = 0; i < s.value().numel(); ++i) scores.push_back(s.value()[i]);
  }
  return scores;
}

std::vector<int> detector_classify(const DetectorModel& model,
                                   const std::vector<Sample>& samples,
                                   std::vector<double>* scores_out) {
  auto scores = detector_scores(model, samples);
  std::vector<int> labels;
  labels.reserve(scores.size());
  for (double s : scores) labels.push_back(s >= model.config.threshold ? 1 : 0);
  if (scores_out) *scores_out = std::move(scores);
  return labels;
}

void save_detector(const std::filesystem::path& path, const DetectorModel& model,
                   const std::map<std::string, std::string>& extra_meta) {
  Checkpoint ckpt = checkpoint_from_params(model.params);
  ckpt.metadata["kind"] = "detector";
  ckpt.metadata["tool_version"] = kVersion;
  ckpt.metadata["kernels"] = std::to_string(model.config.kernels);
  ckpt.metadata["kernel_height"] = std::to_string(model.config.kernel_height);
  ckpt.metadata["row_kernels"] = std::to_string(model.config.row_kernels);
  ckpt.metadata["threshold"] = std::to_string(model.config.threshold);
  ckpt.metadata["seed"] = std::to_string(model.seed);
  ckpt.metadata["epochs_trained"] = std::to_string(model.epochs_trained);
  ckpt.metadata["dataset_hash"] = model.dataset_hash;
  for (const auto& [k, v] : extra_meta) ckpt.metadata[k] = v;
  save_checkpoint(path, ckpt);
}

DetectorModel load_detector(const std::filesystem::path& path) {
  Checkpoint ckpt = load_checkpoint(path);
  if (ckpt.metadata.count("kind") && ckpt.metadata.at("kind") != "detector") {
    throw ConfigError("'" + path.string() + "' is not a detector checkpoint");
  }
  DetectorConfig config;
  config.kernels = std::stoi(ckpt.metadata.at("kernels"));
  config.kernel_height = std::stoi(ckpt.metadata.at("kernel_height"));
  config.row_kernels = std::stoi(ckpt.metadata.at("row_kernels"));
  config.threshold = std::stod(ckpt.metadata.at("threshold"));
  DetectorModel model = make_detector(config, std::stoull(ckpt.metadata.at("seed")));
  params_from_checkpoint(ckpt, model.params);
  model.epochs_trained = std::stoi(ckpt.metadata.at("epochs_trained"));
  model.dataset_hash = ckpt.metadata.at("dataset_hash");
  return model;
}

}  // namespace rampart
