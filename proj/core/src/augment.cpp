#include "rampart/augment.hpp"

#include <algorithm>
#include <cmath>

#include "rampart/error.hpp"
#include "rampart/rng.hpp"

namespace rampart {

namespace {

void require_labeled(const LabeledDataset& T, const char* who) {
  for (const Sample& s : T.samples) {
    if (s.label != 0 && s.label != 1) {
      throw ConfigError(std::string(who) + ": dataset contains unlabeled samples");
    }
  }
}

// Applies one donor to one DDoS sample for feature f.
void apply_donor(Sample& s, const double* donor_matrix, int f) {
  if (f == kFeatFlowLength) {
    for (int r = s.flow_length; r < kSampleRows; ++r) {
      for (int c = 0; c < kSampleCols; ++c) {
        s.at(r, c) = donor_matrix[r * kSampleCols + c];
      }
    }
  } else {
    for (int r = 0; r < s.flow_length; ++r) {
      s.at(r, f) = donor_matrix[r * kSampleCols + f];
    }
  }
  s.flow_length = s.nonzero_rows();
}

// Shared core of the GAN-donor and benign-donor paths. `donor_for` hands out
// the matrix for the j-th DDoS sample under plan index i.
template <typename DonorFn>
LabeledDataset augment_with_donors(const LabeledDataset& T, const PerturbationPlan& plan,
                                   Provenance tag, uint64_t seed, DonorFn&& donor_for) {
  LabeledDataset out = T;
  for (size_t pi = 0; pi < plan.features.size(); ++pi) {
    const int f = plan.features[pi];
    std::vector<Sample> copy = T.samples;
    size_t d = 0;
    for (Sample& s : copy) {
      if (s.label == 1) {
        apply_donor(s, donor_for(pi, d), f);
        s.provenance = tag;
        ++d;
      } else {
        s.provenance = Provenance::kDuplicateBenign;
      }
    }
    out.samples.insert(out.samples.end(), copy.begin(), copy.end());
  }
  balance_dataset(out, Rng::derive(seed, "balance"));
  return out;
}

}  // namespace

PerturbationPlan PerturbationPlan::all() {
  PerturbationPlan p;
  for (int f = 0; f < static_cast<int>(kFeatureNames.size()); ++f) p.features.push_back(f);
  return p;
}

PerturbationPlan PerturbationPlan::parse(const std::string& comma_list) {
  if (comma_list == "all") return all();
  PerturbationPlan p;
  size_t pos = 0;
  while (pos <= comma_list.size()) {
    size_t next = comma_list.find(',', pos);
    if (next == std::string::npos) next = comma_list.size();
    const std::string tok = comma_list.substr(pos, next - pos);
    if (!tok.empty()) p.features.push_back(feature_from_name(tok));
    pos = next + 1;
  }
  if (p.features.empty()) {
    throw ConfigError("perturbation plan: no features listed");
  }
  for (size_t i = 0; i < p.features.size(); ++i) {
    for (size_t j = i + 1; j < p.features.size(); ++j) {
      if (p.features[i] == p.features[j]) {
        throw ConfigError(std::string("perturbation plan: duplicate feature '") +
                          kFeatureNames[static_cast<size_t>(p.features[i])] + "'");
      }
    }
  }
  return p;
}

std::string PerturbationPlan::str() const {
  std::string out;
  for (size_t i = 0; i < features.size(); ++i) {
    if (i) out += ",";
    out += kFeatureNames[static_cast<size_t>(features[i])];
  }
  return out;
}

LabeledDataset gadot_augment(const LabeledDataset& T, const PerturbationPlan& plan,
                             const GanModel& gan, uint64_t seed) {
  require_labeled(T, "gadot_augment");
  if (plan.features.empty()) throw ConfigError("gadot_augment: empty plan");
  const size_t n_ddos = T.count_label(1);

  // One fresh noise draw per plan feature; exactly as many donors as DDoS
  // samples. Generation never reads detector state, so the output is a pure
  // function of (T, plan, gan, seed).
  std::vector<Tensor> donors;
  donors.reserve(plan.features.size());
  for (size_t pi = 0; pi < plan.features.size(); ++pi) {
    donors.push_back(generate(gan, std::max<size_t>(n_ddos, 1),
                              Rng::derive(seed, "donor", pi)));
  }
  const int64_t per = kSampleRows * kSampleCols;
  auto out = augment_with_donors(
      T, plan, Provenance::kGadot, seed,
      [&](size_t pi, size_t j) { return donors[pi].data() + static_cast<int64_t>(j) * per; });
  out.meta.method = "gadot";
  out.meta.plan = plan.str();
  out.meta.seed = seed;
  return out;
}

LabeledDataset bfp_augment(const LabeledDataset& T, const PerturbationPlan& plan,
                           uint64_t seed) {
  require_labeled(T, "bfp_augment");
  if (plan.features.empty()) throw ConfigError("bfp_augment: empty plan");
  const auto benign_idx = T.indices_of(0);
  if (benign_idx.empty()) throw ConfigError("bfp_augment: no benign samples to draw from");
  const size_t n_ddos = T.count_label(1);

  // Pre-draw the donor index streams so donor j under plan index pi is fixed.
  std::vector<std::vector<size_t>> picks(plan.features.size());
  for (size_t pi = 0; pi < plan.features.size(); ++pi) {
    Rng rng(Rng::derive(seed, "donor", pi));
    picks[pi].reserve(n_ddos);
    for (size_t j = 0; j < n_ddos; ++j) {
      picks[pi].push_back(benign_idx[static_cast<size_t>(
          rng.uniform_int(0, static_cast<int64_t>(benign_idx.size()) - 1))]);
    }
  }
  auto out = augment_with_donors(T, plan, Provenance::kBfp, seed,
                                 [&](size_t pi, size_t j) {
                                   return T.samples[picks[pi][j]].matrix.data();
                                 });
  out.meta.method = "bfp";
  out.meta.plan = plan.str();
  out.meta.seed = seed;
  return out;
}

LabeledDataset fgsm_augment(const LabeledDataset& T, const DetectorModel& model,
                            const FgsmConfig& config, uint64_t seed) {
  require_labeled(T, "fgsm_augment");
  if (config.epsilon < 0.0) throw ConfigError("fgsm_augment: epsilon must be >= 0");

  LabeledDataset out = T;
  const auto ddos_idx = T.indices_of(1);
  constexpr size_t kChunk = 256;
  for (size_t off = 0; off < ddos_idx.size(); off += kChunk) {
    const size_t end = std::min(ddos_idx.size(), off + kChunk);
    const std::vector<size_t> batch(ddos_idx.begin() + static_cast<long>(off),
                                    ddos_idx.begin() + static_cast<long>(end));
    ad::Var x = ad::leaf(samples_to_batch(T.samples, batch), true);
    ad::Var logits = detector_logits(model, x);
    Tensor toward_benign({static_cast<int64_t>(batch.size()), 1});
    for (int64_t i = 0; i < toward_benign.numel(); ++i) toward_benign[i] = 1.0;
    ad::Var loss = bce_with_logits(logits, toward_benign);
    std::vector<ad::Var> wrt{x};
    Tensor g = ad::gradients(loss, wrt)[0].value();

    const int64_t per = kSampleRows * kSampleCols;
    for (size_t b = 0; b < batch.size(); ++b) {
      Sample adv = T.samples[batch[b]];
      for (int64_t i = 0; i < per; ++i) {
        const double gv = g[static_cast<int64_t>(b) * per + i];
        const double step = gv > 0.0 ? config.epsilon : (gv < 0.0 ? -config.epsilon : 0.0);
        double v = adv.matrix[static_cast<size_t>(i)] + step;
        adv.matrix[static_cast<size_t>(i)] = std::clamp(v, 0.0, 1.0);
      }
      adv.flow_length = adv.nonzero_rows();
      adv.provenance = Provenance::kFgsm;
      out.samples.push_back(std::move(adv));
    }
  }
  balance_dataset(out, Rng::derive(seed, "balance"));
  out.meta.method = "fgsm";
  out.meta.eps = config.epsilon;
  out.meta.seed = seed;
  return out;
}

void balance_dataset(LabeledDataset& ds, uint64_t seed) {
  require_labeled(ds, "balance_dataset");
  const size_t n0 = ds.count_label(0);
  const size_t n1 = ds.count_label(1);
  if (n0 == 0) throw ConfigError("balance_dataset: no benign samples to duplicate");
  if (n0 == n1) return;
  if (n1 == 0) throw ConfigError("balance_dataset: no DDoS samples, cannot balance");

  const int minority = n0 < n1 ? 0 : 1;
  auto idxs = ds.indices_of(minority);
  Rng rng(Rng::derive(seed, "balance-shuffle"));
  rng.shuffle(idxs);
  size_t need = (n0 < n1) ? (n1 - n0) : (n0 - n1);
  size_t cursor = 0;
  while (need-- > 0) {
    Sample dup = ds.samples[idxs[cursor]];
    if (minority == 0) dup.provenance = Provenance::kDuplicateBenign;
    ds.samples.push_back(std::move(dup));
    cursor = (cursor + 1) % idxs.size();
  }
}

}  // namespace rampart
