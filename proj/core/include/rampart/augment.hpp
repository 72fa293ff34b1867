#pragma once

#include <string>
#include <vector>

#include "rampart/dataset.hpp"
#include "rampart/detector.hpp"
#include "rampart/gan.hpp"

namespace rampart {

// Features to perturb: matrix columns 0..10 plus kFeatFlowLength (11), which
// targets the zero-padded rows instead of a column.
struct PerturbationPlan {
  std::vector<int> features;

  static PerturbationPlan parse(const std::string& comma_list);  // "all" allowed
  static PerturbationPlan all();
  std::string str() const;
};

struct FgsmConfig {
  double epsilon = 0.1;  // l-inf bound in normalized feature units
};

// Adversarial dataset generation. T_adv starts as a copy of T; for each
// feature f in the plan a fresh fake-benign batch is drawn and a copy T_c of T
// has its DDoS samples perturbed — column f of the real rows is overwritten
// with the donor's column f, or, for flow_length, the zero-padded rows are
// filled with the donor's rows — then T_c is appended. Benign feature values
// are never modified anywhere. Finally the dataset is balanced by seeded
// round-robin duplication.
//
// Donor protocol (mirrored by the reference transcription in the acceptance
// tests): for plan index i, the donor batch is generate(gan, n_ddos,
// Rng::derive(seed, "donor", i)), and the j-th DDoS sample of T (in dataset
// order) takes the j-th donor sample.
LabeledDataset gadot_augment(const LabeledDataset& T, const PerturbationPlan& plan,
                             const GanModel& gan, uint64_t seed);

// Same procedure with donors resampled (with replacement) from T's own benign
// samples: for plan index i the donor stream is Rng::derive(seed, "donor", i)
// drawing uniform indices into T's benign subset.
LabeledDataset bfp_augment(const LabeledDataset& T, const PerturbationPlan& plan,
                           uint64_t seed);

// FGSM baseline: each DDoS sample x is pushed one signed-gradient step toward
// the benign side, x' = clip(x + eps * sign(d BCE(model(x), y=1) / dx), 0, 1),
// with the step applied to all 10 rows including padding; the perturbed copies
// are appended to a copy of T and the result balanced.
LabeledDataset fgsm_augment(const LabeledDataset& T, const DetectorModel& model,
                            const FgsmConfig& config, uint64_t seed);

// Duplicates minority-class samples round-robin after a seeded shuffle until
// the class counts match. Duplicated benign samples are tagged
// provenance=duplicate-benign; duplicated DDoS samples keep their provenance.
// Shuffle stream: Rng(Rng::derive(seed, "balance-shuffle")) Fisher-Yates over
// the minority indices in dataset order; the augmenters call this with
// Rng::derive(their_seed, "balance").
void balance_dataset(LabeledDataset& ds, uint64_t seed);

}  // namespace rampart
