#include <doctest.h>

#include <filesystem>

#include "rampart/detector.hpp"
#include "rampart/error.hpp"
#include "rampart/metrics.hpp"
#include "support/toy_data.hpp"

using namespace rampart;
namespace fs = std::filesystem;

TEST_CASE("toy separable dataset trains to F1 >= 0.99 within 20 epochs") {
  auto ds = toy::separable_dataset(120, 120, 51);
  DetectorConfig cfg;
  cfg.max_epochs = 20;
  cfg.batch_size = 16;  // enough optimizer steps on a 240-sample toy
  auto model = train_detector(ds, cfg, 7);
  auto preds = detector_classify(model, ds.samples);
  std::vector<int> labels;
  for (const auto& s : ds.samples) labels.push_back(s.label);
  auto m = compute_metrics(labels, preds);
  REQUIRE(m.f1.has_value());
  CHECK(*m.f1 >= 0.99);
}

TEST_CASE("zero epochs returns the initialized model") {
  auto ds = toy::separable_dataset(20, 20, 52);
  DetectorConfig cfg;
  cfg.max_epochs = 0;
  auto trained = train_detector(ds, cfg, 9);
  auto fresh = make_detector(cfg, 9);
  for (size_t i = 0; i < trained.params.size(); ++i) {
    CHECK(trained.params.vars()[i].value() == fresh.params.vars()[i].value());
  }
  CHECK(trained.epochs_trained == 0);
}

TEST_CASE("same seed gives identical final parameters") {
  auto ds = toy::separable_dataset(40, 40, 53);
  DetectorConfig cfg;
  cfg.max_epochs = 5;
  auto a = train_detector(ds, cfg, 11);
  auto b = train_detector(ds, cfg, 11);
  for (size_t i = 0; i < a.params.size(); ++i) {
    CHECK(a.params.vars()[i].value() == b.params.vars()[i].value());
  }
}

TEST_CASE("single-class dataset is rejected") {
  auto ds = toy::separable_dataset(30, 0, 54);
  CHECK_THROWS_AS(train_detector(ds, {}, 1), ConfigError);
}

TEST_CASE("all-zero sample scores without crashing") {
  auto model = make_detector({}, 3);
  Sample zero;
  zero.flow_length = 0;
  auto scores = detector_scores(model, {zero});
  REQUIRE(scores.size() == 1);
  CHECK(scores[0] >= 0.0);
  CHECK(scores[0] <= 1.0);
}

TEST_CASE("score exactly at the threshold classifies as DDoS") {
  auto model = make_detector({}, 4);
  for (Tensor* t : model.params.tensors()) {
    for (int64_t i = 0; i < t->numel(); ++i) (*t)[i] = 0.0;
  }
  Sample s;
  s.flow_length = 2;
  s.at(0, 0) = 0.4;
  std::vector<double> scores;
  auto preds = detector_classify(model, {s}, &scores);
  CHECK(scores[0] == 0.5);  // sigmoid(0) with all-zero weights
  CHECK(preds[0] == 1);
}

TEST_CASE("batch and one-by-one classification agree bit-for-bit") {
  auto ds = toy::separable_dataset(30, 30, 55);
  DetectorConfig cfg;
  cfg.max_epochs = 3;
  auto model = train_detector(ds, cfg, 13);
  auto batch_scores = detector_scores(model, ds.samples);
  for (size_t i = 0; i < ds.samples.size(); ++i) {
    auto one = detector_scores(model, {ds.samples[i]});
    CHECK(one[0] == batch_scores[i]);
  }
}

TEST_CASE("detector checkpoint round-trips and keeps scores") {
  auto ds = toy::separable_dataset(30, 30, 56);
  DetectorConfig cfg;
  cfg.max_epochs = 3;
  auto model = train_detector(ds, cfg, 17);
  auto path = fs::temp_directory_path() / "rampart_det.ckpt";
  save_detector(path, model, {{"note", "test"}});
  auto back = load_detector(path);
  auto s1 = detector_scores(model, ds.samples);
  auto s2 = detector_scores(back, ds.samples);
  CHECK(s1 == s2);
  CHECK(back.dataset_hash == model.dataset_hash);
  fs::remove(path);
}
