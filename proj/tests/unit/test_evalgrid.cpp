#include <doctest.h>

#include "rampart/error.hpp"
#include "rampart/evalgrid.hpp"
#include "support/toy_data.hpp"

using namespace rampart;

namespace {

struct Fixture {
  LabeledDataset ds;
  DetectorModel plain, gadot, bfp, fgsm;
  ExperimentGrid grid;

  Fixture() {
    ds = toy::separable_dataset(60, 60, 71);
    DetectorConfig cfg;
    cfg.max_epochs = 6;
    cfg.batch_size = 16;
    plain = train_detector(ds, cfg, 1);
    gadot = train_detector(ds, cfg, 2);
    bfp = train_detector(ds, cfg, 3);
    fgsm = train_detector(ds, cfg, 4);
    for (const auto& s : ds.samples) {
      if (s.label == 0) grid.benign_pool.push_back(s);
      if (s.label == 1) grid.unperturbed_attack.push_back(s);
    }
    // identity "perturbation": the exact unperturbed attack set
    grid.perturbed_attack.emplace_back("identity", grid.unperturbed_attack);
    grid.before = &plain;
    grid.methods["gadot"] = &gadot;
    grid.methods["bfp"] = &bfp;
    grid.methods["fgsm"] = &fgsm;
  }
};

}  // namespace

TEST_CASE("identity perturbation row equals the unperturbed baseline row") {
  Fixture fx;
  GridResult r = run_grid(fx.grid);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].perturbation == "unperturbed");
  CHECK(r.rows[1].perturbation == "identity");
  CHECK(r.rows[0].before.f1 == r.rows[1].before.f1);
  CHECK(r.rows[0].before.fnr == r.rows[1].before.fnr);
  for (const auto& m : kGridMethods) {
    CHECK(r.rows[0].methods.at(m).f1 == r.rows[1].methods.at(m).f1);
    CHECK(r.rows[0].methods.at(m).fnr == r.rows[1].methods.at(m).fnr);
  }
}

TEST_CASE("grid output structure: one row per perturbation, method columns, exact deltas") {
  Fixture fx;
  GridResult r = run_grid(fx.grid);
  std::string csv = render_grid_csv(r);
  CHECK(csv.find("perturbation,before_f1,before_fnr,gadot_f1,gadot_f1_delta,gadot_fnr,"
                 "gadot_fnr_delta,bfp_f1,") == 0);

  GridResult back = parse_grid_csv(csv);
  REQUIRE(back.rows.size() == r.rows.size());
  for (size_t i = 0; i < back.rows.size(); ++i) {
    for (const auto& m : kGridMethods) {
      // delta column is exactly after - before at rendered precision
      const auto& row = back.rows[i];
      if (row.before.fnr && row.methods.at(m).fnr) {
        const double delta = *row.methods.at(m).fnr - *row.before.fnr;
        auto df = make_delta("fnr", row.before.fnr, row.methods.at(m).fnr);
        CHECK(*df.delta == doctest::Approx(delta).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("csv render-parse-render is byte-stable") {
  Fixture fx;
  GridResult r = run_grid(fx.grid);
  std::string once = render_grid_csv(r);
  std::string twice = render_grid_csv(parse_grid_csv(once));
  CHECK(once == twice);
  CHECK(render_grid_csv(r) == once);  // re-render idempotent
}

TEST_CASE("missing model is an error naming the method") {
  Fixture fx;
  fx.grid.methods.erase("bfp");
  try {
    run_grid(fx.grid);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bfp") != std::string::npos);
  }
}

TEST_CASE("unperturbed report renders all four metrics with deltas") {
  Fixture fx;
  GridResult r = run_grid(fx.grid);
  std::string csv = render_unperturbed_csv(r);
  CHECK(csv.find("metric,before,gadot,gadot_delta,bfp,bfp_delta,fgsm,fgsm_delta\n") == 0);
  CHECK(csv.find("precision,") != std::string::npos);
  CHECK(csv.find("recall,") != std::string::npos);
  CHECK(csv.find("f1,") != std::string::npos);
  CHECK(csv.find("fnr,") != std::string::npos);
  std::string text = render_unperturbed_text(r, "t");
  CHECK(text.find("F1 score") != std::string::npos);
}

TEST_CASE("empty-cell handling renders a dash in text output") {
  GridResult r;
  GridRow row;
  row.perturbation = "unperturbed";
  row.before = MetricsReport{};  // no samples: every ratio absent
  for (const auto& m : kGridMethods) row.methods[m] = MetricsReport{};
  r.rows.push_back(row);
  std::string text = render_grid_text(r, "t");
  CHECK(text.find("—") != std::string::npos);
  std::string csv = render_grid_csv(r);
  CHECK(csv.find("unperturbed,,") != std::string::npos);  // empty fields
}
