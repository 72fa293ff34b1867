#pragma once

#include <map>
#include <string>
#include <vector>

#include "rampart/dataset.hpp"
#include "rampart/detector.hpp"
#include "rampart/metrics.hpp"

namespace rampart {

inline const std::vector<std::string> kGridMethods = {"gadot", "bfp", "fgsm"};

// One grid: a fixed benign test pool, the unperturbed attack samples, one
// attack sample set per perturbation, and the before/after models. The benign
// pool is hashed once and re-asserted per cell, so any cell-to-cell difference
// is attributable to the perturbed DDoS samples alone.
struct ExperimentGrid {
  std::vector<Sample> benign_pool;                       // labels all 0
  std::vector<Sample> unperturbed_attack;                // labels all 1
  std::vector<std::pair<std::string, std::vector<Sample>>> perturbed_attack;
  const DetectorModel* before = nullptr;
  std::map<std::string, const DetectorModel*> methods;   // gadot/bfp/fgsm
};

struct GridRow {
  std::string perturbation;  // "unperturbed" for the baseline row
  MetricsReport before;
  std::map<std::string, MetricsReport> methods;
};

struct GridResult {
  std::vector<GridRow> rows;  // first row is the unperturbed baseline
  std::string benign_pool_hash;
};

GridResult run_grid(const ExperimentGrid& grid);

// Machine-readable table: header row, 4-decimal values, empty field for an
// undefined metric. Layout mirrors the perturbation-rows x
// {Before, per-method F1/FNR and deltas} structure.
std::string render_grid_csv(const GridResult& result);
// Human-readable counterpart ("—" for undefined cells).
std::string render_grid_text(const GridResult& result, const std::string& title);
GridResult parse_grid_csv(const std::string& csv);

// Unperturbed before/after comparison (Precision/Recall/F1/FNR rows).
std::string render_unperturbed_csv(const GridResult& result);
std::string render_unperturbed_text(const GridResult& result, const std::string& title);

}  // namespace rampart
