#include "rampart/evalgrid.hpp"

#include <sstream>

#include "rampart/error.hpp"
#include "rampart/hash.hpp"

namespace rampart {

namespace {

std::string pool_hash(const std::vector<Sample>& samples) {
  uint64_t h = 1469598103934665603ULL;
  for (const Sample& s : samples) {
    h = fnv1a64(std::span<const uint8_t>(
                    reinterpret_cast<const uint8_t*>(s.matrix.data()),
                    s.matrix.size() * sizeof(double)),
                h);
  }
  return hash_hex(h);
}

MetricsReport evaluate_cell(const DetectorModel& model,
                            const std::vector<Sample>& benign_pool,
                            const std::vector<Sample>& attack,
                            const std::string& expected_pool_hash,
                            const std::string& cell) {
  if (pool_hash(benign_pool) != expected_pool_hash) {
    throw Error("grid cell " + cell + ": benign test pool changed between cells");
  }
  std::vector<Sample> merged = benign_pool;
  merged.insert(merged.end(), attack.begin(), attack.end());
  std::vector<int> labels;
  labels.reserve(merged.size());
  for (const auto& s : merged) {
    if (s.label != 0 && s.label != 1) {
      throw ConfigError("grid cell " + cell + ": unlabeled sample");
    }
    labels.push_back(s.label);
  }
  auto preds = detector_classify(model, merged);
  return compute_metrics(labels, preds);
}

std::string csv_field(const std::optional<double>& v) {
  return v ? format_metric(v) : "";
}

std::optional<double> parse_field(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

GridResult run_grid(const ExperimentGrid& grid) {
  if (!grid.before) throw ConfigError("run_grid: missing 'before' model");
  for (const auto& m : kGridMethods) {
    if (!grid.methods.count(m) || !grid.methods.at(m)) {
      throw ConfigError("run_grid: missing model for method '" + m + "'");
    }
  }
  GridResult result;
  result.benign_pool_hash = pool_hash(grid.benign_pool);

  auto eval_row = [&](const std::string& name, const std::vector<Sample>& attack) {
    GridRow row;
    row.perturbation = name;
    row.before = evaluate_cell(*grid.before, grid.benign_pool, attack,
                               result.benign_pool_hash, name + "/before");
    for (const auto& m : kGridMethods) {
      row.methods[m] = evaluate_cell(*grid.methods.at(m), grid.benign_pool, attack,
                                     result.benign_pool_hash, name + "/" + m);
    }
    return row;
  };

  result.rows.push_back(eval_row("unperturbed", grid.unperturbed_attack));
  for (const auto& [name, attack] : grid.perturbed_attack) {
    result.rows.push_back(eval_row(name, attack));
  }
  return result;
}

std::string render_grid_csv(const GridResult& result) {
  std::ostringstream os;
  os << "perturbation,before_f1,before_fnr";
  for (const auto& m : kGridMethods) {
    os << "," << m << "_f1," << m << "_f1_delta," << m << "_fnr," << m << "_fnr_delta";
  }
  os << "\n";
  for (const auto& row : result.rows) {
    os << row.perturbation << "," << csv_field(row.before.f1) << ","
       << csv_field(row.before.fnr);
    for (const auto& m : kGridMethods) {
      const MetricsReport& r = row.methods.at(m);
      const auto df1 = make_delta("f1", row.before.f1, r.f1);
      const auto dfnr = make_delta("fnr", row.before.fnr, r.fnr);
      os << "," << csv_field(r.f1) << "," << csv_field(df1.delta) << ","
         << csv_field(r.fnr) << "," << csv_field(dfnr.delta);
    }
    os << "\n";
  }
  return os.str();
}

GridResult parse_grid_csv(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line)) throw ParseError("grid csv: empty");
  GridResult result;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    const size_t expected = 3 + 4 * kGridMethods.size();
    if (f.size() != expected) {
      throw ParseError("grid csv: expected " + std::to_string(expected) +
                       " fields, got " + std::to_string(f.size()));
    }
    GridRow row;
    row.perturbation = f[0];
    row.before.f1 = parse_field(f[1]);
    row.before.fnr = parse_field(f[2]);
    size_t i = 3;
    for (const auto& m : kGridMethods) {
      MetricsReport r;
      r.f1 = parse_field(f[i]);
      r.fnr = parse_field(f[i + 2]);
      row.methods[m] = r;
      i += 4;
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string render_grid_text(const GridResult& result, const std::string& title) {
  std::ostringstream os;
  os << title << "\n";
  os << "benign test pool hash: " << result.benign_pool_hash << "\n\n";
  auto pad = [](const std::string& s, size_t w) {
    return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
  };
  const size_t name_w = 44;
  os << pad("perturbation", name_w) << pad("before", 18);
  for (const auto& m : kGridMethods) os << pad(m, 36);
  os << "\n";
  os << pad("", name_w) << pad("F1", 9) << pad("FNR", 9);
  for (size_t i = 0; i < kGridMethods.size(); ++i) {
    os << pad("F1", 9) << pad("dF1", 9) << pad("FNR", 9) << pad("dFNR", 9);
  }
  os << "\n";
  for (const auto& row : result.rows) {
    os << pad(row.perturbation, name_w) << pad(format_metric(row.before.f1), 9)
       << pad(format_metric(row.before.fnr), 9);
    for (const auto& m : kGridMethods) {
      const MetricsReport& r = row.methods.at(m);
      const auto df1 = make_delta("f1", row.before.f1, r.f1);
      const auto dfnr = make_delta("fnr", row.before.fnr, r.fnr);
      os << pad(format_metric(r.f1), 9) << pad(format_metric(df1.delta), 9)
         << pad(format_metric(r.fnr), 9) << pad(format_metric(dfnr.delta), 9);
    }
    os << "\n";
  }
  return os.str();
}

std::string render_unperturbed_csv(const GridResult& result) {
  if (result.rows.empty()) throw ConfigError("render_unperturbed_csv: empty grid");
  const GridRow& base = result.rows.front();
  std::ostringstream os;
  os << "metric,before";
  for (const auto& m : kGridMethods) os << "," << m << "," << m << "_delta";
  os << "\n";
  struct Entry {
    const char* name;
    std::optional<double> MetricsReport::* field;
  };
  const Entry entries[] = {{"precision", &MetricsReport::precision},
                           {"recall", &MetricsReport::recall},
                           {"f1", &MetricsReport::f1},
                           {"fnr", &MetricsReport::fnr}};
  for (const auto& e : entries) {
    os << e.name << "," << csv_field(base.before.*(e.field));
    for (const auto& m : kGridMethods) {
      const auto after = base.methods.at(m).*(e.field);
      const auto d = make_delta(e.name, base.before.*(e.field), after);
      os << "," << csv_field(after) << "," << csv_field(d.delta);
    }
    os << "\n";
  }
  return os.str();
}

std::string render_unperturbed_text(const GridResult& result, const std::string& title) {
  if (result.rows.empty()) throw ConfigError("render_unperturbed_text: empty grid");
  const GridRow& base = result.rows.front();
  std::ostringstream os;
  os << title << "\n\n";
  auto pad = [](const std::string& s, size_t w) {
    return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
  };
  os << pad("metric", 12) << pad("before", 10);
  for (const auto& m : kGridMethods) os << pad(m, 10) << pad("delta", 10);
  os << "\n";
  struct Entry {
    const char* name;
    std::optional<double> MetricsReport::* field;
  };
  const Entry entries[] = {{"Precision", &MetricsReport::precision},
                           {"Recall", &MetricsReport::recall},
                           {"F1 score", &MetricsReport::f1},
                           {"FNR", &MetricsReport::fnr}};
  for (const auto& e : entries) {
    os << pad(e.name, 12) << pad(format_metric(base.before.*(e.field)), 10);
    for (const auto& m : kGridMethods) {
      const auto after = base.methods.at(m).*(e.field);
      const auto d = make_delta(e.name, base.before.*(e.field), after);
      os << pad(format_metric(after), 10) << pad(format_metric(d.delta), 10);
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace rampart
