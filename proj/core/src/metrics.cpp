#include "rampart/metrics.hpp"

#include <cstdio>

#include "rampart/error.hpp"

namespace rampart {

MetricsReport compute_metrics(std::span<const int> labels,
                              std::span<const int> predictions) {
  if (labels.size() != predictions.size()) {
    throw ConfigError("compute_metrics: " + std::to_string(labels.size()) +
                      " labels vs " + std::to_string(predictions.size()) + " predictions");
  }
  MetricsReport r;
  for (size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    const int p = predictions[i];
    if (y != 0 && y != 1) throw ConfigError("compute_metrics: non-binary label");
    if (p != 0 && p != 1) throw ConfigError("compute_metrics: non-binary prediction");
    if (y == 1 && p == 1) ++r.tp;
    if (y == 0 && p == 1) ++r.fp;
    if (y == 1 && p == 0) ++r.fn;
    if (y == 0 && p == 0) ++r.tn;
  }
  if (r.tp + r.fp > 0) {
    r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  }
  if (r.tp + r.fn > 0) {
    r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
    r.fnr = static_cast<double>(r.fn) / static_cast<double>(r.fn + r.tp);
  }
  if (r.precision && r.recall && (*r.precision + *r.recall) > 0.0) {
    r.f1 = 2.0 * (*r.precision) * (*r.recall) / (*r.precision + *r.recall);
  }
  return r;
}

MetricsDelta make_delta(const std::string& metric, std::optional<double> before,
                        std::optional<double> after) {
  MetricsDelta d;
  d.metric = metric;
  d.before = before;
  d.after = after;
  if (before && after) d.delta = *after - *before;
  return d;
}

std::string format_metric(const std::optional<double>& v) {
  if (!v) return "—";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

}  // namespace rampart
