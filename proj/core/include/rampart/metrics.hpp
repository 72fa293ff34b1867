#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace rampart {

// Confusion counts plus the derived ratios. A ratio whose denominator is zero
// is absent rather than 0 or 1.
struct MetricsReport {
  int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::optional<double> fnr;
};

MetricsReport compute_metrics(std::span<const int> labels, std::span<const int> predictions);

struct MetricsDelta {
  std::string metric;
  std::optional<double> before;
  std::optional<double> after;
  std::optional<double> delta;  // after - before, absent if either side is
};

MetricsDelta make_delta(const std::string& metric, std::optional<double> before,
                        std::optional<double> after);

// 4-decimal fixed formatting; absent values render as an em-dash-style marker.
std::string format_metric(const std::optional<double>& v);

}  // namespace rampart
