#include "oddic/metrics.hpp"

#include <algorithm>
#include <limits>

#include "oddic/errors.hpp"

namespace oddic {

double total_difference(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  // Each gap between consecutive sorted values is crossed by (k + 1)(n - k - 1)
  // unordered pairs. Summing non-negative gap terms avoids cancellation, so
  // identical values give exactly zero.
  const std::size_t n = sorted.size();
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double gap = sorted[k + 1] - sorted[k];
    total += gap * static_cast<double>((k + 1) * (n - k - 1));
  }
  return 2.0 * total;
}

double metric_floor(double td0, double err) {
  if (!(td0 > 0.0)) {
    throw ParameterError("convergence metric undefined: TD[0] must be positive");
  }
  return err / td0;
}

double convergence_metric(double td_t, double td0, double err) {
  return std::max(td_t / td0, metric_floor(td0, err));
}

std::optional<std::size_t> ConvergenceSeries::first_floor_hit() const {
  if (exact_consensus) return std::nullopt;
  for (std::size_t t = 0; t < cm.size(); ++t) {
    if (cm[t] <= floor) return t;
  }
  return std::nullopt;
}

std::vector<double> compliant_values(std::span<const double> values,
                                     const std::vector<bool>& disruptor_mask) {
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (disruptor_mask.empty() || !disruptor_mask[i]) out.push_back(values[i]);
  }
  return out;
}

ConvergenceSeries convergence_series(std::span<const std::vector<double>> trajectory,
                                     const std::vector<bool>& disruptor_mask, double err) {
  ConvergenceSeries series;
  series.err = err;
  if (trajectory.empty()) return series;

  series.td0 = total_difference(trajectory.front());
  if (!(series.td0 > 0.0)) {
    series.exact_consensus = true;
    series.cm.assign(trajectory.size(), 0.0);
    series.cm_all_nodes.assign(trajectory.size(), 0.0);
    return series;
  }
  series.floor = metric_floor(series.td0, err);
  series.cm.reserve(trajectory.size());
  series.cm_all_nodes.reserve(trajectory.size());
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    const double td_all = total_difference(trajectory[t]);
    const double td = t == 0 ? td_all : total_difference(compliant_values(trajectory[t], disruptor_mask));
    series.cm.push_back(convergence_metric(td, series.td0, err));
    series.cm_all_nodes.push_back(convergence_metric(td_all, series.td0, err));
  }
  return series;
}

RangeStats compliant_range(const OpinionVector& states) {
  const auto values = compliant_values(states.values, states.disruptor_mask);
  if (values.empty()) {
    throw ParameterError("compliant_range: no compliant nodes");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi, *hi - *lo};
}

}  // namespace oddic
