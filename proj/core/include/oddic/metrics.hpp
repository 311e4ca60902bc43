#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "oddic/consensus.hpp"

namespace oddic {

inline constexpr double kDefaultErr = 1e-7;

/// Sum of |a - b| over all ordered pairs (each unordered pair counted twice).
/// O(n log n) via the sorted-prefix identity.
double total_difference(std::span<const double> values);

/// err / td0. Throws ParameterError unless td0 > 0.
double metric_floor(double td0, double err);

/// max(td_t / td0, err / td0). Throws ParameterError unless td0 > 0.
double convergence_metric(double td_t, double td0, double err);

/// Per-step convergence metric of one run.
///
/// cm[t] uses the compliant-node total difference for t >= 1 and the
/// all-node total difference at t = 0; both are normalised by the all-node
/// TD[0]. cm_all_nodes[t] uses all nodes at every step. When TD[0] == 0 the
/// metric is undefined: exact_consensus is set and both series are zero.
struct ConvergenceSeries {
  std::vector<double> cm;
  std::vector<double> cm_all_nodes;
  double td0 = 0.0;
  double floor = 0.0;
  double err = kDefaultErr;
  bool exact_consensus = false;

  bool at_floor(std::size_t t) const { return !exact_consensus && cm.at(t) <= floor; }
  /// First step whose metric sits at the floor.
  std::optional<std::size_t> first_floor_hit() const;

  friend bool operator==(const ConvergenceSeries&, const ConvergenceSeries&) = default;
};

ConvergenceSeries convergence_series(std::span<const std::vector<double>> trajectory,
                                     const std::vector<bool>& disruptor_mask,
                                     double err = kDefaultErr);

struct RangeStats {
  double min = 0.0;
  double max = 0.0;
  double range = 0.0;
};

/// Extremes over compliant nodes only. Throws ParameterError when none are compliant.
RangeStats compliant_range(const OpinionVector& states);

/// Values of the compliant nodes, in node order.
std::vector<double> compliant_values(std::span<const double> values,
                                     const std::vector<bool>& disruptor_mask);

}  // namespace oddic
