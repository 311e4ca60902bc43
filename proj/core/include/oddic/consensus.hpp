#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oddic/digraph.hpp"

namespace oddic {

/// Normal-consistency factor applied to the MAD.
inline constexpr double kNmadScale = 1.4826;
/// Hampel-style upper bound on a node's own filter value.
inline constexpr double kFilterMax = 3.0;
inline constexpr double kDefaultEta = 0.5;

/// Per-node state at one time step.
struct OpinionVector {
  std::vector<double> values;
  std::size_t t = 0;
  std::vector<bool> disruptor_mask;  // constant over a run

  std::size_t size() const { return values.size(); }
  bool is_disruptor(NodeId i) const { return !disruptor_mask.empty() && disruptor_mask[i]; }

  friend bool operator==(const OpinionVector&, const OpinionVector&) = default;
};

/// Values a node sees in one step: its in-neighbours' broadcasts plus its own.
struct NeighborhoodSample {
  std::vector<double> values;  // multiset; always contains `own`
  double own = 0.0;
};

struct FilterParams {
  double median = 0.0;
  double mad = 0.0;
  double nmad = 0.0;
  double raw_filter = 0.0;    // own z-score before the cap
  double filter_value = 0.0;  // min(raw_filter, kFilterMax)
};

enum class PolicyKind { oddic, msr, mean };

struct Policy {
  PolicyKind kind = PolicyKind::oddic;
  std::size_t msr_d = 0;  // known disruptor count, MSR only
  double eta = kDefaultEta;
  // Debug: apply the update with the opposite sign, i.e. away from the
  // filtered mean. Off for every experiment.
  bool literal_eq11 = false;

  friend bool operator==(const Policy&, const Policy&) = default;
};

std::string_view to_string(PolicyKind kind);
/// Parses "oddic", "msr" or "mean"; throws ParameterError otherwise.
PolicyKind parse_policy_kind(std::string_view name);
/// Short label such as "oddic", "mean" or "msr5".
std::string policy_label(const Policy& policy);

/// Fixed value a node broadcasts at the next step instead of running its policy.
struct Broadcast {
  NodeId node = 0;
  double value = 0.0;
};

/// Median of a nonempty multiset; even sizes take the midpoint of the central pair.
double median(std::span<const double> values);

NeighborhoodSample collect(const Digraph& g, std::span<const double> values, NodeId i);
inline NeighborhoodSample collect(const Digraph& g, const OpinionVector& states, NodeId i) {
  return collect(g, states.values, i);
}

/// Median, MAD, NMAD and the node's capped filter value. When NMAD is zero the
/// node's raw filter is 0 if it sits at the median and +inf otherwise.
FilterParams filter_params(const NeighborhoodSample& sample);

/// Absolute median-based z-score of a single value.
double zscore(double value, const FilterParams& params);

/// z-score of every sample value, in sample order.
std::vector<double> zscores(const NeighborhoodSample& sample, const FilterParams& params);

/// Values whose score is strictly below the node's filter value. The node's
/// own value (and any duplicate of it) is never accepted.
std::vector<double> dynamic_filter(const NeighborhoodSample& sample, std::span<const double> scores,
                                   const FilterParams& params);

/// Moves `own` a fraction eta of the way toward mean(accepted); holds when
/// nothing was accepted. The result is clamped to the closed interval
/// between own and the mean, so rounding can never overshoot it. Throws
/// ParameterError unless eta lies in (0, 1].
double linear_update(double own, std::span<const double> accepted, double eta,
                     bool literal_sign = false);

inline double oddic_update(double own, std::span<const double> accepted, double eta) {
  return linear_update(own, accepted, eta);
}

/// Trims up to d values strictly above and up to d strictly below the node's
/// own value; returns the rest in ascending order.
std::vector<double> msr_filter(const NeighborhoodSample& sample, std::size_t d);

/// Next value of one compliant node under `policy`.
double update_node(const NeighborhoodSample& sample, const Policy& policy);

/// One synchronous round. Every node not listed in `broadcasts` applies the
/// policy to the snapshot `states`; listed nodes take their broadcast value.
/// Throws NonFiniteStateError if any resulting value is not finite.
OpinionVector step(const Digraph& g, const OpinionVector& states, const Policy& policy,
                   std::span<const Broadcast> broadcasts = {});

}  // namespace oddic
