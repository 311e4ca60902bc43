#include "oddic/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oddic/errors.hpp"

namespace oddic {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::oddic: return "oddic";
    case PolicyKind::msr: return "msr";
    case PolicyKind::mean: return "mean";
  }
  return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
  if (name == "oddic" || name == "ODDI-C") return PolicyKind::oddic;
  if (name == "msr" || name == "MSR") return PolicyKind::msr;
  if (name == "mean") return PolicyKind::mean;
  throw ParameterError("unknown policy '" + std::string(name) + "' (expected oddic, msr or mean)");
}

std::string policy_label(const Policy& policy) {
  std::string label(to_string(policy.kind));
  if (policy.kind == PolicyKind::msr) label += std::to_string(policy.msr_d);
  return label;
}

double median(std::span<const double> values) {
  if (values.empty()) {
    throw ParameterError("median of an empty multiset");
  }
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return lower + (upper - lower) / 2.0;
}

NeighborhoodSample collect(const Digraph& g, std::span<const double> values, NodeId i) {
  if (values.size() != g.size()) {
    throw ParameterError("state vector size does not match graph size");
  }
  NeighborhoodSample sample;
  sample.own = values[i];
  const auto in = g.in_neighbors(i);
  sample.values.reserve(in.size() + 1);
  for (NodeId j : in) sample.values.push_back(values[j]);
  sample.values.push_back(sample.own);
  return sample;
}

double zscore(double value, const FilterParams& params) {
  const double dev = std::fabs(value - params.median);
  if (params.nmad == 0.0) {
    return dev == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return dev / params.nmad;
}

FilterParams filter_params(const NeighborhoodSample& sample) {
  FilterParams p;
  p.median = median(sample.values);
  std::vector<double> deviations;
  deviations.reserve(sample.values.size());
  for (double v : sample.values) deviations.push_back(std::fabs(v - p.median));
  p.mad = median(deviations);
  p.nmad = kNmadScale * p.mad;
  p.raw_filter = zscore(sample.own, p);
  p.filter_value = std::min(p.raw_filter, kFilterMax);
  return p;
}

std::vector<double> zscores(const NeighborhoodSample& sample, const FilterParams& params) {
  std::vector<double> out;
  out.reserve(sample.values.size());
  for (double v : sample.values) out.push_back(zscore(v, params));
  return out;
}

std::vector<double> dynamic_filter(const NeighborhoodSample& sample, std::span<const double> scores,
                                   const FilterParams& params) {
  if (scores.size() != sample.values.size()) {
    throw ParameterError("score count does not match sample size");
  }
  std::vector<double> accepted;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (scores[k] < params.filter_value) accepted.push_back(sample.values[k]);
  }
  return accepted;
}

double linear_update(double own, std::span<const double> accepted, double eta, bool literal_sign) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw ParameterError("eta must lie in (0, 1]");
  }
  if (accepted.empty()) return own;

  std::vector<double> sorted(accepted.begin(), accepted.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  const double mean =
      std::clamp(sum / static_cast<double>(sorted.size()), sorted.front(), sorted.back());

  if (literal_sign) {
    return own + eta * (own - mean);
  }
  const double next = own + eta * (mean - own);
  return std::clamp(next, std::min(own, mean), std::max(own, mean));
}

std::vector<double> msr_filter(const NeighborhoodSample& sample, std::size_t d) {
  std::vector<double> sorted = sample.values;
  std::sort(sorted.begin(), sorted.end());
  const double own = sample.own;
  const auto below = static_cast<std::size_t>(
      std::lower_bound(sorted.begin(), sorted.end(), own) - sorted.begin());
  const auto above = static_cast<std::size_t>(
      sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), own));
  const std::size_t drop_low = std::min(d, below);
  const std::size_t drop_high = std::min(d, above);
  return {sorted.begin() + static_cast<std::ptrdiff_t>(drop_low),
          sorted.end() - static_cast<std::ptrdiff_t>(drop_high)};
}

double update_node(const NeighborhoodSample& sample, const Policy& policy) {
  switch (policy.kind) {
    case PolicyKind::oddic: {
      const FilterParams params = filter_params(sample);
      const auto scores = zscores(sample, params);
      const auto accepted = dynamic_filter(sample, scores, params);
      return linear_update(sample.own, accepted, policy.eta, policy.literal_eq11);
    }
    case PolicyKind::msr: {
      const auto accepted = msr_filter(sample, policy.msr_d);
      return linear_update(sample.own, accepted, policy.eta, policy.literal_eq11);
    }
    case PolicyKind::mean:
      return linear_update(sample.own, sample.values, policy.eta, policy.literal_eq11);
  }
  throw ParameterError("unknown policy kind");
}

OpinionVector step(const Digraph& g, const OpinionVector& states, const Policy& policy,
                   std::span<const Broadcast> broadcasts) {
  const std::size_t n = g.size();
  if (states.size() != n) {
    throw ParameterError("state vector size does not match graph size");
  }
  std::vector<char> fixed(n, 0);
  OpinionVector next{std::vector<double>(n, 0.0), states.t + 1, states.disruptor_mask};
  for (const Broadcast& b : broadcasts) {
    if (b.node >= n) throw ParameterError("broadcast node out of range");
    if (!std::isfinite(b.value)) {
      throw NonFiniteStateError("non-finite broadcast from node " + std::to_string(b.node) +
                                " at t = " + std::to_string(next.t));
    }
    fixed[b.node] = 1;
    next.values[b.node] = b.value;
  }
  for (NodeId i = 0; i < n; ++i) {
    if (fixed[i]) continue;
    const double v = update_node(collect(g, states.values, i), policy);
    if (!std::isfinite(v)) {
      throw NonFiniteStateError("node " + std::to_string(i) + " reached a non-finite state at t = " +
                                std::to_string(next.t));
    }
    next.values[i] = v;
  }
  return next;
}

}  // namespace oddic
