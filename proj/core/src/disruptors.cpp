#include "oddic/disruptors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oddic/errors.hpp"
#include "oddic/random.hpp"

namespace oddic {

std::string_view to_string(DisruptorKind kind) {
  switch (kind) {
    case DisruptorKind::sine: return "T1";
    case DisruptorKind::linear: return "T2";
    case DisruptorKind::noise: return "T3";
  }
  return "unknown";
}

DisruptorKind parse_disruptor_kind(std::string_view name) {
  if (name == "T1" || name == "sine") return DisruptorKind::sine;
  if (name == "T2" || name == "linear") return DisruptorKind::linear;
  if (name == "T3" || name == "noise") return DisruptorKind::noise;
  throw ParameterError("unknown disruptor kind '" + std::string(name) + "'");
}

InitialStats initial_stats(std::span<const double> values) {
  if (values.empty()) {
    throw ParameterError("initial_stats of an empty population");
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {sum / static_cast<double>(values.size()), *hi - *lo};
}

double disruptor_value(const DisruptorSpec& spec, std::size_t t, double mean0, double range0,
                       RandomStream& rng) {
  const double time = static_cast<double>(t);
  switch (spec.kind) {
    case DisruptorKind::sine:
      return (mean0 + spec.shift_y) + (spec.amplitude * range0) * std::sin(spec.omega * time + spec.shift_x);
    case DisruptorKind::linear:
      return mean0 + spec.gradient * time;
    case DisruptorKind::noise:
      return mean0 + rng.uniform_closed01() * kNoiseRangeFactor * range0;
  }
  throw ParameterError("unknown disruptor kind");
}

DisruptorTrajectory precompute_trajectory(const DisruptorSpec& spec, std::size_t t_max,
                                          double mean0, double range0, RandomStream& rng,
                                          std::size_t active_from) {
  DisruptorTrajectory traj;
  traj.active_from = active_from;
  traj.values.reserve(t_max + 1);
  for (std::size_t t = 0; t <= t_max; ++t) {
    const double v = disruptor_value(spec, t, mean0, range0, rng);
    if (!std::isfinite(v)) {
      throw NonFiniteStateError("disruptor " + spec.name + " produced a non-finite value at t = " +
                                std::to_string(t));
    }
    traj.values.push_back(v);
  }
  return traj;
}

}  // namespace oddic
