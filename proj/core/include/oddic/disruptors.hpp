#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oddic {

class RandomStream;

inline constexpr std::size_t kDefaultActivationStep = 2;
/// Fraction of the initial range spanned by noise disruptors.
inline constexpr double kNoiseRangeFactor = 0.9;

enum class DisruptorKind {
  sine,    // T1: (mean0 + shift_y) + amplitude * range0 * sin(omega * t + shift_x)
  linear,  // T2: mean0 + gradient * t
  noise,   // T3: mean0 + u * 0.9 * range0, u ~ U[0, 1] per step
};

std::string_view to_string(DisruptorKind kind);
/// Accepts "T1"/"sine", "T2"/"linear", "T3"/"noise".
DisruptorKind parse_disruptor_kind(std::string_view name);

struct DisruptorSpec {
  std::string name;  // e.g. "EXP2/D3"
  DisruptorKind kind = DisruptorKind::linear;
  // sine parameters
  double amplitude = 0.0;
  double shift_x = 0.0;  // radians
  double shift_y = 0.0;  // state units
  double omega = 0.0;    // radians per step
  // linear parameter
  double gradient = 0.0;  // state units per step

  friend bool operator==(const DisruptorSpec&, const DisruptorSpec&) = default;
};

/// Broadcast values for t = 0..t_max. Entries before active_from are never
/// broadcast; the node follows the compliant policy until then.
struct DisruptorTrajectory {
  std::vector<double> values;
  std::size_t active_from = kDefaultActivationStep;

  bool active_at(std::size_t t) const { return t >= active_from && t < values.size(); }
  friend bool operator==(const DisruptorTrajectory&, const DisruptorTrajectory&) = default;
};

/// Mean and range of the whole population at t = 0, future disruptors included.
struct InitialStats {
  double mean = 0.0;
  double range = 0.0;
};
InitialStats initial_stats(std::span<const double> values);

/// Value of one disruptor at global step t. Only the noise kind consumes `rng`.
double disruptor_value(const DisruptorSpec& spec, std::size_t t, double mean0, double range0,
                       RandomStream& rng);

/// Materialises disruptor_value for t = 0..t_max so that later runs can
/// replay the exact same sequence.
DisruptorTrajectory precompute_trajectory(const DisruptorSpec& spec, std::size_t t_max,
                                          double mean0, double range0, RandomStream& rng,
                                          std::size_t active_from = kDefaultActivationStep);

}  // namespace oddic
