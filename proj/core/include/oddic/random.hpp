#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace oddic {

/// Seeded pseudo-random stream with platform-independent output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The std::*_distribution adaptors are implementation-defined, so
/// every conversion to doubles or bounded integers is done here explicitly.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform01();

  /// Uniform on [0, 1]; both endpoints reachable.
  double uniform_closed01();

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_index(std::uint64_t bound);

  /// Normal(mean, stddev) via the Box-Muller transform (one draw per call).
  double normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
};

/// 64-bit FNV-1a hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

/// Deterministic seed for one labelled substream of one run.
///
/// Distinct (batch, run, label) tuples under the same master seed map to
/// distinct seeds with overwhelming probability; identical tuples always map
/// to the same seed, so any run can be re-executed in isolation.
std::uint64_t derive_subseed(std::uint64_t master_seed, std::uint64_t batch_index,
                             std::uint64_t run_index, std::string_view stream_label);

}  // namespace oddic
