#include "oddic/random.hpp"

#include <cmath>
#include <numbers>

#include "oddic/errors.hpp"

namespace oddic {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_closed01() {
  return static_cast<double>(engine_() >> 11) / static_cast<double>((1ULL << 53) - 1);
}

std::uint64_t RandomStream::uniform_index(std::uint64_t bound) {
  if (bound == 0) {
    throw ParameterError("uniform_index: bound must be positive");
  }
  // Rejection sampling on the largest multiple of bound below 2^64.
  const std::uint64_t limit = std::uint64_t(0) - (std::uint64_t(0) - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (limit == 0 || x < limit) {
      return x % bound;
    }
  }
}

double RandomStream::normal(double mean, double stddev) {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + stddev * z;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_subseed(std::uint64_t master_seed, std::uint64_t batch_index,
                             std::uint64_t run_index, std::string_view stream_label) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ batch_index);
  h = splitmix64(h ^ run_index);
  h = splitmix64(h ^ fnv1a64(stream_label));
  return h;
}

}  // namespace oddic
