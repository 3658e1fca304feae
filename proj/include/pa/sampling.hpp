#pragma once

#include <cmath>
#include <cstdint>
#include <random>

// Deterministic sampling helpers. std::mt19937_64 is fully specified by the
// standard; the real-valued distributions are not, so conversions to reals
// are done here to keep value streams identical across standard libraries.
namespace pa {

using Rng = std::mt19937_64;

/// Uniform on [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_between(Rng& rng, double low, double high) {
  return low + (high - low) * uniform_unit(rng);
}

/// Log-uniform on [low, high), both positive.
inline double log_uniform(Rng& rng, double low, double high) {
  return std::exp(uniform_between(rng, std::log(low), std::log(high)));
}

}  // namespace pa
