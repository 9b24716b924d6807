#pragma once

// Counter-based random streams.
//
// Every random quantity in the toolkit is drawn from a stream identified by
// (seed, domain, index). A stream is a SplitMix64 sequence whose starting
// state is a hash of that triple, so per-point / per-sample draws never depend
// on iteration order or on how work is split between threads.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rgd {

/// Stream domains; distinct constants decorrelate draws that share a seed.
enum class StreamDomain : std::uint64_t {
  Points = 0x01,
  Orientations = 0x02,
  Radii = 0x03,
  Configurations = 0x10,
  InnerArea = 0x11,
  DensityIntegral = 0x12,
  LimitOuter = 0x13,
  Probe = 0x14,
  Experiment = 0x20,
};

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0) noexcept {
  return mix64(mix64(mix64(seed) ^ (a * 0xd1b54a32d192ed03ULL)) ^
               (b * 0x8cb92ba72f3d8dd7ULL));
}

class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t key) noexcept : state_(key) {}

  CounterRng(std::uint64_t seed, StreamDomain domain, std::uint64_t index) noexcept
      : state_(derive_seed(seed, static_cast<std::uint64_t>(domain), index)) {}

  constexpr std::uint64_t next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on the open interval (0, 1).
  constexpr double uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform angle on [0, 2*pi).
  double angle() noexcept {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double y = two_pi * uniform();
    return y < two_pi ? y : 0.0;
  }

  /// Standard normal via Box-Muller; consumes two uniforms per call.
  double normal() noexcept {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double exponential(double mean) noexcept { return -mean * std::log(uniform_open()); }

 private:
  std::uint64_t state_;
};

}  // namespace rgd
