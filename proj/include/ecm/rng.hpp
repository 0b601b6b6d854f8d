/// \file rng.hpp
/// \brief Philox4x32-10 counter-based random streams.
///
/// Each sample index gets its own stream keyed by (seed, stream id), so
/// per-sample draws are independent of generation order and safe to produce
/// in parallel. All distributions are derived from the raw counters here
/// rather than from std:: distributions, which keeps output stable across
/// standard-library implementations.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ecm {

namespace detail {

struct PhiloxBlock {
  std::uint32_t v[4];
};

inline PhiloxBlock philox4x32(std::uint32_t k0, std::uint32_t k1, PhiloxBlock ctr) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr.v[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr.v[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {{hi1 ^ ctr.v[1] ^ k0, lo1, hi0 ^ ctr.v[3] ^ k1, lo0}};
    k0 += W0;
    k1 += W1;
  }
  return ctr;
}

}  // namespace detail

/// One independent stream of a counter-based generator.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint32_t next_u32() {
    if (have_ == 0) {
      detail::PhiloxBlock ctr{{static_cast<std::uint32_t>(block_),
                               static_cast<std::uint32_t>(block_ >> 32),
                               static_cast<std::uint32_t>(stream_),
                               static_cast<std::uint32_t>(stream_ >> 32)}};
      buf_ = detail::philox4x32(static_cast<std::uint32_t>(seed_),
                                static_cast<std::uint32_t>(seed_ >> 32), ctr);
      ++block_;
      have_ = 4;
    }
    return buf_.v[4 - have_--];
  }

  /// Uniform on [0,1) with 53 random bits.
  double uniform() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    const std::uint64_t bits = ((hi << 32) | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller; draws come in cached pairs.
  double normal() {
    if (have_normal_) {
      have_normal_ = false;
      return cached_normal_;
    }
    const double u1 = (static_cast<double>((static_cast<std::uint64_t>(next_u32()) << 32 |
                                            next_u32()) >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(ang);
    have_normal_ = true;
    return r * std::cos(ang);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  detail::PhiloxBlock buf_{{0, 0, 0, 0}};
  int have_ = 0;
  bool have_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace ecm
