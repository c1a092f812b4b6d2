#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "mulspace/common.hpp"

namespace mulspace {

/// Counter-based generator: philox4x32-10 (Salmon et al. round function,
/// ten rounds).  Every draw is addressed by (seed, stream, index), so any
/// sample can be regenerated in isolation and results do not depend on
/// evaluation order or thread count.
///
/// Algorithm identifier reported in configs: "philox4x32-10".
class Philox {
 public:
  Philox(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::array<std::uint32_t, 4> block(std::uint64_t index) const {
    std::uint32_t c0 = static_cast<std::uint32_t>(index);
    std::uint32_t c1 = static_cast<std::uint32_t>(index >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(stream_);
    std::uint32_t c3 = static_cast<std::uint32_t>(stream_ >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
    for (int round = 0; round < 10; ++round) {
      std::uint64_t p0 = 0xD2511F53ull * c0;
      std::uint64_t p1 = 0xCD9E8D57ull * c2;
      std::uint32_t h0 = static_cast<std::uint32_t>(p0 >> 32);
      std::uint32_t l0 = static_cast<std::uint32_t>(p0);
      std::uint32_t h1 = static_cast<std::uint32_t>(p1 >> 32);
      std::uint32_t l1 = static_cast<std::uint32_t>(p1);
      std::uint32_t n0 = h1 ^ c1 ^ k0;
      std::uint32_t n2 = h0 ^ c3 ^ k1;
      c0 = n0;
      c1 = l1;
      c2 = n2;
      c3 = l0;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    return {c0, c1, c2, c3};
  }

  /// Two independent uniforms in [0,1) per index, 53-bit resolution.
  double uniform(std::uint64_t index, int lane = 0) const {
    auto b = block(index);
    std::uint64_t bits = lane == 0
                             ? (static_cast<std::uint64_t>(b[1]) << 32) | b[0]
                             : (static_cast<std::uint64_t>(b[3]) << 32) | b[2];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  double uniform_in(std::uint64_t index, double lo, double hi, int lane = 0) const {
    return lo + (hi - lo) * uniform(index, lane);
  }

  /// Standard normal pair by Box-Muller; lane selects the component.
  double gaussian(std::uint64_t index, int lane = 0) const {
    auto b = block(index);
    std::uint64_t u1_bits = (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
    std::uint64_t u2_bits = (static_cast<std::uint64_t>(b[3]) << 32) | b[2];
    double u1 = (static_cast<double>(u1_bits >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    double u2 = static_cast<double>(u2_bits >> 11) * 0x1.0p-53;          // [0,1)
    double r = std::sqrt(-2.0 * std::log(u1));
    return lane == 0 ? r * std::cos(kTwoPi * u2) : r * std::sin(kTwoPi * u2);
  }

  cplx complex_gaussian(std::uint64_t index) const {
    return {gaussian(index, 0), gaussian(index, 1)};
  }

  static const char* algorithm() { return "philox4x32-10"; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace mulspace
