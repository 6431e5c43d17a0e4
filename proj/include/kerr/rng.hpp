#pragma once

#include <cstdint>

#include "kerr/common.hpp"

namespace kerr {

/// Counter-free deterministic RNG stream. Each parallel work unit owns a
/// stream keyed by (master_seed, unit_index); results are then independent
/// of the worker count. The generator is xoshiro256** seeded via splitmix64,
/// with a hand-rolled Box-Muller so that draws do not depend on the C++
/// library's distribution internals.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t unit_index);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  /// Standard normal deviate.
  double normal();
  /// Complex normal with independent N(0, 1/2) real and imaginary parts,
  /// so that E|z|^2 = 1.
  complex cnormal();

 private:
  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace kerr
