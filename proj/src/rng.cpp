#include "kerr/rng.hpp"

#include <cmath>

namespace kerr {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t unit_index) {
  // Mix the pair so that nearby (seed, index) pairs give unrelated states.
  std::uint64_t st = master_seed ^ (0x6a09e667f3bcc909ULL + unit_index * 0x9e3779b97f4a7c15ULL);
  for (auto& s : s_) s = splitmix64(st);
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // Box-Muller; reject u1 == 0.
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  cached_ = r * std::sin(2.0 * pi * u2);
  has_cached_ = true;
  return r * std::cos(2.0 * pi * u2);
}

complex RngStream::cnormal() {
  const double sc = std::sqrt(0.5);
  const double re = normal();
  const double im = normal();
  return {sc * re, sc * im};
}

}  // namespace kerr
