#pragma once

#include <cstdint>
#include <string_view>

namespace dscrypt {

/// Counter-based deterministic random stream.
///
/// Output i is splitmix64(key + i * golden), so a stream is fully described
/// by (key, counter) and every transcript can be replayed from its seed.
/// Streams are single-owner; use fork() to hand independent streams to
/// separate parties.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  std::uint64_t next_u64() { return mix(key_ + (counter_++) * kGolden); }

  /// Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t uniform(std::uint64_t bound) {
    if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
    // rejection on the largest multiple of bound
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % bound;
  }

  /// Uniform integer in [lo, hi], lo <= hi.
  std::uint64_t uniform_between(std::uint64_t lo, std::uint64_t hi) {
    if (hi - lo == UINT64_MAX) return next_u64();
    return lo + uniform(hi - lo + 1);
  }

  /// Derive an independent child stream; the parent advances by one draw.
  SeedStream fork(std::string_view label = {}) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
    return SeedStream(next_u64() ^ h);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dscrypt
