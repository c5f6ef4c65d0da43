#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace dscrypt::nt {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  if ((a | b) >> 32 == 0) return a * b % m;
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  const std::uint64_t s = a + b;
  return (s < a || s >= m) ? s - m : s;
}

inline std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a >= b ? a - b : a + (m - b);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

/// Returns g = gcd(a, b) and Bezout coefficients s, t with s*a + t*b = g.
struct Bezout {
  std::uint64_t g;
  __int128 s;
  __int128 t;
};
Bezout ext_gcd(std::uint64_t a, std::uint64_t b);

/// Trial-division primality test.
bool is_prime(std::uint64_t n);

/// Prime factorisation by trial division, as (prime, multiplicity) pairs.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

/// b^e, or 0 when the result does not fit in 64 bits.
std::uint64_t checked_pow(std::uint64_t b, unsigned e);

}  // namespace dscrypt::nt
