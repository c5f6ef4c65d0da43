#include "dscrypt/numtheory.hpp"

namespace dscrypt::nt {

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    const std::uint64_t r = a % b;
    a = b;
    b = r;
  }
  return a;
}

Bezout ext_gcd(std::uint64_t a, std::uint64_t b) {
  __int128 old_r = a, r = b;
  __int128 old_s = 1, s = 0;
  __int128 old_t = 0, t = 1;
  while (r != 0) {
    const __int128 q = old_r / r;
    __int128 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  return {static_cast<std::uint64_t>(old_r), old_s, old_t};
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (std::uint64_t d = 5; d <= n / d; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  auto take = [&](std::uint64_t d) {
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e) out.emplace_back(d, e);
  };
  take(2);
  take(3);
  for (std::uint64_t d = 5; d <= n / d; d += 6) {
    take(d);
    take(d + 2);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::uint64_t checked_pow(std::uint64_t b, unsigned e) {
  unsigned __int128 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    r *= b;
    if (r > UINT64_MAX) return 0;
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace dscrypt::nt
