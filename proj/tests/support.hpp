#pragma once

#include <vector>

#include "dscrypt/polymap.hpp"
#include "dscrypt/schubert.hpp"

namespace dscrypt::testing {

inline Polynomial random_poly(const RingPtr& r, std::size_t n, int max_deg, int terms, SeedStream& rng) {
  std::vector<Term> ts;
  for (int t = 0; t < terms; ++t) {
    std::vector<std::uint32_t> e(n, 0);
    int budget = static_cast<int>(rng.uniform(max_deg + 1));
    while (budget-- > 0) e[rng.uniform(n)]++;
    ts.push_back({Monomial::from_exponents(e), r->sample(rng)});
  }
  return Polynomial::from_terms(r, n, std::move(ts));
}

inline SymbolicColour random_colour(const RingPtr& r, std::size_t k, int max_deg, int terms, SeedStream& rng) {
  SymbolicColour c;
  for (std::size_t i = 0; i < k; ++i) c.push_back(random_poly(r, k, max_deg, terms, rng));
  return c;
}

/// Even-length key; the last colour is an invertible affine map when asked.
inline SymbolicKey random_key(const RingPtr& r, std::size_t k, std::size_t len, int max_deg, SeedStream& rng,
                              bool invertible_last = true) {
  std::vector<SymbolicColour> cs;
  for (std::size_t i = 0; i + 1 < len; ++i) cs.push_back(random_colour(r, k, max_deg, 3, rng));
  if (len) {
    if (invertible_last)
      cs.push_back(colour_from_affine(affine_sample_invertible(r, k, rng)));
    else
      cs.push_back(random_colour(r, k, max_deg, 3, rng));
  }
  return SymbolicKey(r, k, std::move(cs));
}

inline std::vector<std::vector<Code>> all_points(const RingPtr& r, std::size_t n) {
  std::vector<std::vector<Code>> pts;
  std::vector<Code> x(n, 0);
  while (true) {
    pts.push_back(x);
    std::size_t i = 0;
    while (i < n && ++x[i] == r->size()) x[i++] = 0;
    if (i == n) break;
  }
  return pts;
}

inline std::vector<Code> random_point(const RingPtr& r, std::size_t n, SeedStream& rng) {
  std::vector<Code> x(n);
  for (auto& v : x) v = r->sample(rng);
  return x;
}

}  // namespace dscrypt::testing
