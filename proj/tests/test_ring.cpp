#include <doctest.h>

#include <map>

#include "dscrypt/errors.hpp"
#include "dscrypt/numtheory.hpp"
#include "dscrypt/ring.hpp"

using namespace dscrypt;

namespace {

// Schoolbook product of two F_{p^m} elements reduced by the defining
// polynomial, independent of the ring's table arithmetic.
Code naive_ext_mul(const Ring& r, Code a, Code b) {
  const auto p = r.characteristic();
  const auto m = r.extension_degree();
  auto ca = r.coefficients(a), cb = r.coefficients(b);
  std::vector<std::uint64_t> prod(2 * m, 0);
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
  const auto& f = r.defining_polynomial();
  for (unsigned d = 2 * m - 1; d >= m; --d) {
    const auto c = prod[d];
    if (!c) continue;
    for (unsigned i = 0; i <= m; ++i) prod[d - m + i] = (prod[d - m + i] + (p - c) * f[i]) % p;
  }
  prod.resize(m);
  return r.from_coefficients(prod);
}

Code inverse_by_search(const Ring& r, Code a) {
  for (Code x = 0; x < r.size(); ++x)
    if (r.mul(a, x) == r.one()) return x;
  return r.size();
}

}  // namespace

TEST_CASE("ring_add examples") {
  auto f5 = Ring::prime_field(5);
  CHECK(ring_add(f5->element(2), f5->element(3)).value() == 0);

  auto f4 = Ring::parse("Fq:2^2:1,1,1");
  const Code x = 2;  // coefficient vector (0, 1)
  CHECK(f4->add(x, x) == 0);

  auto z6 = Ring::modular(6);
  CHECK(ring_add(z6->element(4), z6->element(5)).value() == 3);
}

TEST_CASE("ring_mul examples") {
  auto f7 = Ring::prime_field(7);
  CHECK(ring_mul(f7->element(3), f7->element(5)).value() == 1);

  auto f4 = Ring::parse("Fq:2^2:1,1,1");
  CHECK(f4->mul(2, 3) == 1);
  CHECK(naive_ext_mul(*f4, 2, 3) == 1);

  auto z6 = Ring::modular(6);
  CHECK(ring_mul(z6->element(2), z6->element(3)).value() == 0);
}

TEST_CASE("extension multiplication agrees with schoolbook oracle") {
  for (const char* d : {"Fq:2^3:1,1,0,1", "Fq:3^2:2,2,1", "Fq:5^2:2,0,1", "Fq:2^4:1,1,0,0,1"}) {
    auto r = Ring::parse(d);
    for (Code a = 0; a < r->size(); ++a)
      for (Code b = 0; b < r->size(); ++b) REQUIRE(r->mul(a, b) == naive_ext_mul(*r, a, b));
  }
}

TEST_CASE("ring_inverse") {
  auto f7 = Ring::prime_field(7);
  CHECK(inverse_by_search(*f7, 3) == 5);
  CHECK(ring_inverse(f7->element(3)).value() == 5);

  auto f4 = Ring::parse("Fq:2^2:1,1,1");
  CHECK(inverse_by_search(*f4, 2) == 3);
  CHECK(f4->inv(2) == 3);

  auto z6 = Ring::modular(6);
  CHECK_THROWS_AS(ring_inverse(z6->element(2)), NotAUnit);
  CHECK_THROWS_AS(f7->inv(0), NotAUnit);
  CHECK(z6->inv(5) == 5);

  for (const char* d : {"Z:12", "Z:35", "Fp:13", "Fq:3^2:2,2,1"}) {
    auto r = Ring::parse(d);
    for (Code a = 0; a < r->size(); ++a) {
      const Code s = inverse_by_search(*r, a);
      CHECK(r->is_unit(a) == (s < r->size()));
      if (s < r->size()) CHECK(r->inv(a) == s);
    }
  }
}

TEST_CASE("ring_sample_uniform is deterministic and roughly uniform") {
  auto f2 = Ring::prime_field(2);
  SeedStream a(17), b(17);
  CHECK(ring_sample_uniform(f2, a).value() == ring_sample_uniform(f2, b).value());

  auto f5 = Ring::prime_field(5);
  SeedStream c(99);
  SeedStream d = c;
  CHECK(ring_sample_uniform(f5, c).value() == ring_sample_uniform(f5, d).value());

  auto z6 = Ring::modular(6);
  SeedStream s(2024);
  std::map<Code, int> counts;
  for (int i = 0; i < 6000; ++i) counts[ring_sample_uniform(z6, s).value()]++;
  REQUIRE(counts.size() == 6);
  for (auto [v, c6] : counts) {
    CHECK(c6 >= 900);
    CHECK(c6 <= 1100);
  }
}

TEST_CASE("ring axioms on random triples") {
  for (const char* d : {"Fp:2", "Fp:7", "Fp:65521", "Z:6", "Z:1000000007", "Z:18446744073709551557",
                        "Fq:2^2:1,1,1", "Fq:3^3:1,2,0,1", "Fq:2^8:1,0,1,1,1,0,0,0,1"}) {
    CAPTURE(d);
    auto r = Ring::parse(d);
    SeedStream rng(5);
    for (int i = 0; i < 300; ++i) {
      const Code a = r->sample(rng), b = r->sample(rng), c = r->sample(rng);
      REQUIRE(r->add(a, r->add(b, c)) == r->add(r->add(a, b), c));
      REQUIRE(r->mul(a, r->mul(b, c)) == r->mul(r->mul(a, b), c));
      REQUIRE(r->add(a, b) == r->add(b, a));
      REQUIRE(r->mul(a, b) == r->mul(b, a));
      REQUIRE(r->mul(a, r->add(b, c)) == r->add(r->mul(a, b), r->mul(a, c)));
      REQUIRE(r->add(a, r->neg(a)) == 0);
      REQUIRE(r->sub(a, b) == r->add(a, r->neg(b)));
      if (r->is_unit(a)) REQUIRE(r->mul(a, r->inv(a)) == r->one());
      REQUIRE(r->is_canonical(r->mul(a, b)));
    }
  }
}

TEST_CASE("element orders divide p^m - 1 in small extension fields") {
  for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{
           {2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 6}, {3, 2}, {3, 3}, {5, 2}, {7, 2}}) {
    auto r = Ring::galois_field(p, m);
    const std::uint64_t q1 = r->size() - 1;
    for (Code a = 1; a < r->size(); ++a) {
      Code x = a;
      std::uint64_t order = 1;
      while (x != 1) {
        x = r->mul(x, a);
        ++order;
      }
      REQUIRE(q1 % order == 0);
    }
  }
}

TEST_CASE("ring descriptors") {
  for (const char* d : {"Fp:257", "Z:6", "Fq:2^2:1,1,1", "Fq:3^2:2,2,1"}) {
    CHECK(Ring::parse(d)->descriptor() == d);
  }
  CHECK(Ring::galois_field(2, 3)->descriptor() == "Fq:2^3:1,1,0,1");
  CHECK_THROWS_AS(Ring::parse("Fp:6"), InvalidRing);
  CHECK_THROWS_AS(Ring::parse("Fq:2^2:1,0,1"), InvalidRing);  // (x+1)^2
  CHECK_THROWS_AS(Ring::parse("Fq:2^2:1,1,0"), InvalidRing);  // not monic
  CHECK_THROWS_AS(Ring::parse("Z:1"), InvalidRing);
  CHECK_THROWS_AS(Ring::parse("Q:5"), ParseError);
  CHECK_THROWS_AS(Ring::parse("Fq:2^3:1,1,1"), ParseError);
}

TEST_CASE("elements of different rings do not mix") {
  auto f5 = Ring::prime_field(5);
  auto f7 = Ring::prime_field(7);
  CHECK_THROWS_AS(f5->element(1) + f7->element(1), RingMismatch);
  // structurally equal descriptors interoperate
  auto f5b = Ring::parse("Fp:5");
  CHECK((f5->element(2) + f5b->element(3)).value() == 0);
}

TEST_CASE("number theory helpers") {
  CHECK(nt::is_prime(65521));
  CHECK_FALSE(nt::is_prime(65535));
  auto f = nt::factorize(2 * 2 * 3 * 7 * 7 * 65521ULL);
  REQUIRE(f.size() == 4);
  CHECK(f[0] == std::pair<std::uint64_t, unsigned>{2, 2});
  CHECK(f[3] == std::pair<std::uint64_t, unsigned>{65521, 1});
  CHECK(nt::checked_pow(2, 64) == 0);
  CHECK(nt::checked_pow(3, 4) == 81);
}
