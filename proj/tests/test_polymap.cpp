#include <doctest.h>

#include <numeric>
#include <set>

#include "dscrypt/errors.hpp"
#include "dscrypt/polymap.hpp"

using namespace dscrypt;

namespace {

PolyMap random_map(const RingPtr& r, std::size_t n, int max_deg, int terms, SeedStream& rng) {
  std::vector<Polynomial> cs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Term> ts;
    for (int t = 0; t < terms; ++t) {
      std::vector<std::uint32_t> e(n, 0);
      int budget = static_cast<int>(rng.uniform(max_deg + 1));
      while (budget-- > 0) e[rng.uniform(n)]++;
      ts.push_back({Monomial::from_exponents(e), r->sample(rng)});
    }
    cs.push_back(Polynomial::from_terms(r, n, std::move(ts)));
  }
  return PolyMap(r, std::move(cs));
}

// All points of K^n in mixed-radix order.
std::vector<std::vector<Code>> all_points(const RingPtr& r, std::size_t n) {
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

// Order by repeated application to every point.
std::uint64_t order_by_iteration(const PolyMap& f) {
  std::uint64_t result = 1;
  for (const auto& p : all_points(f.ring(), f.dimension())) {
    auto x = f.apply(p);
    std::uint64_t len = 1;
    while (x != p) {
      x = f.apply(x);
      ++len;
    }
    result = std::lcm(result, len);
  }
  return result;
}

// Singular-or-not by enumerating all matrix products with candidate inverses.
bool invertible_by_search(const Matrix& m) {
  const auto& R = m.ring();
  const std::size_t n = m.size();
  std::vector<Code> entries(n * n, 0);
  while (true) {
    Matrix c(R, n);
    for (std::size_t i = 0; i < n * n; ++i) c.at(i / n, i % n) = entries[i];
    if ((m * c).is_identity()) return true;
    std::size_t i = 0;
    while (i < n * n && ++entries[i] == R->size()) entries[i++] = 0;
    if (i == n * n) return false;
  }
}

}  // namespace

TEST_CASE("map_compose") {
  auto f3 = Ring::prime_field(3);
  SeedStream rng(1);
  auto g = random_map(f3, 2, 2, 4, rng);
  CHECK(map_compose(PolyMap::identity(f3, 2), g) == g);
  CHECK(map_compose(g, PolyMap::identity(f3, 2)) == g);

  auto f5 = Ring::prime_field(5);
  auto tb = AffineMap::translation(f5, {1, 3}).to_polymap();
  auto tc = AffineMap::translation(f5, {4, 4}).to_polymap();
  CHECK(map_compose(tb, tc) == AffineMap::translation(f5, {0, 2}).to_polymap());

  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_map(f3, 2, 2, 4, rng);
    auto h = random_map(f3, 2, 2, 4, rng);
    auto fh = map_compose(f, h);
    for (const auto& p : all_points(f3, 2)) CHECK(fh.apply(p) == h.apply(f.apply(p)));
    CHECK(fh.degree() <= f.degree() * h.degree());
  }
}

TEST_CASE("composition is associative") {
  auto r = Ring::prime_field(7);
  SeedStream rng(2);
  for (int i = 0; i < 15; ++i) {
    auto a = random_map(r, 3, 2, 3, rng);
    auto b = random_map(r, 3, 2, 3, rng);
    auto c = random_map(r, 3, 1, 3, rng);
    CHECK(map_compose(map_compose(a, b), c) == map_compose(a, map_compose(b, c)));
  }
}

TEST_CASE("map_power") {
  auto f3 = Ring::prime_field(3);
  SeedStream rng(4);
  auto f = random_map(f3, 2, 2, 3, rng);
  CHECK(map_power(f, 0).is_identity());
  CHECK(map_power(f, 1) == f);
  for (std::uint64_t a = 0; a < 4; ++a)
    for (std::uint64_t b = 0; b < 4; ++b)
      CHECK(map_power(f, a + b) == map_compose(map_power(f, a), map_power(f, b)));

  auto f2 = Ring::prime_field(2);
  auto s = singer_cycle(f2, 2);
  CHECK(map_power(s.to_polymap(), 3).is_identity());
  CHECK(s.matrix().pow(3).is_identity());
  CHECK(matrix_order_bruteforce(s.matrix(), 100) == 3);

  // x1 -> x1^2 has degree 2^e after e steps
  auto sq = PolyMap(f3, {Polynomial::parse("1*x1^2", f3, 1)});
  CHECK_THROWS_AS(map_power(sq, 5, 8), DegreeBlowup);
  CHECK(map_power(sq, 3, 8).degree() == 8);
}

TEST_CASE("affine_inverse") {
  auto f7 = Ring::prime_field(7);
  auto id = AffineMap::identity(f7, 3);
  CHECK(affine_inverse(id) == id);
  CHECK(affine_inverse(AffineMap::translation(f7, {1, 2, 3})) == AffineMap::translation(f7, {6, 5, 4}));

  SeedStream rng(9);
  for (int i = 0; i < 30; ++i) {
    auto t = affine_sample_invertible(f7, 3, rng);
    auto ti = affine_inverse(t);
    CHECK((t.matrix() * ti.matrix()).is_identity());
    CHECK((ti.matrix() * t.matrix()).is_identity());
    CHECK(affine_compose(t, ti) == id);
    CHECK(affine_compose(ti, t) == id);
    CHECK(map_compose(t.to_polymap(), ti.to_polymap()).is_identity());
  }

  Matrix sing(f7, 2);
  sing.at(0, 0) = 1;
  sing.at(0, 1) = 2;
  sing.at(1, 0) = 3;
  sing.at(1, 1) = 6;
  CHECK_THROWS_AS(affine_inverse(AffineMap::linear(sing)), NotInvertible);
}

TEST_CASE("matrix inverse over Z_m agrees with exhaustive search") {
  auto z6 = Ring::modular(6);
  SeedStream rng(10);
  int invertible = 0;
  for (int i = 0; i < 60; ++i) {
    Matrix m(z6, 2);
    for (std::size_t j = 0; j < 4; ++j) m.at(j / 2, j % 2) = z6->sample(rng);
    const bool expect = invertible_by_search(m);
    CHECK(z6->is_unit(m.determinant()) == expect);
    auto inv = m.inverse();
    CHECK(inv.has_value() == expect);
    if (inv) {
      ++invertible;
      CHECK((m * *inv).is_identity());
      CHECK((*inv * m).is_identity());
    }
  }
  CHECK(invertible > 0);
}

TEST_CASE("affine_sample_invertible") {
  auto f2 = Ring::prime_field(2);
  std::set<std::vector<Code>> seen;
  SeedStream rng(12);
  for (int i = 0; i < 100; ++i) {
    auto t = affine_sample_invertible(f2, 1, rng);
    CHECK(t.matrix().at(0, 0) == 1);
    seen.insert({t.matrix().at(0, 0), t.shift()[0]});
  }
  CHECK(seen.size() == 2);

  auto f5 = Ring::prime_field(5);
  for (int i = 0; i < 100; ++i) {
    auto t = affine_sample_invertible(f5, 4, rng);
    CHECK(f5->is_unit(t.matrix().determinant()));
  }

  // 6 of the 16 matrices over F_2 are invertible
  std::size_t total_rejected = 0;
  const int draws = 4000;
  for (int i = 0; i < draws; ++i) {
    std::size_t rej = 0;
    affine_sample_invertible(f2, 2, rng, &rej);
    total_rejected += rej;
  }
  const double rate = double(total_rejected) / double(total_rejected + draws);
  CHECK(rate == doctest::Approx(10.0 / 16.0).epsilon(0.05));
}

TEST_CASE("singer_cycle") {
  auto f2 = Ring::prime_field(2);
  CHECK(primitive_polynomial(f2, 2) == std::vector<Code>{1, 1, 1});
  CHECK(primitive_polynomial(f2, 3) == std::vector<Code>{1, 1, 0, 1});
  CHECK(matrix_order_bruteforce(singer_cycle(f2, 2).matrix(), 100) == 3);
  CHECK(matrix_order_bruteforce(singer_cycle(f2, 3).matrix(), 100) == 7);
  CHECK(matrix_order_bruteforce(singer_cycle(Ring::prime_field(3), 2).matrix(), 100) == 8);
  auto f4 = Ring::galois_field(2, 2);
  CHECK(matrix_order_bruteforce(singer_cycle(f4, 2).matrix(), 100) == 15);
}

TEST_CASE("map_conjugate") {
  auto f2 = Ring::prime_field(2);
  SeedStream rng(14);
  auto f = random_map(f2, 4, 2, 5, rng);
  CHECK(map_conjugate(AffineMap::identity(f2, 4), f) == f);

  for (int trial = 0; trial < 10; ++trial) {
    auto t = affine_sample_invertible(f2, 4, rng);
    auto ti = affine_inverse(t);
    auto c = map_conjugate(t, f);
    for (const auto& p : all_points(f2, 4)) CHECK(c.apply(p) == ti.apply(f.apply(t.apply(p))));
    CHECK(c == map_conjugate(t.to_polymap(), f, ti.to_polymap()));
  }

  // stable quadratic triangular map keeps degree 2 under affine conjugation
  auto f5 = Ring::prime_field(5);
  auto tri = PolyMap(f5, {Polynomial::parse("1*x1 + 1*x2^2", f5, 2), Polynomial::parse("1*x2", f5, 2)});
  for (int trial = 0; trial < 10; ++trial) {
    auto t = affine_sample_invertible(f5, 2, rng);
    auto c = map_conjugate(t, tri);
    CHECK(c.degree() == 2);
    CHECK(map_power(c, 7).degree() <= 2);
  }
}

TEST_CASE("map_order_bruteforce") {
  auto f5 = Ring::prime_field(5);
  CHECK(map_order_bruteforce(PolyMap::identity(f5, 2)) == 1);
  CHECK(map_order_bruteforce(AffineMap::translation(f5, {0, 2}).to_polymap()) == 5);
  auto f2 = Ring::prime_field(2);
  auto s = singer_cycle(f2, 3).to_polymap();
  CHECK(map_order_bruteforce(s) == 7);
  CHECK(order_by_iteration(s) == 7);

  SeedStream rng(15);
  for (int i = 0; i < 10; ++i) {
    auto t = affine_sample_invertible(Ring::prime_field(3), 3, rng).to_polymap();
    CHECK(map_order_bruteforce(t) == order_by_iteration(t));
  }

  auto sq = PolyMap(f5, {Polynomial::parse("1*x1^2", f5, 1)});
  CHECK_THROWS_AS(map_order_bruteforce(sq), NotBijective);
  CHECK_FALSE(is_bijective_bruteforce(sq));
  CHECK_THROWS_AS(map_order_bruteforce(PolyMap::identity(Ring::prime_field(257), 3)), TooLarge);
}

TEST_CASE("map text round trip") {
  auto r = Ring::parse("Fq:3^2:2,2,1");
  SeedStream rng(16);
  auto f = random_map(r, 3, 2, 4, rng);
  const auto text = f.to_text();
  CHECK(text.rfind("MAP ring=Fq:3^2:2,2,1 n=3\nx1 -> ", 0) == 0);
  CHECK(PolyMap::parse(text) == f);
  CHECK(PolyMap::parse(text).to_text() == text);
  CHECK_THROWS_AS(PolyMap::parse("MAP ring=Fp:5 n=2\nx1 -> 1*x1\n"), ParseError);
}
