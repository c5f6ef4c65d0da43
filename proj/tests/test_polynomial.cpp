#include <doctest.h>

#include "dscrypt/errors.hpp"
#include "dscrypt/polynomial.hpp"

using namespace dscrypt;

namespace {

Polynomial P(const char* text, const RingPtr& r, std::size_t n) { return Polynomial::parse(text, r, n); }

Polynomial random_poly(const RingPtr& r, std::size_t n, int max_deg, int terms, SeedStream& rng) {
  std::vector<Term> ts;
  for (int t = 0; t < terms; ++t) {
    std::vector<std::uint32_t> e(n, 0);
    int budget = static_cast<int>(rng.uniform(max_deg + 1));
    while (budget-- > 0) e[rng.uniform(n)]++;
    ts.push_back({Monomial::from_exponents(e), r->sample(rng)});
  }
  return Polynomial::from_terms(r, n, std::move(ts));
}

// Dense evaluation straight from the exponent vectors.
Code eval_oracle(const Polynomial& f, std::span<const Code> x) {
  const auto& R = *f.ring();
  Code acc = 0;
  for (const auto& t : f.terms()) {
    Code v = t.coeff;
    auto e = t.monomial.exponents(f.nvars());
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::uint32_t j = 0; j < e[i]; ++j) v = R.mul(v, x[i]);
    acc = R.add(acc, v);
  }
  return acc;
}

}  // namespace

TEST_CASE("poly_add") {
  auto f5 = Ring::prime_field(5);
  CHECK(poly_add(P("1*x1 + 1*x2", f5, 2), P("4*x1", f5, 2)) == P("1*x2", f5, 2));
  auto f = P("3*x1^2*x2 + 2", f5, 2);
  CHECK(poly_add(f, Polynomial(f5, 2)) == f);
  auto f2 = Ring::prime_field(2);
  CHECK(poly_add(P("1*x1", f2, 2), P("1*x1", f2, 2)).is_zero());
  CHECK_THROWS_AS(poly_add(P("1*x1", f2, 2), P("1*x1", f2, 3)), ShapeMismatch);
  CHECK_THROWS_AS(poly_add(P("1*x1", f2, 2), P("1*x1", f5, 2)), RingMismatch);
}

TEST_CASE("poly_mul") {
  auto f7 = Ring::prime_field(7);
  CHECK(poly_mul(P("1*x1 + 1*x2", f7, 2), P("1*x1 + 6*x2", f7, 2)) == P("1*x1^2 + 6*x2^2", f7, 2));
  auto f = P("3*x1^2*x2 + 2*x2 + 5", f7, 2);
  CHECK(poly_mul(f, Polynomial::constant(f7, 2, 1)) == f);
  auto f2 = Ring::prime_field(2);
  auto g = P("1*x1 + 1", f2, 1);
  CHECK(poly_mul(g, g) == P("1*x1^2 + 1", f2, 1));
}

TEST_CASE("poly_substitute") {
  auto f3 = Ring::prime_field(3);
  auto f = P("1*x1*x2", f3, 2);
  std::vector<Polynomial> args{P("1*x1 + 1*x2", f3, 2), P("1*x1", f3, 2)};
  auto s = poly_substitute(f, args);
  CHECK(s == P("1*x1^2 + 1*x1*x2", f3, 2));
  for (Code a = 0; a < 3; ++a)
    for (Code b = 0; b < 3; ++b) {
      const std::vector<Code> pt{a, b};
      const std::vector<Code> inner{f3->add(a, b), a};
      CHECK(s.eval(pt) == f.eval(inner));
    }

  SeedStream rng(3);
  auto g = random_poly(f3, 3, 3, 6, rng);
  std::vector<Polynomial> vars;
  for (std::uint32_t i = 0; i < 3; ++i) vars.push_back(Polynomial::variable(f3, 3, i));
  CHECK(poly_substitute(g, vars) == g);

  auto c = Polynomial::constant(f3, 2, 2);
  CHECK(poly_substitute(c, args) == Polynomial::constant(f3, 2, 2));

  CHECK_THROWS_AS(poly_substitute(f, std::span(args).first(1)), ShapeMismatch);
}

TEST_CASE("poly_eval") {
  auto f5 = Ring::prime_field(5);
  auto f = P("1*x1*x2 + 1", f5, 2);
  const std::vector<Code> pt{2, 3};
  CHECK(poly_eval(f, pt) == 2);
  CHECK(poly_eval(Polynomial(f5, 2), pt) == 0);
  CHECK_THROWS_AS(poly_eval(f, std::span(pt).first(1)), ShapeMismatch);

  auto f7 = Ring::prime_field(7);
  SeedStream rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = random_poly(f7, 4, 4, 8, rng);
    std::vector<Code> x(4);
    std::vector<Polynomial> consts;
    for (auto& v : x) {
      v = f7->sample(rng);
      consts.push_back(Polynomial::constant(f7, 1, v));
    }
    auto s = poly_substitute(g, consts);
    REQUIRE(s.is_constant());
    CHECK(s.constant_term() == poly_eval(g, x));
    CHECK(eval_oracle(g, x) == poly_eval(g, x));
  }
}

TEST_CASE("poly_degree and poly_density") {
  auto f5 = Ring::prime_field(5);
  auto f = P("1*x1^2*x2 + 1*x3", f5, 3);
  CHECK(poly_degree(f) == 3);
  CHECK(poly_density(f) == 2);
  CHECK(poly_density(Polynomial(f5, 3)) == 0);
  CHECK(poly_degree(Polynomial(f5, 3)) == kZeroDegree);
  auto f2 = Ring::prime_field(2);
  auto s = P("1*x1 + 1*x2", f2, 2);
  auto sq = s * s;
  CHECK(poly_degree(sq) == 2);
  CHECK(poly_density(sq) == 2);
}

TEST_CASE("text form round trip") {
  auto f4 = Ring::parse("Fq:2^2:1,1,1");
  auto f = P("3*x1^2*x3 + 2*x2 + 1", f4, 3);
  CHECK(f.to_string() == "3*x1^2*x3 + 2*x2 + 1");
  CHECK(Polynomial(f4, 3).to_string() == "0");
  CHECK(P("0", f4, 3).is_zero());

  auto f11 = Ring::prime_field(11);
  SeedStream rng(8);
  for (int i = 0; i < 50; ++i) {
    auto g = random_poly(f11, 5, 5, 10, rng);
    CHECK(P(g.to_string().c_str(), f11, 5) == g);
    CHECK(Polynomial::parse(g.to_string("z"), f11, 5, "z") == g);
  }
  // terms in any order are normalized
  CHECK(P("1*x2 + 1*x1", f11, 2).to_string() == "1*x1 + 1*x2");
  CHECK_THROWS_AS(P("1*x4", f11, 3), ParseError);
  CHECK_THROWS_AS(P("1*y1", f11, 3), ParseError);
  CHECK_THROWS_AS(P("12*x1", f11, 3), ParseError);
}

TEST_CASE("canonical order is descending lex with x1 most significant") {
  auto f5 = Ring::prime_field(5);
  auto f = P("1 + 1*x2^5 + 1*x1*x3 + 1*x1*x2", f5, 3);
  CHECK(f.to_string() == "1*x1*x2 + 1*x1*x3 + 1*x2^5 + 1");
  CHECK(f.normalized() == f);
  CHECK(f.normalized().normalized() == f.normalized());
}

TEST_CASE("evaluation is a ring homomorphism") {
  for (const char* d : {"Fp:7", "Z:12", "Fq:3^2:2,2,1"}) {
    auto r = Ring::parse(d);
    SeedStream rng(21);
    for (int i = 0; i < 40; ++i) {
      auto f = random_poly(r, 3, 3, 6, rng);
      auto g = random_poly(r, 3, 3, 6, rng);
      std::vector<Code> x{r->sample(rng), r->sample(rng), r->sample(rng)};
      CHECK((f + g).eval(x) == r->add(f.eval(x), g.eval(x)));
      CHECK((f * g).eval(x) == r->mul(f.eval(x), g.eval(x)));
      CHECK((f - g).eval(x) == r->sub(f.eval(x), g.eval(x)));
      CHECK(poly_degree(f * g) <= std::max(0, poly_degree(f)) + std::max(0, poly_degree(g)));
    }
  }
}

TEST_CASE("substitution is associative and respects the degree bound") {
  auto r = Ring::prime_field(5);
  SeedStream rng(77);
  for (int i = 0; i < 25; ++i) {
    auto f = random_poly(r, 2, 3, 5, rng);
    std::vector<Polynomial> g{random_poly(r, 3, 2, 4, rng), random_poly(r, 3, 2, 4, rng)};
    std::vector<Polynomial> h{random_poly(r, 2, 2, 3, rng), random_poly(r, 2, 2, 3, rng),
                              random_poly(r, 2, 2, 3, rng)};
    auto lhs = f.substitute(g).substitute(h);
    std::vector<Polynomial> gh{g[0].substitute(h), g[1].substitute(h)};
    CHECK(lhs == f.substitute(gh));

    auto fg = f.substitute(g);
    int maxg = 0;
    for (auto& p : g) maxg = std::max(maxg, p.degree());
    if (!fg.is_zero()) CHECK(fg.degree() <= f.degree() * maxg);

    auto all = substitute_all(std::vector<Polynomial>{f, f * f}, g);
    CHECK(all[0] == fg);
    CHECK(all[1] == fg * fg);
  }
}
