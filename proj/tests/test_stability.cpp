#include <doctest.h>

#include <cmath>

#include "dscrypt/errors.hpp"
#include "dscrypt/stability.hpp"
#include "support.hpp"

using namespace dscrypt;
using namespace dscrypt::testing;

TEST_CASE("family member over F_2 with affine terminal colour") {
  auto f2 = Ring::prime_field(2);
  SeedStream rng(1);
  FamilySpec spec;
  spec.ring = f2;
  spec.k = 2;
  spec.degree = 2;
  spec.terminal = TerminalKind::kGeneralAffine;
  spec.terminal_map = affine_sample_invertible(f2, 2, rng);
  auto m = generate_stable_family_member(spec, rng);
  CHECK(m.map.degree() == 2);
  CHECK(is_balanced(m.key));
  auto cert = check_stability(m.map, 2, 10);
  CHECK(cert.valid);
  CHECK(cert.max_degree == 2);
  CHECK(cert.power_degrees.size() == 10);
  CHECK(m.map.density() >= m.density_low);
  CHECK(m.map.density() <= m.density_high);
}

TEST_CASE("Singer and cycle terminal colours fix the projection order") {
  auto f2 = Ring::prime_field(2);
  SeedStream rng(2);
  FamilySpec spec;
  spec.ring = f2;
  spec.k = 3;
  spec.degree = 3;
  spec.terminal = TerminalKind::kSinger;
  auto m = generate_stable_family_member(spec, rng);
  CHECK(m.map.degree() == 3);
  CHECK(projection_order(m.key) == 7);
  CHECK(matrix_order(AffineMap::from_polymap(colour_as_map(m.key.last())).matrix(), 7) == 7);

  spec.k = 4;
  spec.degree = 4;
  spec.terminal = TerminalKind::kCyclePermutation;
  auto c = generate_stable_family_member(spec, rng);
  CHECK(c.map.degree() == 4);
  CHECK(projection_order(c.key) == 4);
  CHECK(4.0 >= std::sqrt(20.0) - 1);
}

TEST_CASE("infeasible family boxes are reported") {
  FamilySpec spec;
  spec.ring = Ring::prime_field(3);
  spec.k = 2;
  spec.degree = 2;
  spec.density_exponent = 2.0;  // 36/2 = 18 monomials, only 3 are affine
  try {
    SeedStream rng(3);
    generate_stable_family_member(spec, rng);
    FAIL("expected UnreachableDensity");
  } catch (const UnreachableDensity& e) {
    CHECK(e.achievable_low() == 1);
    CHECK(e.achievable_high() == 3);
  }
  spec.density_exponent = 3.0;
  CHECK_THROWS_AS(spec.validate(), InvalidSpec);
  spec.density_exponent = 1.0;
  spec.degree = 1;
  CHECK_THROWS_AS(spec.validate(), InvalidSpec);
  spec.degree = 2;
  spec.ring = Ring::modular(6);
  spec.terminal = TerminalKind::kSinger;
  CHECK_THROWS_AS(spec.validate(), InvalidSpec);
  spec.terminal = TerminalKind::kGeneralAffine;
  CHECK_THROWS_AS(spec.validate(), InvalidSpec);
}

TEST_CASE("generate_stable_group_element") {
  SeedStream rng(4);
  for (const char* d : {"Fp:2", "Fp:3", "Fp:5", "Fq:2^2:1,1,1"}) {
    auto r = Ring::parse(d);
    for (int i = 0; i < 5; ++i) {
      auto [f, key] = generate_stable_group_element(r, 2, rng);
      auto [g, key2] = generate_stable_group_element(r, 2, rng);
      CHECK(f.degree() <= 2);
      auto fg = map_compose(f, g);
      CHECK(fg.degree() <= 2);
      CHECK(eta(key_product(key, key2)) == fg);
    }
  }
  auto f2 = Ring::prime_field(2);
  for (int i = 0; i < 5; ++i) {
    auto [f, key] = generate_stable_group_element(f2, 2, rng);
    CHECK(map_order_bruteforce(f) % 3 == 0);
    CHECK(projection_order(key) == 3);
  }
  CHECK_THROWS_AS(generate_stable_group_element(Ring::modular(6), 2, rng), InvalidSpec);
  auto [h, hk] = generate_stable_group_element(Ring::modular(6), 2, rng, TerminalKind::kGeneralAffine);
  CHECK(h.degree() <= 2);
  CHECK(hk.invertible());
}

TEST_CASE("check_stability") {
  auto f5 = Ring::prime_field(5);
  SeedStream rng(5);
  auto t = affine_sample_invertible(f5, 3, rng).to_polymap();
  CHECK(check_stability(t, 1, 5).valid);

  auto [e, key] = generate_stable_group_element(f5, 2, rng);
  auto cert = check_stability(e, 2, 10);
  CHECK(cert.valid);
  CHECK(cert.to_text().find("certificate.valid=true") != std::string::npos);
  CHECK(check_key_stability(key, 2, 10).max_degree == cert.max_degree);

  auto tri = PolyMap(f5, {Polynomial::parse("1*x1 + 1*x2^2", f5, 2), Polynomial::parse("1*x2", f5, 2)});
  CHECK(check_stability(tri, 2, 3).valid);

  auto bad = PolyMap(f5, {Polynomial::parse("1*x1 + 1*x2^2", f5, 2), Polynomial::parse("1*x2 + 1*x1^2", f5, 2)});
  try {
    check_stability(bad, 2, 5);
    FAIL("expected DegreeExceeded");
  } catch (const DegreeExceeded& ex) {
    CHECK(ex.power() == 2);
    CHECK(ex.degree() == 4);
  }
  CHECK_THROWS_AS(check_stability(tri, 1, 3), DegreeExceeded);
  CHECK_THROWS_AS(check_stability(tri, 2, 0), InvalidSpec);
}

TEST_CASE("balanced keys with affine terminal colour are stable") {
  SeedStream rng(6);
  for (std::size_t k = 2; k <= 3; ++k) {
    for (int T = 2; T <= 3; ++T) {
      FamilySpec spec;
      spec.ring = Ring::prime_field(3);
      spec.k = k;
      spec.degree = T;
      spec.terminal = TerminalKind::kGeneralAffine;
      spec.terminal_map = affine_sample_invertible(spec.ring, k, rng);
      auto m = generate_stable_family_member(spec, rng);
      REQUIRE(is_balanced(m.key));
      CHECK(check_key_stability(m.key, T, 10).valid);
      if (k == 2) CHECK(check_stability(m.map, T, 10).valid);
    }
  }
}

TEST_CASE("projection order law") {
  auto f3 = Ring::prime_field(3);
  SeedStream rng(7);
  auto [f, key] = generate_stable_group_element(f3, 2, rng);
  const auto g = colour_as_map(key.last());
  const std::vector<std::uint32_t> vm{0, 1};
  for (std::uint64_t m = 1; m <= 8; ++m) {
    auto fm = map_power(f, m);
    auto gm = map_power(g, m);
    for (std::size_t i = 0; i < 2; ++i) CHECK(fm[i] == gm[i].remap(6, vm));
  }
}

TEST_CASE("measure_family_density") {
  std::vector<std::pair<std::size_t, std::size_t>> sq{{6, 36}, {12, 144}, {20, 400}, {30, 900}};
  CHECK(measure_family_density(sq).exponent == doctest::Approx(2.0).epsilon(0.005));
  CHECK(measure_family_density(sq).residual < 1e-9);

  auto f5 = Ring::prime_field(5);
  std::vector<std::pair<std::size_t, PolyMap>> affine;
  for (std::size_t n : {3, 6, 12, 20}) {
    std::vector<Polynomial> cs;
    for (std::size_t i = 0; i < n; ++i) {
      Polynomial p(f5, n);
      for (std::size_t j = 0; j < n; ++j) p = p + Polynomial::variable(f5, n, static_cast<std::uint32_t>(j));
      cs.push_back(p);
    }
    affine.emplace_back(n, PolyMap(f5, cs));
  }
  CHECK(measure_family_density(affine).exponent == doctest::Approx(1.0).epsilon(0.01));

  SeedStream rng(8);
  std::vector<std::pair<std::size_t, PolyMap>> fam;
  for (std::size_t k = 2; k <= 4; ++k) {
    FamilySpec spec;
    spec.ring = f5;
    spec.k = k;
    spec.degree = 3;
    spec.density_exponent = 1.0;
    spec.terminal = TerminalKind::kSinger;
    fam.emplace_back(schubert_dimension(k), generate_stable_family_member(spec, rng).map);
  }
  const double d = measure_family_density(fam).exponent;
  CHECK(d >= 0.5);
  CHECK(d <= 1.5);

  std::vector<std::pair<std::size_t, std::size_t>> few{{6, 3}, {6, 4}, {12, 5}};
  CHECK_THROWS_AS(measure_family_density(few), InsufficientData);
}
