#include <doctest.h>

#include "dscrypt/errors.hpp"
#include "dscrypt/schubert.hpp"
#include "support.hpp"

using namespace dscrypt;
using namespace dscrypt::testing;

namespace {

// Numeric walk with every colour evaluated at the start point's free part.
std::vector<Code> walk_oracle(const SymbolicKey& key, std::span<const Code> x) {
  auto start = point_from_vector(x, key.k());
  std::vector<std::vector<Code>> colours;
  for (const auto& c : key.colours()) colours.push_back(colour_eval(c, start.free));
  return vertex_to_vector(walk_numeric(*key.ring(), start, colours));
}

}  // namespace

TEST_CASE("neighbour") {
  auto f5 = Ring::prime_field(5);
  SchubertVertex p{SchubertVertex::kPoint, {1}, {2}};
  const std::vector<Code> a{3};
  auto l = neighbour(*f5, p, a);
  CHECK(l.kind == SchubertVertex::kLine);
  CHECK(l.free == std::vector<Code>{3});
  CHECK(l.grid == std::vector<Code>{4});
  CHECK(neighbour(*f5, l, p.free) == p);

  auto f7 = Ring::prime_field(7);
  SeedStream rng(1);
  for (int i = 0; i < 100; ++i) {
    auto v = point_from_vector(random_point(f7, 12, rng), 3);
    auto c = random_point(f7, 3, rng);
    auto w = neighbour(*f7, v, c);
    CHECK(incident(*f7, v, w));
    CHECK(neighbour(*f7, w, v.free) == v);
    auto c2 = random_point(f7, 3, rng);
    auto u = neighbour(*f7, w, c2);
    CHECK(incident(*f7, u, w));
    CHECK(u.free == c2);
  }
  CHECK_THROWS_AS(neighbour(*f7, point_from_vector(random_point(f7, 12, rng), 3), a), ShapeMismatch);
}

TEST_CASE("walk_numeric parity") {
  auto f3 = Ring::prime_field(3);
  auto start = point_from_vector(std::vector<Code>{1, 2, 0, 1, 2, 2}, 2);
  std::vector<std::vector<Code>> colours;
  CHECK(walk_numeric(*f3, start, colours) == start);
  colours.push_back({1, 1});
  CHECK(walk_numeric(*f3, start, colours).kind == SchubertVertex::kLine);
  colours.push_back({2, 0});
  CHECK(walk_numeric(*f3, start, colours).kind == SchubertVertex::kPoint);
}

TEST_CASE("eta examples") {
  auto f3 = Ring::prime_field(3);
  SeedStream rng(2);
  auto g = random_colour(f3, 2, 2, 3, rng);
  SymbolicKey k1(f3, 2, {g, colour_identity(f3, 2)});
  CHECK(eta(k1).is_identity());

  auto z1 = [&](const char* s) { return Polynomial::parse(s, f3, 1, "z"); };
  SymbolicKey k2(f3, 1, {{z1("1*z1 + 1")}, {z1("1*z1")}});
  CHECK(eta(k2).is_identity());

  SymbolicKey k3(f3, 1, {{z1("1*z1 + 1")}, {z1("2*z1")}});
  auto F = eta(k3);
  for (const auto& x : all_points(f3, 2)) CHECK(F.apply(x) == walk_oracle(k3, x));
  // z -> 2z, z11 -> z11 - z(z+1) + 2z(z+1)
  CHECK(F[1] == Polynomial::parse("1*x1^2 + 1*x1 + 1*x2", f3, 2));

  CHECK_THROWS_AS(eta(SymbolicKey(f3, 1, {{z1("1*z1")}})), ShapeMismatch);
  CHECK(eta(SymbolicKey(f3, 2)).is_identity());
}

TEST_CASE("eta agrees with the numeric walk") {
  for (const char* d : {"Fp:5", "Z:6", "Fq:2^2:1,1,1"}) {
    auto r = Ring::parse(d);
    SeedStream rng(3);
    for (int i = 0; i < 100; ++i) {
      const std::size_t k = 1 + rng.uniform(3);
      auto key = random_key(r, k, 2 * (1 + rng.uniform(3)), 2, rng, false);
      auto x = random_point(r, schubert_dimension(k), rng);
      CHECK(eta(key).apply(x) == walk_oracle(key, x));
    }
  }
}

TEST_CASE("key_product is a homomorphism") {
  auto f3 = Ring::prime_field(3);
  SeedStream rng(4);
  for (int i = 0; i < 20; ++i) {
    const std::size_t k = 1 + rng.uniform(3);
    auto a = random_key(f3, k, 2, 2, rng, rng.uniform(2));
    auto b = random_key(f3, k, 4, 2, rng, rng.uniform(2));
    auto c = random_key(f3, k, 2, 1, rng);
    CHECK(eta(key_product(a, b)) == map_compose(eta(a), eta(b)));
    CHECK(eta(key_product(key_product(a, b), c)) == eta(key_product(a, key_product(b, c))));
  }
  auto a = random_key(f3, 2, 2, 2, rng);
  auto ident = SymbolicKey(f3, 2, {random_colour(f3, 2, 2, 3, rng), colour_identity(f3, 2)});
  auto ai = key_product(a, ident);
  CHECK(ai.length() == 4);
  CHECK(eta(ai) == eta(a));
  CHECK_THROWS_AS(key_product(a, SymbolicKey(f3, 3)), ShapeMismatch);
}

TEST_CASE("key_inverse") {
  auto f3 = Ring::prime_field(3);
  SeedStream rng(5);
  SymbolicKey trivial(f3, 2, {random_colour(f3, 2, 2, 3, rng), colour_identity(f3, 2)});
  CHECK(eta(key_inverse(trivial)).is_identity());

  for (int i = 0; i < 10; ++i) {
    auto key = random_key(f3, 2, 4, 1, rng);
    auto inv = key_inverse(key);
    CHECK(map_compose(eta(key), eta(inv)).is_identity());
    CHECK(map_compose(eta(inv), eta(key)).is_identity());
  }

  auto f5 = Ring::prime_field(5);
  auto key = random_key(f5, 2, 4, 2, rng);
  auto F = eta(key), G = eta(key_inverse(key));
  for (int i = 0; i < 100; ++i) {
    auto x = random_point(f5, 6, rng);
    CHECK(G.apply(F.apply(x)) == x);
    CHECK(F.apply(G.apply(x)) == x);
  }

  auto bad = random_key(f3, 2, 2, 2, rng, false);
  bad = SymbolicKey(f3, 2, {bad[0], {Polynomial::parse("1*z1^2", f3, 2, "z"), Polynomial::parse("1*z2", f3, 2, "z")}});
  CHECK_THROWS_AS(key_inverse(bad), NotInvertibleLastColour);
  auto singular = SymbolicKey(f3, 2, {bad[0], {Polynomial::parse("1*z1", f3, 2, "z"), Polynomial::parse("1*z1", f3, 2, "z")}});
  CHECK_THROWS_AS(key_inverse(singular), NotInvertibleLastColour);
  CHECK_FALSE(singular.invertible());
}

TEST_CASE("key_inverse with a certified non-affine inverse") {
  // x -> (x1 + x2^2, x2) is inverted by (x1 - x2^2, x2)
  auto f5 = Ring::prime_field(5);
  auto z = [&](const char* s) { return Polynomial::parse(s, f5, 2, "z"); };
  SeedStream rng(6);
  SymbolicKey key(f5, 2, {random_colour(f5, 2, 2, 3, rng), {z("1*z1 + 1*z2^2"), z("1*z2")}});
  auto inv = key_inverse(key, {z("1*z1 + 4*z2^2"), z("1*z2")});
  CHECK(map_compose(eta(key), eta(inv)).is_identity());
  CHECK_THROWS_AS(key_inverse(key, {z("1*z1"), z("1*z2")}), NotInvertibleLastColour);
}

TEST_CASE("Lemma-1 bounds hold") {
  auto f5 = Ring::prime_field(5);
  SeedStream rng(7);
  for (int i = 0; i < 60; ++i) {
    const std::size_t k = 1 + rng.uniform(3);
    auto key = random_key(f5, k, 2 * (1 + rng.uniform(2)), 3, rng, rng.uniform(2));
    auto F = eta(key);
    auto b = lemma1_bound(key);
    CHECK(F.degree() <= b.degree);
    CHECK(F.density() <= b.density);
    for (std::size_t c = 0; c < F.dimension(); ++c) CHECK(F[c].density() <= b.per_coordinate[c]);
  }
  // the point-side colour indexes rows: coordinate z_12 of (g, id) in k=2
  auto z = [&](const char* s) { return Polynomial::parse(s, f5, 2, "z"); };
  SymbolicKey key(f5, 2, {{z("1*z1"), z("1*z1 + 1*z2 + 1")}, colour_identity(f5, 2)});
  auto b = lemma1_bound(key);
  CHECK(b.per_coordinate[grid_variable(2, 1, 2)] == 1 + 3 + 3);
  CHECK(b.per_coordinate[grid_variable(2, 2, 1)] == 1 + 1 + 1);
  CHECK(b.degree == 2);
}

TEST_CASE("balanced predicate") {
  auto f5 = Ring::prime_field(5);
  auto z = [&](const char* s) { return Polynomial::parse(s, f5, 1, "z"); };
  SymbolicKey balanced(f5, 1, {{z("1*z1^2")}, {z("2*z1 + 1")}});
  CHECK(is_balanced(balanced));
  CHECK(eta(balanced).degree() == 3);
  SymbolicKey cancelling(f5, 1, {{z("1*z1^2")}, {z("1*z1")}});
  CHECK_FALSE(is_balanced(cancelling));
}

TEST_CASE("bijectivity and order multiples on small instances") {
  auto f2 = Ring::prime_field(2);
  SeedStream rng(8);
  for (int i = 0; i < 10; ++i) {
    auto key = random_key(f2, 2, 4, 2, rng);
    auto F = eta(key);
    CHECK(is_bijective_bruteforce(F));
    auto order = map_order_bruteforce(F);
    auto last = map_order_bruteforce(colour_as_map(key.last()));
    CHECK(order % last == 0);
  }
}

TEST_CASE("key text round trip") {
  auto r = Ring::parse("Fq:2^2:1,1,1");
  SeedStream rng(9);
  auto key = random_key(r, 3, 4, 2, rng);
  const auto text = key.to_text();
  CHECK(text.rfind("KEY ring=Fq:2^2:1,1,1 k=3 len=4\n", 0) == 0);
  CHECK(SymbolicKey::parse(text) == key);
  CHECK_THROWS_AS(SymbolicKey::parse("KEY ring=Fp:5 k=1 len=2\n1*z1\n"), ParseError);
}

TEST_CASE("edge_walk_map") {
  auto f3 = Ring::prime_field(3);
  std::vector<std::vector<Polynomial>> none;
  CHECK(edge_walk_map(f3, 2, none, none).is_identity());
  CHECK(edge_walk_map(f3, 2, none, none).dimension() == 8);

  auto xy = [&](const char* s) { return Polynomial::parse(s, f3, 2); };
  // retracing chain returns to the start edge
  std::vector<std::vector<Polynomial>> g{{xy("1*x1")}}, h{{xy("1*x2")}};
  CHECK(edge_walk_map(f3, 1, g, h).is_identity());

  // Delta (x, y) -> (x + y^2, y) is bijective on F_3^2
  std::vector<std::vector<Polynomial>> g1{{xy("1*x1^2 + 1*x2")}, {xy("1*x1 + 1*x2^2")}};
  std::vector<std::vector<Polynomial>> h1{{xy("1*x1 + 2*x2")}, {xy("1*x2")}};
  auto F = edge_walk_map(f3, 1, g1, h1);
  CHECK(is_bijective_bruteforce(F));
  // states stay on edges: point and incident line
  for (const auto& s : all_points(f3, 3)) {
    auto out = F.apply(s);
    SchubertVertex p{SchubertVertex::kPoint, {out[0]}, {out[1]}};
    SchubertVertex l = neighbour(*f3, p, std::vector<Code>{out[2]});
    CHECK(incident(*f3, p, l));
  }

  std::vector<std::vector<Polynomial>> g2{{xy("1*x1^2")}}, h2{{xy("1*x2")}};
  CHECK_FALSE(is_bijective_bruteforce(edge_walk_map(f3, 1, g2, h2)));

  // Delta a Singer cycle of F_2^2 (companion of x^2 + x + 1)
  auto f2 = Ring::prime_field(2);
  auto s = singer_cycle(f2, 2).to_polymap();
  std::vector<std::vector<Polynomial>> gs{{s[0]}}, hs{{s[1]}};
  auto E = edge_walk_map(f2, 1, gs, hs);
  CHECK(map_order_bruteforce(E) % 3 == 0);
}
