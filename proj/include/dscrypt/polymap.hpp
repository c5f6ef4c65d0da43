#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dscrypt/matrix.hpp"
#include "dscrypt/polynomial.hpp"
#include "dscrypt/ring.hpp"
#include "dscrypt/seed_stream.hpp"

namespace dscrypt {

using BigInt = boost::multiprecision::cpp_int;

/// Endomorphism of K^n given by the rule x_i -> f_i(x_1, ..., x_n).
///
/// Products follow one convention everywhere: compose(f, g) is "fg", the map
/// x -> g(f(x)) (apply f first).
class PolyMap {
 public:
  PolyMap(RingPtr ring, std::vector<Polynomial> coords);
  static PolyMap identity(RingPtr ring, std::size_t n);

  const RingPtr& ring() const { return ring_; }
  std::size_t dimension() const { return coords_.size(); }
  std::span<const Polynomial> coords() const { return coords_; }
  const Polynomial& operator[](std::size_t i) const { return coords_[i]; }

  /// Maximum coordinate degree.
  int degree() const;
  /// Maximum coordinate density.
  std::size_t density() const;
  std::size_t total_terms() const;

  std::vector<Code> apply(std::span<const Code> point) const;

  /// Coordinatewise sum and difference (used for masking).
  PolyMap operator+(const PolyMap& o) const;
  PolyMap operator-(const PolyMap& o) const;
  bool operator==(const PolyMap& o) const;
  bool is_identity() const;

  /// `MAP ring=<descriptor> n=<n>` followed by `x<i> -> <polynomial>` lines.
  std::string to_text() const;
  static PolyMap parse(std::string_view text);

 private:
  RingPtr ring_;
  std::vector<Polynomial> coords_;
};

/// Flattened form of a PolyMap for repeated numeric application. Every
/// distinct monomial is evaluated once, as a parent monomial times one
/// variable, then each coordinate is a dot product with the coefficients.
class MapEvaluator {
 public:
  explicit MapEvaluator(const PolyMap& f);
  std::size_t dimension() const { return dim_; }
  void apply(std::span<const Code> in, std::span<Code> out) const;
  std::vector<Code> apply(std::span<const Code> in) const;

 private:
  struct Step {
    std::uint32_t parent;
    std::uint32_t var;
  };

  RingPtr ring_;
  std::size_t dim_;
  std::vector<Step> steps_;              // monomial i + 1 = monomial parent * x_var; 0 is the constant
  std::vector<std::uint32_t> term_end_;  // per coordinate, end index into terms
  std::vector<Code> coeffs_;             // per term
  std::vector<std::uint32_t> term_mono_; // per term, monomial index
  std::uint64_t lazy_terms_ = 0;         // products summed before a reduction, 0 for extension fields
};

/// The map x -> g(f(x)).
PolyMap map_compose(const PolyMap& f, const PolyMap& g);

/// f composed with itself e times by square-and-multiply. When a cap is
/// given, any intermediate of degree above it raises DegreeBlowup.
PolyMap map_power(const PolyMap& f, std::uint64_t e, std::optional<int> degree_cap = std::nullopt);

/// x -> A x + b.
class AffineMap {
 public:
  AffineMap(Matrix matrix, std::vector<Code> shift);
  static AffineMap identity(RingPtr ring, std::size_t n);
  static AffineMap translation(RingPtr ring, std::vector<Code> shift);
  static AffineMap linear(Matrix matrix);
  /// Throws ShapeMismatch when f has degree above 1.
  static AffineMap from_polymap(const PolyMap& f);

  const RingPtr& ring() const { return matrix_.ring(); }
  std::size_t dimension() const { return matrix_.size(); }
  const Matrix& matrix() const { return matrix_; }
  std::span<const Code> shift() const { return shift_; }

  bool is_invertible() const;
  std::vector<Code> apply(std::span<const Code> x) const;
  PolyMap to_polymap() const;
  bool operator==(const AffineMap& o) const;

 private:
  Matrix matrix_;
  std::vector<Code> shift_;
};

/// x -> b(a(x)).
AffineMap affine_compose(const AffineMap& a, const AffineMap& b);
/// Throws NotInvertible.
AffineMap affine_inverse(const AffineMap& t);
/// Uniform invertible matrix by rejection plus a uniform translation. When
/// `rejected` is given it receives the number of singular draws.
AffineMap affine_sample_invertible(const RingPtr& ring, std::size_t n, SeedStream& rng,
                                   std::size_t* rejected = nullptr);
/// Uniform affine map, invertible or not.
AffineMap affine_sample(const RingPtr& ring, std::size_t n, SeedStream& rng);

/// Monic primitive polynomial of degree k over the field, little-endian
/// codes of length k + 1. First hit in enumeration order.
std::vector<Code> primitive_polynomial(const RingPtr& field, std::size_t k,
                                       std::uint64_t candidate_budget = std::uint64_t{1} << 24);
/// Companion matrix of a monic polynomial (little-endian codes).
Matrix companion_matrix(const RingPtr& ring, std::span<const Code> monic);
/// Linear map of F_q^k of order q^k - 1 (companion of a primitive polynomial).
AffineMap singer_cycle(const RingPtr& field, std::size_t k);
/// Multiplicative order via the factorisation of q^k - 1 style test: the
/// smallest divisor d of `group_order` with m^d = I.
std::uint64_t matrix_order(const Matrix& m, std::uint64_t group_order);

/// The product t f t^{-1} in the fg convention: x -> t^{-1}(f(t(x))).
PolyMap map_conjugate(const AffineMap& t, const PolyMap& f);
PolyMap map_conjugate(const PolyMap& t, const PolyMap& f, const PolyMap& t_inverse);

/// Exact order of the permutation induced on K^n. Requires |K|^n <= limit.
/// Throws NotBijective or TooLarge.
BigInt map_order_bruteforce(const PolyMap& f, std::uint64_t limit = std::uint64_t{1} << 20);

/// True iff f permutes K^n (exhaustive, same size guard).
bool is_bijective_bruteforce(const PolyMap& f, std::uint64_t limit = std::uint64_t{1} << 20);

}  // namespace dscrypt
