#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "dscrypt/ring.hpp"

namespace dscrypt {

/// Degree reported for the zero polynomial.
inline constexpr int kZeroDegree = std::numeric_limits<int>::min();

struct VarPower {
  std::uint32_t var;  // 0-based variable index
  std::uint32_t exp;  // > 0
  bool operator==(const VarPower&) const = default;
};

/// Power product stored sparsely as (variable, exponent) pairs sorted by
/// variable. Zero exponents are never stored.
class Monomial {
 public:
  Monomial() = default;
  static Monomial variable(std::uint32_t var, std::uint32_t exp = 1);
  /// From a dense exponent vector.
  static Monomial from_exponents(std::span<const std::uint32_t> exps);

  int degree() const;
  std::uint32_t exponent(std::uint32_t var) const;
  bool is_constant() const { return factors_.empty(); }
  std::span<const VarPower> factors() const { return {factors_.data(), factors_.size()}; }
  /// Largest variable index + 1, or 0 for the constant monomial.
  std::uint32_t support_end() const { return factors_.empty() ? 0 : factors_.back().var + 1; }
  std::vector<std::uint32_t> exponents(std::size_t nvars) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  bool operator==(const Monomial& o) const { return factors_ == o.factors_; }
  /// Pure lexicographic order on exponent vectors, x_1 most significant.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

  std::size_t hash() const;

 private:
  boost::container::small_vector<VarPower, 4> factors_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct Term {
  Monomial monomial;
  Code coeff;  // never zero inside a Polynomial
  bool operator==(const Term&) const = default;
};

/// Sparse multivariate polynomial in canonical form: terms strictly
/// descending in lex order, no zero coefficients, no repeated monomials.
class Polynomial {
 public:
  Polynomial(RingPtr ring, std::size_t nvars);

  static Polynomial constant(RingPtr ring, std::size_t nvars, Code c);
  static Polynomial variable(RingPtr ring, std::size_t nvars, std::uint32_t var);
  /// Normalizes arbitrary terms (merges duplicates, drops zeros, sorts).
  static Polynomial from_terms(RingPtr ring, std::size_t nvars, std::vector<Term> terms);
  /// Parses the text form `c*x1^2*x3 + c' ...` with the given variable prefix.
  static Polynomial parse(std::string_view text, RingPtr ring, std::size_t nvars,
                          std::string_view prefix = "x");

  const RingPtr& ring() const { return ring_; }
  std::size_t nvars() const { return nvars_; }
  std::span<const Term> terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Code constant_term() const;

  /// Total degree, kZeroDegree for the zero polynomial.
  int degree() const;
  /// Number of monomial terms.
  std::size_t density() const { return terms_.size(); }

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial scaled(Code c) const;
  bool operator==(const Polynomial& o) const;

  /// f(args_1, ..., args_k): args share one ring and one variable count.
  Polynomial substitute(std::span<const Polynomial> args) const;
  /// Renames variable i to var_map[i] in a space of `nvars` variables.
  Polynomial remap(std::size_t nvars, std::span<const std::uint32_t> var_map) const;
  Code eval(std::span<const Code> point) const;
  RingElement eval(std::span<const RingElement> point) const;

  std::string to_string(std::string_view prefix = "x") const;

  /// Re-sorts and merges; a no-op on values built through the public API.
  Polynomial normalized() const;

 private:
  friend class TermAccumulator;
  void check_compatible(const Polynomial& o) const;

  RingPtr ring_;
  std::size_t nvars_;
  std::vector<Term> terms_;
};

/// Hash-based accumulator used for products and linear combinations.
class TermAccumulator {
 public:
  TermAccumulator(RingPtr ring, std::size_t nvars, std::size_t expected = 0);
  void add(const Monomial& m, Code c);
  void add_scaled(const Polynomial& p, Code c);
  void add_product(const Polynomial& a, const Polynomial& b);
  Polynomial finish();

 private:
  RingPtr ring_;
  std::size_t nvars_;
  std::vector<Term> terms_;
  std::vector<std::pair<std::size_t, std::uint32_t>> buckets_;  // (hash, index+1)
  std::size_t mask_ = 0;
  std::size_t used_ = 0;
  void grow();
};

/// Substitutes the same arguments into several polynomials, sharing the
/// cached argument powers.
std::vector<Polynomial> substitute_all(std::span<const Polynomial> fs, std::span<const Polynomial> args);

Polynomial poly_add(const Polynomial& f, const Polynomial& g);
Polynomial poly_mul(const Polynomial& f, const Polynomial& g);
Polynomial poly_substitute(const Polynomial& f, std::span<const Polynomial> args);
Code poly_eval(const Polynomial& f, std::span<const Code> point);
int poly_degree(const Polynomial& f);
std::size_t poly_density(const Polynomial& f);

}  // namespace dscrypt
