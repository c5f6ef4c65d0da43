#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dscrypt/seed_stream.hpp"

namespace dscrypt {

/// Canonical encoding of a ring element.
///
/// Prime fields and Z_m: the least nonnegative residue.
/// F_{p^m}: the coefficient vector (c_0, ..., c_{m-1}) packed little-endian
/// in base p, i.e. sum c_i p^i. This is the bit-exact serialized form.
using Code = std::uint64_t;

enum class RingKind { kPrimeField, kExtensionField, kModularRing };

class RingElement;

/// Immutable descriptor plus arithmetic for F_p, F_{p^m} and Z_m.
///
/// Text form: `Fp:<p>`, `Fq:<p>^<m>:<c_0,...,c_m>` (defining polynomial,
/// little-endian, monic) and `Z:<m>`. Create through the factory functions;
/// instances are shared via RingPtr and safe to use from several threads.
class Ring : public std::enable_shared_from_this<Ring> {
 public:
  static std::shared_ptr<const Ring> prime_field(std::uint64_t p);
  static std::shared_ptr<const Ring> extension_field(std::uint64_t p, std::vector<std::uint64_t> defining);
  /// F_{p^m} with the first irreducible monic polynomial in enumeration order.
  static std::shared_ptr<const Ring> galois_field(std::uint64_t p, unsigned m);
  static std::shared_ptr<const Ring> modular(std::uint64_t m);
  static std::shared_ptr<const Ring> parse(std::string_view descriptor);

  RingKind kind() const { return kind_; }
  std::uint64_t characteristic() const { return p_; }
  unsigned extension_degree() const { return m_; }
  /// Number of elements.
  std::uint64_t size() const { return size_; }
  bool is_field() const { return kind_ != RingKind::kModularRing; }
  const std::vector<std::uint64_t>& defining_polynomial() const { return defining_; }
  std::string descriptor() const;

  bool operator==(const Ring& other) const;

  // Arithmetic on canonical codes. Inputs must be canonical.
  Code zero() const { return 0; }
  Code one() const { return size_ == 1 ? 0 : 1; }
  Code add(Code a, Code b) const;
  Code sub(Code a, Code b) const;
  Code neg(Code a) const;
  Code mul(Code a, Code b) const;
  Code pow(Code a, std::uint64_t e) const;
  bool is_unit(Code a) const;
  /// Throws NotAUnit for zero and zero divisors.
  Code inv(Code a) const;
  /// Image of an integer under Z -> ring.
  Code from_int(std::int64_t v) const;
  bool is_canonical(Code a) const { return a < size_; }

  std::vector<std::uint64_t> coefficients(Code a) const;
  Code from_coefficients(std::span<const std::uint64_t> coeffs) const;

  std::string format(Code a) const;
  Code parse_element(std::string_view text) const;

  Code sample(SeedStream& rng) const { return rng.uniform(size_); }

  RingElement element(Code c) const;

 private:
  struct Private {};

 public:
  Ring(Private, RingKind kind, std::uint64_t p, unsigned m, std::vector<std::uint64_t> defining);

 private:
  Code ext_add(Code a, Code b) const;
  Code ext_neg(Code a) const;
  Code ext_mul_slow(Code a, Code b) const;
  void build_tables();

  RingKind kind_;
  std::uint64_t p_;
  unsigned m_;
  std::uint64_t size_;
  std::vector<std::uint64_t> defining_;
  // log/antilog tables for small extension fields
  std::vector<std::uint32_t> exp_table_;
  std::vector<std::uint32_t> log_table_;
};

using RingPtr = std::shared_ptr<const Ring>;

/// Same ring, by identity or by structure.
bool same_ring(const RingPtr& a, const RingPtr& b);

/// Throws RingMismatch unless same_ring(a, b).
void require_same_ring(const RingPtr& a, const RingPtr& b);

/// A ring element bound to its ring descriptor.
class RingElement {
 public:
  RingElement(RingPtr ring, Code value);

  const RingPtr& ring() const { return ring_; }
  Code value() const { return value_; }
  std::vector<std::uint64_t> coefficients() const { return ring_->coefficients(value_); }

  RingElement operator+(const RingElement& o) const;
  RingElement operator-(const RingElement& o) const;
  RingElement operator*(const RingElement& o) const;
  RingElement operator-() const { return {ring_, ring_->neg(value_)}; }
  RingElement inverse() const { return {ring_, ring_->inv(value_)}; }
  bool is_unit() const { return ring_->is_unit(value_); }
  bool operator==(const RingElement& o) const;

  std::string to_string() const { return ring_->format(value_); }

 private:
  RingPtr ring_;
  Code value_;
};

RingElement ring_add(const RingElement& a, const RingElement& b);
RingElement ring_mul(const RingElement& a, const RingElement& b);
RingElement ring_inverse(const RingElement& a);
RingElement ring_sample_uniform(const RingPtr& ring, SeedStream& rng);

namespace gfpoly {
// Dense little-endian polynomials over F_p, used for field construction and
// the primitive-polynomial search.
using Poly = std::vector<std::uint64_t>;
void trim(Poly& f);
Poly mod(Poly f, const Poly& g, std::uint64_t p);
/// True iff monic f has no monic factor of degree 1..deg(f)/2.
bool is_irreducible(const Poly& f, std::uint64_t p);
/// First monic irreducible polynomial of degree m in enumeration order.
Poly first_irreducible(std::uint64_t p, unsigned m);
}  // namespace gfpoly

}  // namespace dscrypt
