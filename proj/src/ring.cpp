#include "dscrypt/ring.hpp"

#include <charconv>

#include "dscrypt/errors.hpp"
#include "dscrypt/numtheory.hpp"

namespace dscrypt {

namespace gfpoly {

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly mod(Poly f, const Poly& g, std::uint64_t p) {
  trim(f);
  const std::size_t dg = g.size() - 1;
  const std::uint64_t lead_inv = nt::powmod(g.back(), p - 2, p);
  while (f.size() > dg) {
    const std::uint64_t c = nt::mulmod(f.back(), lead_inv, p);
    const std::size_t shift = f.size() - 1 - dg;
    for (std::size_t i = 0; i <= dg; ++i) {
      f[shift + i] = nt::submod(f[shift + i], nt::mulmod(c, g[i], p), p);
    }
    trim(f);
  }
  return f;
}

namespace {

// Monic polynomial of degree d whose lower coefficients are the base-p digits
// of index.
Poly monic_from_index(std::uint64_t index, unsigned d, std::uint64_t p) {
  Poly g(d + 1, 0);
  for (unsigned i = 0; i < d; ++i) {
    g[i] = index % p;
    index /= p;
  }
  g[d] = 1;
  return g;
}

}  // namespace

bool is_irreducible(const Poly& f, std::uint64_t p) {
  const unsigned m = static_cast<unsigned>(f.size() - 1);
  if (m == 0) return false;
  if (m == 1) return true;
  if (f[0] == 0) return false;
  for (unsigned d = 1; d <= m / 2; ++d) {
    const std::uint64_t count = nt::checked_pow(p, d);
    if (count == 0 || count > (std::uint64_t{1} << 26)) {
      throw InvalidRing("extension too large for exhaustive irreducibility check");
    }
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      if (mod(f, monic_from_index(idx, d, p), p).empty()) return false;
    }
  }
  return true;
}

Poly first_irreducible(std::uint64_t p, unsigned m) {
  const std::uint64_t count = nt::checked_pow(p, m);
  for (std::uint64_t idx = 1; count == 0 || idx < count; ++idx) {
    Poly f = monic_from_index(idx, m, p);
    if (is_irreducible(f, p)) return f;
  }
  throw InvalidRing("no irreducible polynomial found");
}

}  // namespace gfpoly

Ring::Ring(Private, RingKind kind, std::uint64_t p, unsigned m, std::vector<std::uint64_t> defining)
    : kind_(kind), p_(p), m_(m), defining_(std::move(defining)) {
  size_ = nt::checked_pow(p, m);
  if (kind_ == RingKind::kExtensionField) build_tables();
}

RingPtr Ring::prime_field(std::uint64_t p) {
  if (!nt::is_prime(p)) throw InvalidRing("Fp: " + std::to_string(p) + " is not prime");
  return std::make_shared<const Ring>(Private{}, RingKind::kPrimeField, p, 1, std::vector<std::uint64_t>{});
}

RingPtr Ring::extension_field(std::uint64_t p, std::vector<std::uint64_t> defining) {
  if (!nt::is_prime(p)) throw InvalidRing("Fq: characteristic " + std::to_string(p) + " is not prime");
  gfpoly::trim(defining);
  if (defining.size() < 2) throw InvalidRing("Fq: defining polynomial must have degree >= 1");
  if (defining.back() != 1) throw InvalidRing("Fq: defining polynomial must be monic");
  for (auto c : defining) {
    if (c >= p) throw InvalidRing("Fq: defining polynomial coefficient out of range");
  }
  const auto m = static_cast<unsigned>(defining.size() - 1);
  const std::uint64_t size = nt::checked_pow(p, m);
  if (size == 0 || size > (std::uint64_t{1} << 62)) throw InvalidRing("Fq: field too large");
  if (!gfpoly::is_irreducible(defining, p)) throw InvalidRing("Fq: defining polynomial is reducible");
  return std::make_shared<const Ring>(Private{}, RingKind::kExtensionField, p, m, std::move(defining));
}

RingPtr Ring::galois_field(std::uint64_t p, unsigned m) {
  if (m == 1) return prime_field(p);
  if (!nt::is_prime(p)) throw InvalidRing("Fq: characteristic is not prime");
  return extension_field(p, gfpoly::first_irreducible(p, m));
}

RingPtr Ring::modular(std::uint64_t m) {
  if (m < 2) throw InvalidRing("Z: modulus must be >= 2");
  return std::make_shared<const Ring>(Private{}, RingKind::kModularRing, m, 1, std::vector<std::uint64_t>{});
}

namespace {

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("bad " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

RingPtr Ring::parse(std::string_view d) {
  if (d.starts_with("Fp:")) return prime_field(parse_u64(d.substr(3), "prime"));
  if (d.starts_with("Z:")) return modular(parse_u64(d.substr(2), "modulus"));
  if (d.starts_with("Fq:")) {
    auto rest = d.substr(3);
    const auto caret = rest.find('^');
    const auto colon = rest.find(':');
    if (caret == std::string_view::npos || colon == std::string_view::npos || colon < caret) {
      throw ParseError("bad extension descriptor: '" + std::string(d) + "'");
    }
    const std::uint64_t p = parse_u64(rest.substr(0, caret), "characteristic");
    const std::uint64_t m = parse_u64(rest.substr(caret + 1, colon - caret - 1), "degree");
    std::vector<std::uint64_t> coeffs;
    auto list = rest.substr(colon + 1);
    while (true) {
      const auto comma = list.find(',');
      coeffs.push_back(parse_u64(list.substr(0, comma), "coefficient"));
      if (comma == std::string_view::npos) break;
      list = list.substr(comma + 1);
    }
    if (coeffs.size() != m + 1) throw ParseError("extension descriptor needs m+1 coefficients");
    if (coeffs.back() != 1) throw InvalidRing("Fq: defining polynomial must be monic");
    return extension_field(p, std::move(coeffs));
  }
  throw ParseError("unknown ring descriptor: '" + std::string(d) + "'");
}

std::string Ring::descriptor() const {
  switch (kind_) {
    case RingKind::kPrimeField:
      return "Fp:" + std::to_string(p_);
    case RingKind::kModularRing:
      return "Z:" + std::to_string(p_);
    case RingKind::kExtensionField: {
      std::string s = "Fq:" + std::to_string(p_) + "^" + std::to_string(m_) + ":";
      for (std::size_t i = 0; i < defining_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(defining_[i]);
      }
      return s;
    }
  }
  return {};
}

bool Ring::operator==(const Ring& o) const {
  return kind_ == o.kind_ && p_ == o.p_ && m_ == o.m_ && defining_ == o.defining_;
}

bool same_ring(const RingPtr& a, const RingPtr& b) {
  return a == b || (a && b && *a == *b);
}

void require_same_ring(const RingPtr& a, const RingPtr& b) {
  if (!same_ring(a, b)) throw RingMismatch();
}

void Ring::build_tables() {
  if (size_ > 65536) return;
  const auto q1 = static_cast<std::uint32_t>(size_ - 1);
  std::vector<std::uint32_t> exps(2 * static_cast<std::size_t>(q1));
  for (Code g = 1; g < size_; ++g) {
    Code x = 1;
    std::uint32_t order = 0;
    do {
      exps[order++] = static_cast<std::uint32_t>(x);
      x = ext_mul_slow(x, g);
    } while (x != 1 && order < q1);
    if (x != 1 || order != q1) continue;
    for (std::uint32_t i = 0; i < q1; ++i) exps[q1 + i] = exps[i];
    log_table_.assign(size_, 0);
    for (std::uint32_t i = 0; i < q1; ++i) log_table_[exps[i]] = i;
    exp_table_ = std::move(exps);
    return;
  }
}

Code Ring::ext_add(Code a, Code b) const {
  if (p_ == 2) return a ^ b;
  Code out = 0, place = 1;
  for (unsigned i = 0; i < m_; ++i) {
    out += ((a % p_ + b % p_) % p_) * place;
    a /= p_;
    b /= p_;
    place *= p_;
  }
  return out;
}

Code Ring::ext_neg(Code a) const {
  if (p_ == 2) return a;
  Code out = 0, place = 1;
  for (unsigned i = 0; i < m_; ++i) {
    const Code d = a % p_;
    out += (d ? p_ - d : 0) * place;
    a /= p_;
    place *= p_;
  }
  return out;
}

Code Ring::ext_mul_slow(Code a, Code b) const {
  const auto ca = coefficients(a);
  const auto cb = coefficients(b);
  gfpoly::Poly prod(2 * m_, 0);
  for (unsigned i = 0; i < m_; ++i) {
    if (!ca[i]) continue;
    for (unsigned j = 0; j < m_; ++j) {
      prod[i + j] = nt::addmod(prod[i + j], nt::mulmod(ca[i], cb[j], p_), p_);
    }
  }
  auto r = gfpoly::mod(std::move(prod), defining_, p_);
  r.resize(m_, 0);
  return from_coefficients(r);
}

Code Ring::add(Code a, Code b) const {
  if (kind_ == RingKind::kExtensionField) return ext_add(a, b);
  return nt::addmod(a, b, p_);
}

Code Ring::neg(Code a) const {
  if (kind_ == RingKind::kExtensionField) return ext_neg(a);
  return a == 0 ? 0 : p_ - a;
}

Code Ring::sub(Code a, Code b) const {
  if (kind_ == RingKind::kExtensionField) return ext_add(a, ext_neg(b));
  return nt::submod(a, b, p_);
}

Code Ring::mul(Code a, Code b) const {
  if (kind_ != RingKind::kExtensionField) return nt::mulmod(a, b, p_);
  if (a == 0 || b == 0) return 0;
  if (!exp_table_.empty()) return exp_table_[log_table_[a] + log_table_[b]];
  return ext_mul_slow(a, b);
}

Code Ring::pow(Code a, std::uint64_t e) const {
  Code result = one();
  while (e) {
    if (e & 1) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

bool Ring::is_unit(Code a) const {
  if (kind_ == RingKind::kModularRing) return nt::gcd(a, p_) == 1;
  return a != 0;
}

Code Ring::inv(Code a) const {
  if (!is_unit(a)) throw NotAUnit(format(a) + " in " + descriptor());
  switch (kind_) {
    case RingKind::kPrimeField:
      return nt::powmod(a, p_ - 2, p_);
    case RingKind::kModularRing: {
      auto bz = nt::ext_gcd(a, p_);
      __int128 s = bz.s % static_cast<__int128>(p_);
      if (s < 0) s += p_;
      return static_cast<Code>(s);
    }
    case RingKind::kExtensionField:
      if (!exp_table_.empty()) {
        const auto q1 = static_cast<std::uint32_t>(size_ - 1);
        return exp_table_[(q1 - log_table_[a]) % q1];
      }
      return pow(a, size_ - 2);
  }
  return 0;
}

Code Ring::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += static_cast<std::int64_t>(p_);
  return static_cast<Code>(r);
}

std::vector<std::uint64_t> Ring::coefficients(Code a) const {
  if (kind_ != RingKind::kExtensionField) return {a};
  std::vector<std::uint64_t> out(m_);
  for (unsigned i = 0; i < m_; ++i) {
    out[i] = a % p_;
    a /= p_;
  }
  return out;
}

Code Ring::from_coefficients(std::span<const std::uint64_t> coeffs) const {
  if (kind_ != RingKind::kExtensionField) {
    return coeffs.empty() ? 0 : coeffs[0] % p_;
  }
  Code out = 0, place = 1;
  for (unsigned i = 0; i < m_; ++i) {
    const std::uint64_t c = i < coeffs.size() ? coeffs[i] % p_ : 0;
    out += c * place;
    place *= p_;
  }
  return out;
}

std::string Ring::format(Code a) const { return std::to_string(a); }

Code Ring::parse_element(std::string_view text) const {
  const std::uint64_t v = parse_u64(text, "ring element");
  if (v >= size_) throw ParseError("ring element out of range: " + std::string(text));
  return v;
}

RingElement Ring::element(Code c) const {
  if (!is_canonical(c)) throw Error("non-canonical ring element code");
  return RingElement(shared_from_this(), c);
}

RingElement::RingElement(RingPtr ring, Code value) : ring_(std::move(ring)), value_(value) {}

RingElement RingElement::operator+(const RingElement& o) const {
  require_same_ring(ring_, o.ring_);
  return {ring_, ring_->add(value_, o.value_)};
}

RingElement RingElement::operator-(const RingElement& o) const {
  require_same_ring(ring_, o.ring_);
  return {ring_, ring_->sub(value_, o.value_)};
}

RingElement RingElement::operator*(const RingElement& o) const {
  require_same_ring(ring_, o.ring_);
  return {ring_, ring_->mul(value_, o.value_)};
}

bool RingElement::operator==(const RingElement& o) const {
  require_same_ring(ring_, o.ring_);
  return value_ == o.value_;
}

RingElement ring_add(const RingElement& a, const RingElement& b) { return a + b; }
RingElement ring_mul(const RingElement& a, const RingElement& b) { return a * b; }
RingElement ring_inverse(const RingElement& a) { return a.inverse(); }
RingElement ring_sample_uniform(const RingPtr& ring, SeedStream& rng) {
  return ring->element(ring->sample(rng));
}

}  // namespace dscrypt
