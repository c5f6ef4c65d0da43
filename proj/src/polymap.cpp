#include "dscrypt/polymap.hpp"

#include <cassert>
#include <charconv>
#include <unordered_map>

#include <boost/container/small_vector.hpp>
#include <algorithm>

#include "dscrypt/errors.hpp"
#include "dscrypt/numtheory.hpp"

namespace dscrypt {

// ----------------------------------------------------------------- PolyMap

PolyMap::PolyMap(RingPtr ring, std::vector<Polynomial> coords) : ring_(std::move(ring)), coords_(std::move(coords)) {
  for (const auto& c : coords_) {
    require_same_ring(ring_, c.ring());
    if (c.nvars() != coords_.size()) throw ShapeMismatch("map coordinate has wrong variable count");
  }
}

PolyMap PolyMap::identity(RingPtr ring, std::size_t n) {
  std::vector<Polynomial> coords;
  coords.reserve(n);
  for (std::size_t i = 0; i < n; ++i) coords.push_back(Polynomial::variable(ring, n, static_cast<std::uint32_t>(i)));
  return PolyMap(std::move(ring), std::move(coords));
}

int PolyMap::degree() const {
  int d = kZeroDegree;
  for (const auto& c : coords_) d = std::max(d, c.degree());
  return d;
}

std::size_t PolyMap::density() const {
  std::size_t d = 0;
  for (const auto& c : coords_) d = std::max(d, c.density());
  return d;
}

std::size_t PolyMap::total_terms() const {
  std::size_t d = 0;
  for (const auto& c : coords_) d += c.density();
  return d;
}

std::vector<Code> PolyMap::apply(std::span<const Code> point) const {
  if (point.size() != coords_.size()) throw ShapeMismatch("point length does not match map dimension");
  std::vector<Code> out;
  out.reserve(coords_.size());
  for (const auto& c : coords_) out.push_back(c.eval(point));
  return out;
}

PolyMap PolyMap::operator+(const PolyMap& o) const {
  if (o.dimension() != dimension()) throw ShapeMismatch("map dimensions differ");
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < coords_.size(); ++i) out.push_back(coords_[i] + o.coords_[i]);
  return PolyMap(ring_, std::move(out));
}

PolyMap PolyMap::operator-(const PolyMap& o) const {
  if (o.dimension() != dimension()) throw ShapeMismatch("map dimensions differ");
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < coords_.size(); ++i) out.push_back(coords_[i] - o.coords_[i]);
  return PolyMap(ring_, std::move(out));
}

bool PolyMap::operator==(const PolyMap& o) const {
  return same_ring(ring_, o.ring_) && coords_ == o.coords_;
}

bool PolyMap::is_identity() const { return *this == identity(ring_, dimension()); }

std::string PolyMap::to_text() const {
  std::string s = "MAP ring=" + ring_->descriptor() + " n=" + std::to_string(coords_.size()) + "\n";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    s += "x" + std::to_string(i + 1) + " -> " + coords_[i].to_string() + "\n";
  }
  return s;
}

namespace {

std::string_view field_value(std::string_view line, std::string_view key) {
  const auto pos = line.find(key);
  if (pos == std::string_view::npos) throw ParseError("missing '" + std::string(key) + "' in header");
  auto rest = line.substr(pos + key.size());
  return rest.substr(0, rest.find(' '));
}

std::uint64_t to_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError("bad integer '" + std::string(s) + "'");
  return v;
}

}  // namespace

PolyMap PolyMap::parse(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  if (lines.empty() || !lines[0].starts_with("MAP ")) throw ParseError("map text must start with 'MAP '");
  RingPtr ring = Ring::parse(field_value(lines[0], "ring="));
  const std::uint64_t n = to_u64(field_value(lines[0], "n="));
  if (lines.size() != n + 1) throw ParseError("map text has " + std::to_string(lines.size() - 1) + " coordinate lines, expected " + std::to_string(n));
  std::vector<Polynomial> coords;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::string prefix = "x" + std::to_string(i + 1) + " -> ";
    if (!lines[i + 1].starts_with(prefix)) throw ParseError("expected line starting with '" + prefix + "'");
    coords.push_back(Polynomial::parse(lines[i + 1].substr(prefix.size()), ring, n));
  }
  return PolyMap(std::move(ring), std::move(coords));
}

// ------------------------------------------------------------ MapEvaluator

MapEvaluator::MapEvaluator(const PolyMap& f) : ring_(f.ring()), dim_(f.dimension()) {
  std::unordered_map<Monomial, std::uint32_t, MonomialHash> index;
  index.emplace(Monomial(), 0);
  auto intern = [&](auto&& self, const Monomial& m) -> std::uint32_t {
    if (auto it = index.find(m); it != index.end()) return it->second;
    auto e = m.exponents(dim_);
    const std::uint32_t var = m.factors().back().var;
    --e[var];
    const std::uint32_t parent = self(self, Monomial::from_exponents(e));
    steps_.push_back({parent, var});
    const auto id = static_cast<std::uint32_t>(steps_.size());
    index.emplace(m, id);
    return id;
  };
  for (const auto& c : f.coords()) {
    for (const auto& t : c.terms()) {
      coeffs_.push_back(t.coeff);
      term_mono_.push_back(intern(intern, t.monomial));
    }
    term_end_.push_back(static_cast<std::uint32_t>(coeffs_.size()));
  }
  if (ring_->kind() != RingKind::kExtensionField) {
    const std::uint64_t m = ring_->characteristic() - 1;
    lazy_terms_ = (m == 0) ? UINT64_MAX : (m > UINT32_MAX ? 1 : UINT64_MAX / (m * m));
    if (lazy_terms_ == 0) lazy_terms_ = 1;
  }
}

void MapEvaluator::apply(std::span<const Code> in, std::span<Code> out) const {
  const Ring& R = *ring_;
  boost::container::small_vector<Code, 256> mono(steps_.size() + 1);
  mono[0] = R.one();
  for (std::size_t i = 0; i < steps_.size(); ++i) mono[i + 1] = R.mul(mono[steps_[i].parent], in[steps_[i].var]);
  std::uint32_t t = 0;
  if (lazy_terms_ == 0) {
    for (std::size_t i = 0; i < dim_; ++i) {
      Code acc = 0;
      for (; t < term_end_[i]; ++t) acc = R.add(acc, R.mul(coeffs_[t], mono[term_mono_[t]]));
      out[i] = acc;
    }
    return;
  }
  const std::uint64_t p = R.characteristic();
  for (std::size_t i = 0; i < dim_; ++i) {
    std::uint64_t acc = 0, pending = 0;
    for (; t < term_end_[i]; ++t) {
      const std::uint64_t prod = lazy_terms_ == 1 ? nt::mulmod(coeffs_[t], mono[term_mono_[t]], p)
                                                  : coeffs_[t] * mono[term_mono_[t]];
      acc = lazy_terms_ == 1 ? nt::addmod(acc, prod, p) : acc + prod;
      if (++pending == lazy_terms_) {
        acc %= p;
        pending = 0;
      }
    }
    out[i] = acc % p;
  }
}

std::vector<Code> MapEvaluator::apply(std::span<const Code> in) const {
  if (in.size() != dim_) throw ShapeMismatch("point length does not match map dimension");
  std::vector<Code> out(dim_);
  apply(in, out);
  return out;
}

// ------------------------------------------------------ composition, power

PolyMap map_compose(const PolyMap& f, const PolyMap& g) {
  require_same_ring(f.ring(), g.ring());
  if (f.dimension() != g.dimension()) throw ShapeMismatch("compose: dimensions differ");
  PolyMap out(f.ring(), substitute_all(g.coords(), f.coords()));
#ifndef NDEBUG
  if (f.degree() >= 1 && g.degree() >= 1) assert(out.degree() <= f.degree() * g.degree());
#endif
  return out;
}

PolyMap map_power(const PolyMap& f, std::uint64_t e, std::optional<int> degree_cap) {
  auto check = [&](const PolyMap& m) {
    if (degree_cap && m.degree() > *degree_cap) throw DegreeBlowup(m.degree(), *degree_cap);
  };
  check(f);
  if (e == 0) return PolyMap::identity(f.ring(), f.dimension());
  // all intermediates are powers of f
  std::optional<PolyMap> result;
  PolyMap base = f;
  while (true) {
    if (e & 1) {
      result = result ? map_compose(*result, base) : base;
      check(*result);
    }
    e >>= 1;
    if (!e) break;
    base = map_compose(base, base);
    check(base);
  }
  return *result;
}

// --------------------------------------------------------------- AffineMap

AffineMap::AffineMap(Matrix matrix, std::vector<Code> shift) : matrix_(std::move(matrix)), shift_(std::move(shift)) {
  if (shift_.size() != matrix_.size()) throw ShapeMismatch("affine shift length does not match matrix");
}

AffineMap AffineMap::identity(RingPtr ring, std::size_t n) {
  return AffineMap(Matrix::identity(std::move(ring), n), std::vector<Code>(n, 0));
}

AffineMap AffineMap::translation(RingPtr ring, std::vector<Code> shift) {
  const std::size_t n = shift.size();
  return AffineMap(Matrix::identity(std::move(ring), n), std::move(shift));
}

AffineMap AffineMap::linear(Matrix matrix) {
  const std::size_t n = matrix.size();
  return AffineMap(std::move(matrix), std::vector<Code>(n, 0));
}

AffineMap AffineMap::from_polymap(const PolyMap& f) {
  if (f.degree() > 1) throw ShapeMismatch("map of degree " + std::to_string(f.degree()) + " is not affine");
  const std::size_t n = f.dimension();
  Matrix a(f.ring(), n);
  std::vector<Code> b(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& t : f[i].terms()) {
      if (t.monomial.is_constant()) {
        b[i] = t.coeff;
      } else {
        a.at(i, t.monomial.factors()[0].var) = t.coeff;
      }
    }
  }
  return AffineMap(std::move(a), std::move(b));
}

bool AffineMap::is_invertible() const { return ring()->is_unit(matrix_.determinant()); }

std::vector<Code> AffineMap::apply(std::span<const Code> x) const {
  auto y = matrix_.apply(x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = ring()->add(y[i], shift_[i]);
  return y;
}

PolyMap AffineMap::to_polymap() const {
  const std::size_t n = dimension();
  const RingPtr& R = ring();
  std::vector<Polynomial> coords;
  coords.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Term> terms;
    for (std::size_t j = 0; j < n; ++j) {
      if (matrix_.at(i, j)) terms.push_back({Monomial::variable(static_cast<std::uint32_t>(j)), matrix_.at(i, j)});
    }
    if (shift_[i]) terms.push_back({Monomial{}, shift_[i]});
    coords.push_back(Polynomial::from_terms(R, n, std::move(terms)));
  }
  return PolyMap(R, std::move(coords));
}

bool AffineMap::operator==(const AffineMap& o) const { return matrix_ == o.matrix_ && shift_ == o.shift_; }

AffineMap affine_compose(const AffineMap& a, const AffineMap& b) {
  Matrix m = b.matrix() * a.matrix();
  auto shift = b.apply(a.shift());
  return AffineMap(std::move(m), std::move(shift));
}

AffineMap affine_inverse(const AffineMap& t) {
  auto inv = t.matrix().inverse();
  if (!inv) throw NotInvertible("affine map has a non-unit determinant");
  auto shift = inv->apply(t.shift());
  for (auto& c : shift) c = t.ring()->neg(c);
  return AffineMap(std::move(*inv), std::move(shift));
}

AffineMap affine_sample(const RingPtr& ring, std::size_t n, SeedStream& rng) {
  Matrix m(ring, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = ring->sample(rng);
  std::vector<Code> b(n);
  for (auto& c : b) c = ring->sample(rng);
  return AffineMap(std::move(m), std::move(b));
}

AffineMap affine_sample_invertible(const RingPtr& ring, std::size_t n, SeedStream& rng, std::size_t* rejected) {
  std::size_t misses = 0;
  while (true) {
    Matrix m(ring, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m.at(i, j) = ring->sample(rng);
    if (!ring->is_unit(m.determinant())) {
      ++misses;
      continue;
    }
    std::vector<Code> b(n);
    for (auto& c : b) c = ring->sample(rng);
    if (rejected) *rejected = misses;
    return AffineMap(std::move(m), std::move(b));
  }
}

// ------------------------------------------------------------ Singer cycles

Matrix companion_matrix(const RingPtr& ring, std::span<const Code> monic) {
  const std::size_t k = monic.size() - 1;
  Matrix c(ring, k);
  for (std::size_t i = 0; i + 1 < k; ++i) c.at(i + 1, i) = ring->one();
  for (std::size_t i = 0; i < k; ++i) c.at(i, k - 1) = ring->neg(monic[i]);
  return c;
}

std::uint64_t matrix_order(const Matrix& m, std::uint64_t group_order) {
  if (!m.pow(group_order).is_identity()) throw Error("matrix order does not divide the given group order");
  std::uint64_t d = group_order;
  for (const auto& [p, e] : nt::factorize(group_order)) {
    (void)e;
    while (d % p == 0 && m.pow(d / p).is_identity()) d /= p;
  }
  return d;
}

std::vector<Code> primitive_polynomial(const RingPtr& field, std::size_t k, std::uint64_t candidate_budget) {
  if (!field->is_field()) throw PrimitiveSearchFailed("primitive polynomials need a field");
  if (k == 0) throw PrimitiveSearchFailed("degree must be positive");
  const std::uint64_t q = field->size();
  const std::uint64_t qk = nt::checked_pow(q, static_cast<unsigned>(k));
  if (qk == 0) throw PrimitiveSearchFailed("q^k does not fit in 64 bits");
  const std::uint64_t order = qk - 1;
  const auto factors = nt::factorize(order);
  std::uint64_t tried = 0;
  for (std::uint64_t idx = 1; idx < qk; ++idx) {
    std::vector<Code> poly(k + 1);
    std::uint64_t rest = idx;
    for (std::size_t i = 0; i < k; ++i) {
      poly[i] = rest % q;
      rest /= q;
    }
    poly[k] = field->one();
    if (poly[0] == 0) continue;
    if (++tried > candidate_budget) break;
    const Matrix c = companion_matrix(field, poly);
    if (!c.pow(order).is_identity()) continue;
    bool primitive = true;
    for (const auto& [p, e] : factors) {
      (void)e;
      if (c.pow(order / p).is_identity()) {
        primitive = false;
        break;
      }
    }
    if (primitive) return poly;
  }
  throw PrimitiveSearchFailed("no primitive polynomial of degree " + std::to_string(k) + " within budget");
}

AffineMap singer_cycle(const RingPtr& field, std::size_t k) {
  const auto poly = primitive_polynomial(field, k);
  return AffineMap::linear(companion_matrix(field, poly));
}

// ---------------------------------------------------------- conjugation

PolyMap map_conjugate(const AffineMap& t, const PolyMap& f) {
  return map_conjugate(t.to_polymap(), f, affine_inverse(t).to_polymap());
}

PolyMap map_conjugate(const PolyMap& t, const PolyMap& f, const PolyMap& t_inverse) {
  return map_compose(map_compose(t, f), t_inverse);
}

// -------------------------------------------------------------- orders

namespace {

std::vector<std::uint64_t> permutation_of(const PolyMap& f, std::uint64_t limit) {
  const std::uint64_t q = f.ring()->size();
  const std::size_t n = f.dimension();
  const std::uint64_t total = nt::checked_pow(q, static_cast<unsigned>(n));
  if (total == 0 || total > limit) {
    throw TooLarge("|K|^n exceeds the brute-force guard of " + std::to_string(limit) + " points");
  }
  MapEvaluator ev(f);
  std::vector<std::uint64_t> image(total);
  std::vector<Code> x(n, 0), y(n);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rest % q;
      rest /= q;
    }
    ev.apply(x, y);
    std::uint64_t out = 0;
    for (std::size_t i = n; i-- > 0;) out = out * q + y[i];
    image[idx] = out;
  }
  return image;
}

bool is_permutation(const std::vector<std::uint64_t>& image) {
  std::vector<bool> seen(image.size(), false);
  for (auto v : image) {
    if (seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

}  // namespace

bool is_bijective_bruteforce(const PolyMap& f, std::uint64_t limit) {
  return is_permutation(permutation_of(f, limit));
}

BigInt map_order_bruteforce(const PolyMap& f, std::uint64_t limit) {
  const auto image = permutation_of(f, limit);
  if (!is_permutation(image)) throw NotBijective("map is not a bijection of K^n");
  std::vector<bool> visited(image.size(), false);
  std::vector<std::uint64_t> lengths;
  for (std::uint64_t s = 0; s < image.size(); ++s) {
    if (visited[s]) continue;
    std::uint64_t len = 0;
    for (std::uint64_t v = s; !visited[v]; v = image[v]) {
      visited[v] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
  BigInt order = 1;
  for (auto len : lengths) order = boost::multiprecision::lcm(order, BigInt(len));
  return order;
}

}  // namespace dscrypt
