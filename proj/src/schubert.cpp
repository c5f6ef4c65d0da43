#include "dscrypt/schubert.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <utility>

#include "dscrypt/errors.hpp"

namespace dscrypt {

bool incident(const Ring& R, const SchubertVertex& p, const SchubertVertex& l) {
  const std::size_t k = p.k();
  if (p.kind != SchubertVertex::kPoint || l.kind != SchubertVertex::kLine || l.k() != k) return false;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (R.sub(p.grid[i * k + j], l.grid[i * k + j]) != R.mul(p.free[i], l.free[j])) return false;
  return true;
}

SchubertVertex neighbour(const Ring& R, const SchubertVertex& v, std::span<const Code> colour) {
  const std::size_t k = v.k();
  if (colour.size() != k) throw ShapeMismatch("colour arity differs from k");
  SchubertVertex out;
  out.free.assign(colour.begin(), colour.end());
  out.grid.resize(k * k);
  if (v.kind == SchubertVertex::kPoint) {
    out.kind = SchubertVertex::kLine;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        out.grid[i * k + j] = R.sub(v.grid[i * k + j], R.mul(v.free[i], colour[j]));
  } else {
    out.kind = SchubertVertex::kPoint;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        out.grid[i * k + j] = R.add(v.grid[i * k + j], R.mul(colour[i], v.free[j]));
  }
  return out;
}

SchubertVertex walk_numeric(const Ring& R, SchubertVertex v, std::span<const std::vector<Code>> colours) {
  for (const auto& c : colours) v = neighbour(R, v, c);
  return v;
}

SchubertVertex point_from_vector(std::span<const Code> x, std::size_t k) {
  if (x.size() != schubert_dimension(k)) throw ShapeMismatch("vector length is not k(k+1)");
  SchubertVertex v;
  v.free.assign(x.begin(), x.begin() + k);
  v.grid.assign(x.begin() + k, x.end());
  return v;
}

std::vector<Code> vertex_to_vector(const SchubertVertex& v) {
  std::vector<Code> out = v.free;
  out.insert(out.end(), v.grid.begin(), v.grid.end());
  return out;
}

SymbolicColour colour_identity(const RingPtr& ring, std::size_t k) {
  SymbolicColour c;
  for (std::size_t i = 0; i < k; ++i) c.push_back(Polynomial::variable(ring, k, static_cast<std::uint32_t>(i)));
  return c;
}

SymbolicColour colour_from_affine(const AffineMap& t) {
  auto f = t.to_polymap();
  return {f.coords().begin(), f.coords().end()};
}

PolyMap colour_as_map(const SymbolicColour& c) {
  if (c.empty()) throw ShapeMismatch("empty colour");
  return PolyMap(c.front().ring(), c);
}

std::vector<Code> colour_eval(const SymbolicColour& c, std::span<const Code> x) {
  std::vector<Code> out;
  out.reserve(c.size());
  for (const auto& p : c) out.push_back(p.eval(x));
  return out;
}

SymbolicKey::SymbolicKey(RingPtr ring, std::size_t k, std::vector<SymbolicColour> colours)
    : ring_(std::move(ring)), k_(k), colours_(std::move(colours)) {
  if (k_ == 0) throw ShapeMismatch("k must be positive");
  for (const auto& c : colours_) {
    if (c.size() != k_) throw ShapeMismatch("colour arity differs from k");
    for (const auto& p : c) {
      require_same_ring(ring_, p.ring());
      if (p.nvars() != k_) throw ShapeMismatch("colour polynomial must use k variables");
    }
  }
}

bool SymbolicKey::invertible() const {
  if (colours_.empty()) return true;
  for (const auto& p : last())
    if (p.degree() > 1) return false;
  return AffineMap::from_polymap(colour_as_map(last())).is_invertible();
}

bool SymbolicKey::operator==(const SymbolicKey& o) const {
  return same_ring(ring_, o.ring_) && k_ == o.k_ && colours_ == o.colours_;
}

std::string SymbolicKey::to_text() const {
  std::string out = "KEY ring=" + ring_->descriptor() + " k=" + std::to_string(k_) +
                    " len=" + std::to_string(colours_.size()) + "\n";
  for (const auto& c : colours_)
    for (const auto& p : c) out += p.to_string("z") + "\n";
  return out;
}

namespace {

std::size_t header_field(std::string_view header, std::string_view key) {
  const auto pos = header.find(key);
  if (pos == std::string_view::npos) throw ParseError("key header lacks " + std::string(key));
  auto rest = header.substr(pos + key.size());
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
  if (ec != std::errc() || ptr == rest.data()) throw ParseError("bad number after " + std::string(key));
  return v;
}

}  // namespace

SymbolicKey SymbolicKey::parse(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text = text.substr(nl + 1);
  }
  if (lines.empty() || !lines[0].starts_with("KEY ring=")) throw ParseError("missing KEY header");
  const auto header = lines[0];
  const auto desc_end = header.find(' ', 9);
  auto ring = Ring::parse(header.substr(9, desc_end == std::string_view::npos ? header.npos : desc_end - 9));
  const std::size_t k = header_field(header, " k=");
  const std::size_t len = header_field(header, " len=");
  if (k == 0) throw ParseError("k must be positive");
  if (lines.size() != 1 + k * len) throw ParseError("key body has the wrong number of lines");
  std::vector<SymbolicColour> colours(len);
  for (std::size_t c = 0; c < len; ++c)
    for (std::size_t i = 0; i < k; ++i) colours[c].push_back(Polynomial::parse(lines[1 + c * k + i], ring, k, "z"));
  return SymbolicKey(ring, k, std::move(colours));
}

namespace {

std::vector<std::uint32_t> leading_vars(std::size_t k) {
  std::vector<std::uint32_t> m(k);
  std::iota(m.begin(), m.end(), 0u);
  return m;
}

}  // namespace

PolyMap eta(const SymbolicKey& key) {
  if (key.length() % 2) throw ShapeMismatch("eta needs a key of even length");
  const auto& R = key.ring();
  const std::size_t k = key.k();
  const std::size_t n = schubert_dimension(k);
  const auto vm = leading_vars(k);

  std::vector<Polynomial> free;
  for (std::size_t i = 0; i < k; ++i) free.push_back(Polynomial::variable(R, n, static_cast<std::uint32_t>(i)));
  std::vector<TermAccumulator> grid;
  grid.reserve(k * k);
  for (std::size_t i = 0; i < k * k; ++i) {
    grid.emplace_back(R, n);
    grid.back().add(Monomial::variable(static_cast<std::uint32_t>(k + i)), R->one());
  }

  bool at_point = true;
  for (const auto& colour : key.colours()) {
    std::vector<Polynomial> c;
    c.reserve(k);
    for (const auto& p : colour) c.push_back(p.remap(n, vm));
    if (at_point) {
      // l_ij = p_ij - p_i c_j
      for (std::size_t i = 0; i < k; ++i) {
        const auto neg = -free[i];
        for (std::size_t j = 0; j < k; ++j) grid[i * k + j].add_product(neg, c[j]);
      }
    } else {
      // p_ij = l_ij + c_i l_j
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) grid[i * k + j].add_product(c[i], free[j]);
    }
    free = std::move(c);
    at_point = !at_point;
  }

  std::vector<Polynomial> coords = std::move(free);
  for (auto& acc : grid) coords.push_back(acc.finish());
  return PolyMap(R, std::move(coords));
}

SymbolicKey key_product(const SymbolicKey& a, const SymbolicKey& b) {
  require_same_ring(a.ring(), b.ring());
  if (a.k() != b.k()) throw ShapeMismatch("keys have different k");
  if (a.length() == 0) return b;
  std::vector<SymbolicColour> colours = a.colours();
  const auto& g = a.last();
  for (const auto& h : b.colours()) colours.push_back(substitute_all(h, g));
  return SymbolicKey(a.ring(), a.k(), std::move(colours));
}

SymbolicKey key_inverse(const SymbolicKey& key) {
  if (key.length() == 0) return key;
  for (const auto& p : key.last())
    if (p.degree() > 1) throw NotInvertibleLastColour("last colour is not affine");
  const auto t = AffineMap::from_polymap(colour_as_map(key.last()));
  if (!t.is_invertible()) throw NotInvertibleLastColour("last colour is not an invertible affine map");
  return key_inverse(key, colour_from_affine(affine_inverse(t)));
}

SymbolicKey key_inverse(const SymbolicKey& key, const SymbolicColour& ginv) {
  if (key.length() == 0) return key;
  const auto g = colour_as_map(key.last());
  const auto gi = colour_as_map(ginv);
  if (!map_compose(g, gi).is_identity() || !map_compose(gi, g).is_identity()) {
    throw NotInvertibleLastColour("supplied colour is not the inverse of the last colour");
  }
  // retrace: colour j of the inverse is g_{L-j} evaluated through g^{-1}
  std::vector<SymbolicColour> colours;
  const std::size_t L = key.length();
  for (std::size_t j = 1; j < L; ++j) colours.push_back(substitute_all(key[L - 1 - j], ginv));
  colours.push_back(ginv);
  return SymbolicKey(key.ring(), key.k(), std::move(colours));
}

SymbolicKey key_power(const SymbolicKey& key, std::uint64_t e) {
  SymbolicKey result(key.ring(), key.k());
  SymbolicKey base = key;
  while (e) {
    if (e & 1) result = key_product(result, base);
    e >>= 1;
    if (e) base = key_product(base, base);
  }
  return result;
}

namespace {

int bound_degree(const Polynomial& p) { return p.is_zero() ? 0 : p.degree(); }

}  // namespace

Lemma1Bound lemma1_bound(const SymbolicKey& key) {
  const std::size_t k = key.k();
  std::vector<std::vector<int>> deg;
  std::vector<std::vector<std::size_t>> den;
  deg.emplace_back(k, 1);
  den.emplace_back(k, 1);
  for (const auto& c : key.colours()) {
    std::vector<int> d;
    std::vector<std::size_t> m;
    for (const auto& p : c) {
      d.push_back(bound_degree(p));
      m.push_back(p.density());
    }
    deg.push_back(std::move(d));
    den.push_back(std::move(m));
  }

  Lemma1Bound b;
  b.degree = 1;
  for (std::size_t i = 0; i + 1 < deg.size(); ++i) {
    const int a = *std::max_element(deg[i].begin(), deg[i].end());
    const int c = *std::max_element(deg[i + 1].begin(), deg[i + 1].end());
    b.degree = std::max(b.degree, a + c);
  }
  b.degree = std::max(b.degree, *std::max_element(deg.back().begin(), deg.back().end()));

  b.per_coordinate.assign(k + k * k, 1);
  for (std::size_t r = 0; r < k; ++r) b.per_coordinate[r] = den.back()[r];
  for (std::size_t i = 0; i + 1 < den.size(); ++i) {
    // the point-side (even) colour supplies row r, the line-side colour column s
    const auto& ev = den[i % 2 == 0 ? i : i + 1];
    const auto& od = den[i % 2 == 0 ? i + 1 : i];
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t s = 0; s < k; ++s) b.per_coordinate[k + r * k + s] += ev[r] * od[s];
  }
  b.density = *std::max_element(b.per_coordinate.begin(), b.per_coordinate.end());
  return b;
}

bool is_balanced(const SymbolicKey& key) { return eta(key).degree() == lemma1_bound(key).degree; }

PolyMap edge_walk_map(const RingPtr& R, std::size_t k, std::span<const std::vector<Polynomial>> g,
                      std::span<const std::vector<Polynomial>> h) {
  if (g.size() != h.size()) throw ShapeMismatch("edge walk needs one line colour per point colour");
  const std::size_t n = k + k * k + k;
  std::vector<std::uint32_t> vm(2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    vm[i] = static_cast<std::uint32_t>(i);
    vm[k + i] = static_cast<std::uint32_t>(k + k * k + i);
  }
  auto embed = [&](const std::vector<Polynomial>& c) {
    if (c.size() != k) throw ShapeMismatch("colour arity differs from k");
    std::vector<Polynomial> out;
    for (const auto& p : c) {
      require_same_ring(R, p.ring());
      if (p.nvars() != 2 * k) throw ShapeMismatch("edge colours use 2k variables");
      out.push_back(p.remap(n, vm));
    }
    return out;
  };
  auto var = [&](std::size_t i) { return Polynomial::variable(R, n, static_cast<std::uint32_t>(i)); };

  std::vector<Polynomial> pfree, lfree, pgrid, lgrid;
  for (std::size_t i = 0; i < k; ++i) {
    pfree.push_back(var(i));
    lfree.push_back(var(k + k * k + i));
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      pgrid.push_back(var(k + i * k + j));
      lgrid.push_back(pgrid.back() - pfree[i] * lfree[j]);
    }

  for (std::size_t step = 0; step < g.size(); ++step) {
    auto gc = embed(g[step]);
    auto hc = embed(h[step]);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) pgrid[i * k + j] = lgrid[i * k + j] + gc[i] * lfree[j];
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) lgrid[i * k + j] = pgrid[i * k + j] - gc[i] * hc[j];
    pfree = std::move(gc);
    lfree = std::move(hc);
  }

  std::vector<Polynomial> coords = std::move(pfree);
  coords.insert(coords.end(), pgrid.begin(), pgrid.end());
  coords.insert(coords.end(), lfree.begin(), lfree.end());
  return PolyMap(R, std::move(coords));
}

}  // namespace dscrypt
