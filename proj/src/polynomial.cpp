#include "dscrypt/polynomial.hpp"

#include <unordered_map>

#include <algorithm>
#include <charconv>

#include "dscrypt/errors.hpp"

namespace dscrypt {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(std::uint32_t var, std::uint32_t exp) {
  Monomial m;
  if (exp) m.factors_.push_back({var, exp});
  return m;
}

Monomial Monomial::from_exponents(std::span<const std::uint32_t> exps) {
  Monomial m;
  for (std::uint32_t v = 0; v < exps.size(); ++v) {
    if (exps[v]) m.factors_.push_back({v, exps[v]});
  }
  return m;
}

int Monomial::degree() const {
  int d = 0;
  for (const auto& f : factors_) d += static_cast<int>(f.exp);
  return d;
}

std::uint32_t Monomial::exponent(std::uint32_t var) const {
  for (const auto& f : factors_) {
    if (f.var == var) return f.exp;
    if (f.var > var) break;
  }
  return 0;
}

std::vector<std::uint32_t> Monomial::exponents(std::size_t nvars) const {
  std::vector<std::uint32_t> out(nvars, 0);
  for (const auto& f : factors_) out[f.var] = f.exp;
  return out;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.factors_.reserve(a.factors_.size() + b.factors_.size());
  auto i = a.factors_.begin(), ie = a.factors_.end();
  auto j = b.factors_.begin(), je = b.factors_.end();
  while (i != ie && j != je) {
    if (i->var < j->var) {
      out.factors_.push_back(*i++);
    } else if (j->var < i->var) {
      out.factors_.push_back(*j++);
    } else {
      out.factors_.push_back({i->var, i->exp + j->exp});
      ++i;
      ++j;
    }
  }
  out.factors_.insert(out.factors_.end(), i, ie);
  out.factors_.insert(out.factors_.end(), j, je);
  return out;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  auto i = a.factors_.begin(), ie = a.factors_.end();
  auto j = b.factors_.begin(), je = b.factors_.end();
  for (; i != ie && j != je; ++i, ++j) {
    // a variable present on one side only decides in favour of that side
    if (i->var != j->var) return i->var < j->var ? std::strong_ordering::greater : std::strong_ordering::less;
    if (i->exp != j->exp) return i->exp <=> j->exp;
  }
  if (i != ie) return std::strong_ordering::greater;
  if (j != je) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

std::size_t Monomial::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& f : factors_) {
    h ^= (static_cast<std::uint64_t>(f.var) << 32 | f.exp) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------- TermAccumulator

TermAccumulator::TermAccumulator(RingPtr ring, std::size_t nvars, std::size_t expected)
    : ring_(std::move(ring)), nvars_(nvars) {
  std::size_t cap = 16;
  while (cap < 2 * expected && cap < (std::size_t{1} << 24)) cap <<= 1;
  buckets_.assign(cap, {0, 0});
  mask_ = cap - 1;
  terms_.reserve(std::min<std::size_t>(expected, std::size_t{1} << 22));
}

void TermAccumulator::grow() {
  const std::size_t cap = buckets_.size() * 2;
  std::vector<std::pair<std::size_t, std::uint32_t>> fresh(cap, {0, 0});
  const std::size_t mask = cap - 1;
  for (const auto& b : buckets_) {
    if (!b.second) continue;
    std::size_t pos = b.first & mask;
    while (fresh[pos].second) pos = (pos + 1) & mask;
    fresh[pos] = b;
  }
  buckets_ = std::move(fresh);
  mask_ = mask;
}

void TermAccumulator::add(const Monomial& m, Code c) {
  if (c == 0) return;
  const std::size_t h = m.hash();
  std::size_t pos = h & mask_;
  while (buckets_[pos].second) {
    if (buckets_[pos].first == h) {
      Term& t = terms_[buckets_[pos].second - 1];
      if (t.monomial == m) {
        t.coeff = ring_->add(t.coeff, c);
        return;
      }
    }
    pos = (pos + 1) & mask_;
  }
  terms_.push_back({m, c});
  buckets_[pos] = {h, static_cast<std::uint32_t>(terms_.size())};
  if (++used_ * 2 > buckets_.size()) grow();
}

void TermAccumulator::add_scaled(const Polynomial& p, Code c) {
  if (c == 0) return;
  const bool unit = c == ring_->one();
  for (const auto& t : p.terms_) add(t.monomial, unit ? t.coeff : ring_->mul(t.coeff, c));
}

void TermAccumulator::add_product(const Polynomial& a, const Polynomial& b) {
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      add(ta.monomial * tb.monomial, ring_->mul(ta.coeff, tb.coeff));
    }
  }
}

Polynomial TermAccumulator::finish() {
  Polynomial out(ring_, nvars_);
  out.terms_.reserve(terms_.size());
  for (auto& t : terms_) {
    if (t.coeff != 0) out.terms_.push_back(std::move(t));
  }
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const Term& x, const Term& y) { return x.monomial > y.monomial; });
  terms_.clear();
  used_ = 0;
  std::fill(buckets_.begin(), buckets_.end(), std::pair<std::size_t, std::uint32_t>{0, 0});
  return out;
}

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(RingPtr ring, std::size_t nvars) : ring_(std::move(ring)), nvars_(nvars) {
  if (!ring_) throw Error("polynomial needs a ring");
}

Polynomial Polynomial::constant(RingPtr ring, std::size_t nvars, Code c) {
  Polynomial p(std::move(ring), nvars);
  if (!p.ring_->is_canonical(c)) throw Error("non-canonical constant");
  if (c != 0) p.terms_.push_back({Monomial{}, c});
  return p;
}

Polynomial Polynomial::variable(RingPtr ring, std::size_t nvars, std::uint32_t var) {
  if (var >= nvars) throw ShapeMismatch("variable index out of range");
  Polynomial p(std::move(ring), nvars);
  if (p.ring_->one() != 0) p.terms_.push_back({Monomial::variable(var), p.ring_->one()});
  return p;
}

Polynomial Polynomial::from_terms(RingPtr ring, std::size_t nvars, std::vector<Term> terms) {
  TermAccumulator acc(ring, nvars, terms.size());
  for (auto& t : terms) {
    if (t.monomial.support_end() > nvars) throw ShapeMismatch("monomial uses a variable beyond nvars");
    if (!ring->is_canonical(t.coeff)) throw Error("non-canonical coefficient");
    acc.add(t.monomial, t.coeff);
  }
  return acc.finish();
}

Polynomial Polynomial::normalized() const {
  return from_terms(ring_, nvars_, terms_);
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_constant());
}

Code Polynomial::constant_term() const {
  // the constant monomial is lex-smallest, so it sits at the end
  if (!terms_.empty() && terms_.back().monomial.is_constant()) return terms_.back().coeff;
  return 0;
}

int Polynomial::degree() const {
  if (terms_.empty()) return kZeroDegree;
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.monomial.degree());
  return d;
}

void Polynomial::check_compatible(const Polynomial& o) const {
  require_same_ring(ring_, o.ring_);
  if (nvars_ != o.nvars_) throw ShapeMismatch("polynomials have different variable counts");
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  check_compatible(o);
  Polynomial out(ring_, nvars_);
  out.terms_.reserve(terms_.size() + o.terms_.size());
  auto i = terms_.begin(), ie = terms_.end();
  auto j = o.terms_.begin(), je = o.terms_.end();
  while (i != ie && j != je) {
    const auto cmp = i->monomial <=> j->monomial;
    if (cmp > 0) {
      out.terms_.push_back(*i++);
    } else if (cmp < 0) {
      out.terms_.push_back(*j++);
    } else {
      const Code c = ring_->add(i->coeff, j->coeff);
      if (c) out.terms_.push_back({i->monomial, c});
      ++i;
      ++j;
    }
  }
  out.terms_.insert(out.terms_.end(), i, ie);
  out.terms_.insert(out.terms_.end(), j, je);
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(ring_, nvars_);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) out.terms_.push_back({t.monomial, ring_->neg(t.coeff)});
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::scaled(Code c) const {
  Polynomial out(ring_, nvars_);
  if (c == 0) return out;
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    const Code v = ring_->mul(t.coeff, c);
    if (v) out.terms_.push_back({t.monomial, v});
  }
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  check_compatible(o);
  if (is_zero() || o.is_zero()) return Polynomial(ring_, nvars_);
  if (o.is_constant()) return scaled(o.terms_[0].coeff);
  if (is_constant()) return o.scaled(terms_[0].coeff);
  if (o.terms_.size() == 1 || terms_.size() == 1) {
    // monomial times polynomial preserves the order up to zero products
    const auto& single = terms_.size() == 1 ? terms_[0] : o.terms_[0];
    const auto& many = terms_.size() == 1 ? o : *this;
    Polynomial out(ring_, nvars_);
    out.terms_.reserve(many.terms_.size());
    for (const auto& t : many.terms_) {
      const Code c = ring_->mul(t.coeff, single.coeff);
      if (c) out.terms_.push_back({t.monomial * single.monomial, c});
    }
    return out;
  }
  TermAccumulator acc(ring_, nvars_, terms_.size() * o.terms_.size());
  acc.add_product(*this, o);
  return acc.finish();
}

bool Polynomial::operator==(const Polynomial& o) const {
  return same_ring(ring_, o.ring_) && nvars_ == o.nvars_ && terms_ == o.terms_;
}

// ------------------------------------------------------------ substitution

namespace {

class Horner {
 public:
  Horner(std::span<const Polynomial> args, const RingPtr& ring, std::size_t out_vars)
      : args_(args), ring_(ring), out_vars_(out_vars), powers_(args.size()) {}

  Polynomial run(std::span<const Term> terms, std::uint32_t var) {
    if (terms.empty()) return Polynomial(ring_, out_vars_);
    // skip variables absent from every term
    std::uint32_t next = UINT32_MAX;
    for (const auto& t : terms) {
      for (const auto& f : t.monomial.factors()) {
        if (f.var >= var) {
          next = std::min(next, f.var);
          break;
        }
      }
    }
    if (next == UINT32_MAX) {
      // all remaining terms are constant in the variables >= var
      Code c = 0;
      for (const auto& t : terms) c = ring_->add(c, t.coeff);
      return Polynomial::constant(ring_, out_vars_, c);
    }
    var = next;
    // terms sharing an exponent of `var` are contiguous and descending
    Polynomial result(ring_, out_vars_);
    std::uint32_t prev = 0;
    bool first = true;
    std::size_t i = 0;
    while (i < terms.size()) {
      const std::uint32_t e = terms[i].monomial.exponent(var);
      std::size_t j = i + 1;
      while (j < terms.size() && terms[j].monomial.exponent(var) == e) ++j;
      Polynomial coeff = run(terms.subspan(i, j - i), var + 1);
      if (first) {
        result = std::move(coeff);
        first = false;
      } else {
        result = result * power(var, prev - e) + coeff;
      }
      prev = e;
      i = j;
    }
    if (prev) result = result * power(var, prev);
    return result;
  }

 private:
  const Polynomial& power(std::uint32_t var, std::uint32_t e) {
    auto& cache = powers_[var];
    if (cache.empty()) {
      cache.push_back(Polynomial::constant(ring_, out_vars_, ring_->one()));
      cache.push_back(args_[var]);
    }
    while (cache.size() <= e) cache.push_back(cache.back() * args_[var]);
    return cache[e];
  }

  std::span<const Polynomial> args_;
  const RingPtr& ring_;
  std::size_t out_vars_;
  std::vector<std::vector<Polynomial>> powers_;
};

}  // namespace

namespace {

std::size_t check_args(const Polynomial& f, std::span<const Polynomial> args) {
  if (args.size() != f.nvars()) {
    throw ShapeMismatch("substitute: expected " + std::to_string(f.nvars()) + " arguments, got " +
                        std::to_string(args.size()));
  }
  if (args.empty()) return 0;
  const std::size_t out_vars = args[0].nvars();
  for (const auto& a : args) {
    require_same_ring(f.ring(), a.ring());
    if (a.nvars() != out_vars) throw ShapeMismatch("substitute: arguments have different variable counts");
  }
  return out_vars;
}

// Low-degree outer polynomials: each distinct monomial of the outer
// polynomials is expanded once and shared by all of them.
std::vector<Polynomial> substitute_shared(std::span<const Polynomial> fs, std::span<const Polynomial> args,
                                          std::size_t out_vars) {
  const RingPtr& ring = fs[0].ring();
  const std::size_t n = args.size();
  std::unordered_map<Monomial, std::size_t, MonomialHash> index;
  std::vector<Polynomial> values;
  index.emplace(Monomial(), 0);
  values.push_back(Polynomial::constant(ring, out_vars, ring->one()));
  auto expand = [&](auto&& self, const Monomial& m) -> std::size_t {
    if (auto it = index.find(m); it != index.end()) return it->second;
    auto e = m.exponents(n);
    const std::uint32_t var = m.factors().back().var;
    --e[var];
    const std::size_t parent = self(self, Monomial::from_exponents(e));
    values.push_back(values[parent] * args[var]);
    index.emplace(m, values.size() - 1);
    return values.size() - 1;
  };
  std::vector<Polynomial> out;
  out.reserve(fs.size());
  for (const auto& f : fs) {
    TermAccumulator acc(ring, out_vars);
    for (const auto& t : f.terms()) {
      const std::size_t id = expand(expand, t.monomial);
      acc.add_scaled(values[id], t.coeff);
    }
    out.push_back(acc.finish());
  }
  return out;
}

}  // namespace

Polynomial Polynomial::substitute(std::span<const Polynomial> args) const {
  const std::size_t out_vars = check_args(*this, args);
  if (args.empty()) return *this;
  Horner h(args, ring_, out_vars);
  return h.run(terms_, 0);
}

std::vector<Polynomial> substitute_all(std::span<const Polynomial> fs, std::span<const Polynomial> args) {
  std::vector<Polynomial> out;
  out.reserve(fs.size());
  if (fs.empty()) return out;
  const std::size_t out_vars = check_args(fs[0], args);
  for (const auto& f : fs) check_args(f, args);
  if (args.empty()) return {fs.begin(), fs.end()};
  int outer = 0;
  for (const auto& f : fs) outer = std::max(outer, f.degree());
  if (fs.size() > 1 && outer <= 3) return substitute_shared(fs, args, out_vars);
  Horner h(args, fs[0].ring(), out_vars);
  for (const auto& f : fs) out.push_back(h.run(f.terms(), 0));
  return out;
}

Polynomial Polynomial::remap(std::size_t nvars, std::span<const std::uint32_t> var_map) const {
  if (var_map.size() != nvars_) throw ShapeMismatch("variable map length differs from nvars");
  std::vector<Term> out;
  out.reserve(terms_.size());
  std::vector<std::uint32_t> e(nvars);
  for (const auto& t : terms_) {
    std::fill(e.begin(), e.end(), 0);
    for (const auto& f : t.monomial.factors()) {
      if (var_map[f.var] >= nvars) throw ShapeMismatch("variable map target out of range");
      e[var_map[f.var]] += f.exp;
    }
    out.push_back({Monomial::from_exponents(e), t.coeff});
  }
  return from_terms(ring_, nvars, std::move(out));
}

Code Polynomial::eval(std::span<const Code> point) const {
  if (point.size() != nvars_) throw ShapeMismatch("eval: point length does not match nvars");
  Code acc = 0;
  for (const auto& t : terms_) {
    Code v = t.coeff;
    for (const auto& f : t.monomial.factors()) {
      v = ring_->mul(v, f.exp == 1 ? point[f.var] : ring_->pow(point[f.var], f.exp));
    }
    acc = ring_->add(acc, v);
  }
  return acc;
}

RingElement Polynomial::eval(std::span<const RingElement> point) const {
  std::vector<Code> codes;
  codes.reserve(point.size());
  for (const auto& p : point) {
    require_same_ring(ring_, p.ring());
    codes.push_back(p.value());
  }
  return RingElement(ring_, eval(codes));
}

// ---------------------------------------------------------------- text I/O

std::string Polynomial::to_string(std::string_view prefix) const {
  if (terms_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) s += " + ";
    s += ring_->format(terms_[i].coeff);
    for (const auto& f : terms_[i].monomial.factors()) {
      s += '*';
      s += prefix;
      s += std::to_string(f.var + 1);
      if (f.exp != 1) {
        s += '^';
        s += std::to_string(f.exp);
      }
    }
  }
  return s;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::uint64_t parse_uint(std::string_view s, std::string_view ctx) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("bad number '" + std::string(s) + "' in " + std::string(ctx));
  }
  return v;
}

}  // namespace

Polynomial Polynomial::parse(std::string_view text, RingPtr ring, std::size_t nvars, std::string_view prefix) {
  text = trim(text);
  if (text.empty()) throw ParseError("empty polynomial");
  std::vector<Term> terms;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t plus = text.find('+', start);
    const std::string_view term_text = trim(text.substr(start, plus == std::string_view::npos ? text.npos : plus - start));
    if (term_text.empty()) throw ParseError("empty term in '" + std::string(text) + "'");
    Code coeff = ring->one();
    std::vector<std::uint32_t> exps(nvars, 0);
    std::size_t fs = 0;
    while (fs <= term_text.size()) {
      const std::size_t star = term_text.find('*', fs);
      const std::string_view factor =
          trim(term_text.substr(fs, star == std::string_view::npos ? term_text.npos : star - fs));
      if (factor.empty()) throw ParseError("empty factor in '" + std::string(term_text) + "'");
      if (factor.starts_with(prefix)) {
        auto rest = factor.substr(prefix.size());
        const std::size_t caret = rest.find('^');
        const std::uint64_t idx = parse_uint(rest.substr(0, caret), term_text);
        const std::uint64_t e = caret == std::string_view::npos ? 1 : parse_uint(rest.substr(caret + 1), term_text);
        if (idx < 1 || idx > nvars) throw ParseError("variable index out of range in '" + std::string(term_text) + "'");
        exps[idx - 1] += static_cast<std::uint32_t>(e);
      } else {
        coeff = ring->mul(coeff, ring->parse_element(factor));
      }
      if (star == std::string_view::npos) break;
      fs = star + 1;
    }
    terms.push_back({Monomial::from_exponents(exps), coeff});
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return from_terms(std::move(ring), nvars, std::move(terms));
}

// ------------------------------------------------------------ free functions

Polynomial poly_add(const Polynomial& f, const Polynomial& g) { return f + g; }
Polynomial poly_mul(const Polynomial& f, const Polynomial& g) { return f * g; }
Polynomial poly_substitute(const Polynomial& f, std::span<const Polynomial> args) { return f.substitute(args); }
Code poly_eval(const Polynomial& f, std::span<const Code> point) { return f.eval(point); }
int poly_degree(const Polynomial& f) { return f.degree(); }
std::size_t poly_density(const Polynomial& f) { return f.density(); }

}  // namespace dscrypt
