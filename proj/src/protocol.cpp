#include "dscrypt/protocol.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "dscrypt/errors.hpp"
#include "dscrypt/numtheory.hpp"

namespace dscrypt {

// ------------------------------------------------------------- exponents

std::string to_string(ExponentPolicy p) { return p == ExponentPolicy::kUniform ? "uniform" : "polynomial"; }

ExponentPolicy parse_exponent_policy(std::string_view s) {
  if (s == "uniform") return ExponentPolicy::kUniform;
  if (s == "polynomial") return ExponentPolicy::kPolynomial;
  throw InvalidSpec("unknown exponent policy '" + std::string(s) + "' (uniform, polynomial)");
}

std::uint64_t exponent_bound(const RingPtr& ring, std::size_t k) {
  const std::uint64_t order = nt::checked_pow(ring->size(), static_cast<unsigned>(k));
  if (order == 0) return UINT64_MAX;
  return order < 2 ? 0 : order - 2;
}

void check_exponent(std::uint64_t e, const RingPtr& ring, std::size_t k, std::string_view what) {
  const std::uint64_t hi = exponent_bound(ring, k);
  if (e > hi) {
    throw ExponentOutOfRange(std::string(what) + " = " + std::to_string(e) + " exceeds q^k - 2 = " + std::to_string(hi));
  }
}

std::uint64_t ExponentRule::sample(const RingPtr& ring, std::size_t k, SeedStream& rng) const {
  std::uint64_t hi = exponent_bound(ring, k);
  if (policy == ExponentPolicy::kPolynomial) {
    const double n = static_cast<double>(schubert_dimension(k));
    const double cap = std::floor(std::pow(n, size_exponent));
    if (cap < static_cast<double>(hi)) hi = static_cast<std::uint64_t>(cap);
  }
  if (hi < 2) throw InvalidSpec("no private exponent in [2, " + std::to_string(hi) + "]");
  return rng.uniform_between(2, hi);
}

std::size_t schubert_rank(std::size_t n) {
  auto k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (k * (k + 1) > n) --k;
  while ((k + 1) * (k + 2) <= n) ++k;
  if (k * (k + 1) != n) throw ShapeMismatch("dimension " + std::to_string(n) + " is not of the form k(k+1)");
  return k;
}

std::vector<Code> apply_repeated(const PolyMap& f, std::uint64_t times, std::span<const Code> p) {
  if (p.size() != f.dimension()) throw ShapeMismatch("point length does not match map dimension");
  std::vector<Code> x(p.begin(), p.end()), y(p.size());
  if (times == 0) return x;
  MapEvaluator ev(f);
  for (std::uint64_t i = 0; i < times; ++i) {
    ev.apply(x, y);
    std::swap(x, y);
  }
  return x;
}

TerminalKind default_terminal(const RingPtr& ring) {
  return ring->is_field() ? TerminalKind::kSinger : TerminalKind::kGeneralAffine;
}

// ------------------------------------------------------------ Diffie-Hellman

DHResult dh_run(const PolyMap& g, std::uint64_t kA, std::uint64_t kB, std::optional<int> degree_cap) {
  const int cap = degree_cap.value_or(std::max(1, g.degree()));
  auto alice_sends = map_power(g, kA, cap);
  auto bob_sends = map_power(g, kB, cap);
  auto alice_share = map_power(bob_sends, kA, cap);
  auto bob_share = map_power(alice_sends, kB, cap);
  return {std::move(alice_sends), std::move(bob_sends), std::move(alice_share), std::move(bob_share)};
}

// ---------------------------------------------------------------- El Gamal

ElGamalAlice elgamal_setup(const SymbolicKey& key, std::uint64_t kA) {
  check_exponent(kA, key.ring(), key.k(), "kA");
  auto g = eta(key);
  auto g_inverse = eta(key_inverse(key));
  auto f = map_power(g, kA);
  return {std::move(g), std::move(g_inverse), kA, std::move(f)};
}

ElGamalCiphertext elgamal_encrypt(const PolyMap& f, const PolyMap& g_inverse, std::uint64_t kB,
                                  std::span<const Code> p) {
  check_exponent(kB, f.ring(), schubert_rank(f.dimension()), "kB");
  return {apply_repeated(f, kB, p), map_power(g_inverse, kB)};
}

std::vector<Code> elgamal_decrypt(const ElGamalAlice& alice, const ElGamalCiphertext& ct) {
  return apply_repeated(ct.h, alice.kA, ct.c);
}

ShiftedAlice shifted_elgamal_setup(const SymbolicKey& key, const PolyMap& h, const PolyMap& h_inverse,
                                   std::uint64_t kA) {
  check_exponent(kA, key.ring(), key.k(), "kA");
  if (!map_compose(h, h_inverse).is_identity()) throw NotInvertible("shift map and its claimed inverse do not compose to the identity");
  auto g = eta(key);
  auto g_inverse = eta(key_inverse(key));
  auto m = map_compose(map_compose(h, g_inverse), h_inverse);
  const int bound = h.degree() * g_inverse.degree() * h_inverse.degree();
  if (m.degree() > bound) throw DegreeBlowup(m.degree(), bound);
  auto f = map_power(g, kA);
  return {std::move(g), std::move(g_inverse), h, h_inverse, kA, std::move(f), std::move(m)};
}

ShiftedAlice shifted_elgamal_setup(const SymbolicKey& key, const AffineMap& h, std::uint64_t kA) {
  return shifted_elgamal_setup(key, h.to_polymap(), affine_inverse(h).to_polymap(), kA);
}

ShiftedCiphertext shifted_elgamal_encrypt(const PolyMap& f, const PolyMap& m, std::uint64_t kB,
                                          std::span<const Code> p) {
  check_exponent(kB, f.ring(), schubert_rank(f.dimension()), "kB");
  return {apply_repeated(f, kB, p), map_power(m, kB)};
}

std::vector<Code> shifted_elgamal_decrypt(const ShiftedAlice& alice, const ShiftedCiphertext& ct) {
  auto x = alice.h_inverse.apply(ct.c);
  x = apply_repeated(ct.a, alice.kA, x);
  return alice.h.apply(x);
}

// ---------------------------------------------------------------- twisted

TwistedKeys twisted_keygen(const RingPtr& ring, std::size_t k, SeedStream& rng, std::optional<AffineMap> T) {
  const std::size_t n = schubert_dimension(k);
  AffineMap t = T ? std::move(*T) : affine_sample_invertible(ring, n, rng);
  if (t.dimension() != n) throw ShapeMismatch("conjugator dimension does not match k(k+1)");
  auto [ea, a] = generate_stable_group_element(ring, k, rng, default_terminal(ring));
  auto [eb, b] = generate_stable_group_element(ring, k, rng, default_terminal(ring));
  TwistedPublic pub{k, map_conjugate(t, ea), map_conjugate(t, eb), map_conjugate(t, eta(key_inverse(b)))};
  return {std::move(pub), TwistedSecrets{std::move(t), std::move(a), std::move(b)}};
}

namespace {

PolyMap capped_power(const PolyMap& m, std::uint64_t e) { return map_power(m, e, kTransmittedDegreeCap); }

PolyMap capped_conjugate(const PolyMap& left, const PolyMap& mid, const PolyMap& right) {
  auto out = map_compose(map_compose(left, mid), right);
  if (out.degree() > kTransmittedDegreeCap) throw DegreeBlowup(out.degree(), kTransmittedDegreeCap);
  return out;
}

}  // namespace

TwistedRun twisted_exchange(const TwistedPublic& pub, const TwistedExponents& e) {
  const auto& R = pub.G.ring();
  check_exponent(e.kA, R, pub.k, "kA");
  check_exponent(e.rA, R, pub.k, "rA");
  check_exponent(e.kB, R, pub.k, "kB");
  check_exponent(e.rB, R, pub.k, "rB");
  // Alice
  const auto HrA = capped_power(pub.H, e.rA);
  const auto HmrA = capped_power(pub.H_inverse, e.rA);
  auto G_A = capped_conjugate(HrA, capped_power(pub.G, e.kA), HmrA);
  // Bob
  const auto HrB = capped_power(pub.H, e.rB);
  const auto HmrB = capped_power(pub.H_inverse, e.rB);
  auto G_B = capped_conjugate(HrB, capped_power(pub.G, e.kB), HmrB);

  auto Z_B = capped_conjugate(HrB, capped_power(G_A, e.kB), HmrB);
  auto Z_A = capped_conjugate(HrA, capped_power(G_B, e.kA), HmrA);
  if (!(Z_A == Z_B)) throw CollisionMismatch("collision maps Z_A and Z_B differ");
  return {std::move(G_A), std::move(G_B), std::move(Z_A), std::move(Z_B)};
}

// ------------------------------------------------------------------ tools

void require_pairwise_noncommuting(std::span<const AffineMap> ts) {
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      if (ts[i].dimension() != ts[j].dimension()) throw ShapeMismatch("conjugators have different dimensions");
      if (affine_compose(ts[i], ts[j]) == affine_compose(ts[j], ts[i])) {
        throw NonCommutingCheckFailed("conjugators " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                      " commute");
      }
    }
  }
}

Tools make_tools(AffineMap T1, AffineMap T2, SymbolicKey b, SymbolicKey c,
                 std::span<const AffineMap> session_conjugators) {
  std::vector<AffineMap> all(session_conjugators.begin(), session_conjugators.end());
  all.push_back(T1);
  all.push_back(T2);
  require_pairwise_noncommuting(all);
  auto P = map_conjugate(T1, eta(b));
  auto P_inverse = map_conjugate(T1, eta(key_inverse(b)));
  auto Q = map_conjugate(T2, eta(c));
  auto Q_inverse = map_conjugate(T2, eta(key_inverse(c)));
  return {std::move(T1), std::move(T2), std::move(b), std::move(c),
          std::move(P), std::move(P_inverse), std::move(Q), std::move(Q_inverse)};
}

namespace {

AffineMap sample_noncommuting(const RingPtr& ring, std::size_t n, SeedStream& rng, std::span<const AffineMap> others) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    auto t = affine_sample_invertible(ring, n, rng);
    bool ok = true;
    for (const auto& o : others) {
      if (affine_compose(t, o) == affine_compose(o, t)) {
        ok = false;
        break;
      }
    }
    if (ok) return t;
  }
  throw NonCommutingCheckFailed("no non-commuting conjugator found in 64 draws");
}

}  // namespace

Tools make_tools(const RingPtr& ring, std::size_t k, SeedStream& rng, std::span<const AffineMap> session_conjugators) {
  const std::size_t n = schubert_dimension(k);
  std::vector<AffineMap> all(session_conjugators.begin(), session_conjugators.end());
  auto T1 = sample_noncommuting(ring, n, rng, all);
  all.push_back(T1);
  auto T2 = sample_noncommuting(ring, n, rng, all);
  auto b = generate_stable_group_element(ring, k, rng, default_terminal(ring)).second;
  auto c = generate_stable_group_element(ring, k, rng, default_terminal(ring)).second;
  return make_tools(std::move(T1), std::move(T2), std::move(b), std::move(c), session_conjugators);
}

MaskedGenerators tools_mask(const Tools& tools, const PolyMap& Z, const PolyMap& Z2) {
  return {Z + tools.P, Z2 + tools.Q};
}

std::pair<PolyMap, PolyMap> tools_restore(const MaskedGenerators& masked, const PolyMap& Z, const PolyMap& Z2) {
  return {masked.masked_P - Z, masked.masked_Q - Z2};
}

// ---------------------------------------------------------- session cipher

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

std::uint64_t password_sum(std::span<const std::uint32_t> password) {
  std::uint64_t s = 0;
  for (auto a : password) s += a;
  return s;
}

}  // namespace

std::uint64_t word_degree_estimate(std::span<const std::uint32_t> password) {
  const std::uint64_t s = password_sum(password);
  return s >= 64 ? UINT64_MAX : std::uint64_t{1} << s;
}

std::uint64_t message_cap(std::size_t n, std::span<const std::uint32_t> password, std::uint64_t c) {
  const std::uint64_t D = word_degree_estimate(password);
  std::uint64_t m = c;
  if (n <= 1) return m;
  for (std::uint64_t i = 0; i + 1 < D && m != UINT64_MAX; ++i) m = sat_mul(m, n);
  return m;
}

std::vector<std::uint32_t> parse_password(std::string_view s) {
  std::vector<std::uint32_t> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    auto tok = s.substr(0, comma);
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() || v == 0) {
      throw InvalidSpec("password entries must be positive integers, got '" + std::string(tok) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  if (out.empty()) throw InvalidSpec("empty password");
  return out;
}

std::string password_to_string(std::span<const std::uint32_t> password) {
  std::string s;
  for (std::size_t i = 0; i < password.size(); ++i) s += (i ? "," : "") + std::to_string(password[i]);
  return s;
}

SessionCipher::SessionCipher(std::vector<PolyMap> generators, std::vector<std::uint32_t> password,
                             std::uint64_t cap_constant, std::vector<PolyMap> inverses)
    : generators_(std::move(generators)), password_(std::move(password)) {
  if (generators_.empty()) throw InvalidSpec("session cipher needs at least one generator");
  if (password_.empty()) throw InvalidSpec("empty password");
  for (auto a : password_) {
    if (a == 0) throw InvalidSpec("password entries must be positive");
  }
  if (!inverses.empty() && inverses.size() != generators_.size()) {
    throw ShapeMismatch("inverse list length differs from generator list length");
  }
  for (const auto& g : generators_) {
    if (!same_ring(g.ring(), generators_[0].ring()) || g.dimension() != generators_[0].dimension()) {
      throw ShapeMismatch("session generators differ in ring or dimension");
    }
    eval_.emplace_back(g);
  }
  for (const auto& g : inverses) inverse_eval_.emplace_back(g);
  cap_ = message_cap(dimension(), password_, cap_constant);
}

std::vector<Code> SessionCipher::encrypt(std::span<const Code> p) {
  if (counter_ >= cap_) throw MessageCapExceeded(counter_, cap_);
  if (p.size() != dimension()) throw ShapeMismatch("plaintext length does not match n");
  std::vector<Code> x(p.begin(), p.end()), y(p.size());
  for (std::size_t i = 0; i < password_.size(); ++i) {
    const auto& ev = eval_[i % eval_.size()];
    for (std::uint32_t r = 0; r < password_[i]; ++r) {
      ev.apply(x, y);
      std::swap(x, y);
    }
  }
  ++counter_;
  return x;
}

std::vector<Code> SessionCipher::decrypt(std::span<const Code> c) const {
  if (!can_decrypt()) throw InverseUnavailable("inverse generators were not delivered to this party");
  if (c.size() != dimension()) throw ShapeMismatch("ciphertext length does not match n");
  std::vector<Code> x(c.begin(), c.end()), y(c.size());
  for (std::size_t i = password_.size(); i-- > 0;) {
    const auto& ev = inverse_eval_[i % inverse_eval_.size()];
    for (std::uint32_t r = 0; r < password_[i]; ++r) {
      ev.apply(x, y);
      std::swap(x, y);
    }
  }
  return x;
}

PolyMap SessionCipher::word_map() const {
  auto w = PolyMap::identity(ring(), dimension());
  for (std::size_t i = 0; i < password_.size(); ++i) {
    w = map_compose(w, map_power(generators_[i % generators_.size()], password_[i]));
  }
  return w;
}

// -------------------------------------------------------- symmetric variant

SymmetricSetup symmetric_variant_setup(const RingPtr& ring, std::size_t k, std::size_t l, SeedStream& rng,
                                       const ExponentRule& rule) {
  if (l < 2 || l % 2) throw InvalidSpec("number of protocol runs l must be even and at least 2");
  const std::size_t n = schubert_dimension(k);
  SymmetricSetup s;
  s.l = l;
  std::vector<AffineMap> conjugators;
  for (std::size_t i = 0; i < l; ++i) {
    auto keys = twisted_keygen(ring, k, rng, sample_noncommuting(ring, n, rng, conjugators));
    conjugators.push_back(keys.secret.T);
    TwistedExponents e{rule.sample(ring, k, rng), rule.sample(ring, k, rng), rule.sample(ring, k, rng),
                       rule.sample(ring, k, rng)};
    s.collisions.push_back(twisted_exchange(keys.pub, e).collision());
  }
  const std::size_t fresh = l == 2 ? 2 : l / 2;
  std::vector<PolyMap> inverses;
  for (std::size_t j = 0; j < fresh; ++j) {
    auto t = sample_noncommuting(ring, n, rng, conjugators);
    conjugators.push_back(t);
    auto [e, key] = generate_stable_group_element(ring, k, rng, default_terminal(ring));
    s.alice_generators.push_back(map_conjugate(t, e));
    inverses.push_back(map_conjugate(t, eta(key_inverse(key))));
  }
  if (l >= 4) {
    for (auto& g : inverses) s.alice_generators.push_back(std::move(g));
  }
  for (std::size_t i = 0; i < l; ++i) {
    s.masked.push_back(s.collisions[i] + s.alice_generators[i]);
    s.bob_generators.push_back(s.masked[i] - s.collisions[i]);
  }
  return s;
}

SessionCipher bob_session_cipher(const SymmetricSetup& s, std::vector<std::uint32_t> password,
                                 std::uint64_t cap_constant) {
  if (s.l == 2) return SessionCipher(s.bob_generators, std::move(password), cap_constant);
  const auto half = static_cast<std::ptrdiff_t>(s.l / 2);
  std::vector<PolyMap> gens(s.bob_generators.begin(), s.bob_generators.begin() + half);
  std::vector<PolyMap> invs(s.bob_generators.begin() + half, s.bob_generators.end());
  return SessionCipher(std::move(gens), std::move(password), cap_constant, std::move(invs));
}

// -------------------------------------------------------------- transcript

std::string vector_to_text(std::span<const Code> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<Code> vector_from_text(std::string_view s) {
  std::vector<Code> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    auto tok = s.substr(0, comma);
    Code v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw ParseError("bad vector entry '" + std::string(tok) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

void Transcript::send(std::string party, std::string type, const PolyMap& m) {
  records_.push_back({std::move(party), std::move(type), m.to_text()});
}

void Transcript::send(std::string party, std::string type, std::span<const Code> v) {
  records_.push_back({std::move(party), std::move(type), vector_to_text(v) + "\n"});
}

std::optional<std::string> Transcript::header_value(std::string_view key) const {
  for (const auto& [k, v] : header_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string Transcript::to_text() const {
  std::string s = "TRANSCRIPT";
  for (const auto& [k, v] : header_) s += " " + k + "=" + v;
  s += "\n";
  for (const auto& r : records_) {
    s += "SEND " + r.party + " " + r.type + "\n" + r.payload;
    if (!r.payload.empty() && r.payload.back() != '\n') s += "\n";
    s += "END\n";
  }
  return s;
}

Transcript Transcript::parse(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  if (lines.empty() || !lines[0].starts_with("TRANSCRIPT")) throw ParseError("transcript must start with 'TRANSCRIPT'");
  Transcript t;
  std::istringstream hs{std::string(lines[0].substr(10))};
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("bad header field '" + tok + "'");
    t.header_.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
  }
  std::size_t i = 1;
  while (i < lines.size()) {
    if (lines[i].empty()) {
      ++i;
      continue;
    }
    if (!lines[i].starts_with("SEND ")) throw ParseError("expected 'SEND' at line " + std::to_string(i + 1));
    std::istringstream rs{std::string(lines[i].substr(5))};
    TranscriptRecord r;
    if (!(rs >> r.party >> r.type)) throw ParseError("bad SEND line " + std::to_string(i + 1));
    ++i;
    while (i < lines.size() && lines[i] != "END") {
      r.payload += std::string(lines[i]) + "\n";
      ++i;
    }
    if (i == lines.size()) throw ParseError("record without END");
    ++i;
    t.records_.push_back(std::move(r));
  }
  return t;
}

std::string TranscriptMismatch::message() const {
  if (record == 0) return "transcript header differs (" + location + ")";
  return "record " + std::to_string(record) + " (" + party + " " + type + "): " + location + " differs";
}

std::optional<TranscriptMismatch> compare_transcripts(const Transcript& expected, const Transcript& actual) {
  if (expected.header() != actual.header()) return TranscriptMismatch{0, "", "", "header fields"};
  const auto& e = expected.records();
  const auto& a = actual.records();
  for (std::size_t i = 0; i < std::min(e.size(), a.size()); ++i) {
    TranscriptMismatch mm{i + 1, a[i].party, a[i].type, ""};
    if (e[i].party != a[i].party || e[i].type != a[i].type) {
      mm.location = "sender or artefact type";
      return mm;
    }
    if (e[i].payload == a[i].payload) continue;
    if (e[i].payload.starts_with("MAP ")) {
      try {
        const auto me = PolyMap::parse(e[i].payload);
        const auto ma = PolyMap::parse(a[i].payload);
        if (!same_ring(me.ring(), ma.ring()) || me.dimension() != ma.dimension()) {
          mm.location = "map header";
          return mm;
        }
        for (std::size_t c = 0; c < me.dimension(); ++c) {
          if (!(me[c] == ma[c])) {
            mm.location = "coordinate x" + std::to_string(c + 1);
            return mm;
          }
        }
        mm.location = "map formatting";
      } catch (const Error&) {
        mm.location = "payload (unparseable map)";
      }
      return mm;
    }
    try {
      const auto ve = vector_from_text(std::string_view(e[i].payload).substr(0, e[i].payload.size() - 1));
      auto pa = std::string_view(a[i].payload);
      if (!pa.empty() && pa.back() == '\n') pa.remove_suffix(1);
      const auto va = vector_from_text(pa);
      for (std::size_t c = 0; c < std::min(ve.size(), va.size()); ++c) {
        if (ve[c] != va[c]) {
          mm.location = "element " + std::to_string(c + 1);
          return mm;
        }
      }
      mm.location = "vector length";
    } catch (const Error&) {
      mm.location = "payload (unparseable vector)";
    }
    return mm;
  }
  if (e.size() != a.size()) return TranscriptMismatch{std::min(e.size(), a.size()) + 1, "", "", "record count"};
  return std::nullopt;
}

// -------------------------------------------------------------- simulation

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::kDH: return "dh";
    case Scheme::kElGamal: return "elgamal";
    case Scheme::kShifted: return "shifted";
    case Scheme::kTwisted: return "twisted";
  }
  return "?";
}

Scheme parse_scheme(std::string_view s) {
  if (s == "dh") return Scheme::kDH;
  if (s == "elgamal") return Scheme::kElGamal;
  if (s == "shifted") return Scheme::kShifted;
  if (s == "twisted") return Scheme::kTwisted;
  throw InvalidSpec("unknown scheme '" + std::string(s) + "' (dh, elgamal, shifted, twisted)");
}

bool SimResult::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const SimCheck& c) { return c.pass; });
}

namespace {

std::string double_text(double d) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, ptr);
}

std::vector<Code> random_vector(const RingPtr& ring, std::size_t n, SeedStream& rng) {
  std::vector<Code> v(n);
  for (auto& x : v) x = ring->sample(rng);
  return v;
}

std::string degree_density(const PolyMap& m) {
  return "deg " + std::to_string(m.degree()) + " density " + std::to_string(m.density());
}

struct Sim {
  const SimConfig& cfg;
  SeedStream setup, alice, bob;
  SimResult out;

  Sim(Scheme scheme, const SimConfig& c, SeedStream root)
      : cfg(c), setup(root.fork("setup")), alice(root.fork("alice")), bob(root.fork("bob")) {
    out.transcript = Transcript({{"scheme", to_string(scheme)},
                                 {"ring", c.ring->descriptor()},
                                 {"k", std::to_string(c.k)},
                                 {"seed", std::to_string(c.seed)},
                                 {"policy", to_string(c.exponents.policy)},
                                 {"size_exponent", double_text(c.exponents.size_exponent)},
                                 {"password", password_to_string(c.password)},
                                 {"c", std::to_string(c.cap_constant)},
                                 {"messages", std::to_string(c.messages)}});
  }

  std::size_t n() const { return schubert_dimension(cfg.k); }
  std::uint64_t exponent(SeedStream& rng) { return cfg.exponents.sample(cfg.ring, cfg.k, rng); }
  void check(std::string name, bool pass, std::string detail = {}) {
    out.checks.push_back({std::move(name), pass, std::move(detail)});
  }
  void send(const char* party, const char* type, const PolyMap& m) { out.transcript.send(party, type, m); }
  void send(const char* party, const char* type, std::span<const Code> v) { out.transcript.send(party, type, v); }

  void dh() {
    auto [g, key] = generate_stable_group_element(cfg.ring, cfg.k, setup, default_terminal(cfg.ring));
    send("alice", "generator", g);
    const auto kA = exponent(alice), kB = exponent(bob);
    try {
      auto r = dh_run(g, kA, kB);
      send("alice", "power", r.alice_sends);
      send("bob", "power", r.bob_sends);
      check("dh.shares_equal", r.alice_share == r.bob_share, degree_density(r.alice_share));
      check("dh.share_is_g^(kA*kB)", r.alice_share == eta(key_power(key, kA * kB)));
    } catch (const DegreeBlowup& e) {
      check("dh.degree_cap", false, e.what());
    }
  }

  void elgamal() {
    auto key = generate_stable_group_element(cfg.ring, cfg.k, setup, default_terminal(cfg.ring)).second;
    const auto a = elgamal_setup(key, exponent(alice));
    send("alice", "f", a.f);
    send("alice", "g_inverse", a.g_inverse);
    check("elgamal.g_inverse", map_compose(a.g, a.g_inverse).is_identity(), degree_density(a.g));
    std::size_t ok = 0;
    for (std::size_t i = 0; i < cfg.messages; ++i) {
      const auto p = random_vector(cfg.ring, n(), bob);
      const auto ct = elgamal_encrypt(a.f, a.g_inverse, exponent(bob), p);
      send("bob", "ciphertext", ct.c);
      send("bob", "h", ct.h);
      ok += elgamal_decrypt(a, ct) == p;
    }
    check("elgamal.round_trip", ok == cfg.messages, std::to_string(ok) + "/" + std::to_string(cfg.messages));
  }

  void shifted() {
    auto key = generate_stable_group_element(cfg.ring, cfg.k, setup, default_terminal(cfg.ring)).second;
    const auto h = affine_sample_invertible(cfg.ring, n(), setup);
    const auto a = shifted_elgamal_setup(key, h, exponent(alice));
    send("alice", "f", a.f);
    send("alice", "m", a.m);
    const int bound = a.h.degree() * a.g_inverse.degree() * a.h_inverse.degree();
    check("shifted.degree_m", a.m.degree() <= bound,
          std::to_string(a.m.degree()) + " <= " + std::to_string(bound));
    std::size_t ok = 0;
    for (std::size_t i = 0; i < cfg.messages; ++i) {
      const auto p = random_vector(cfg.ring, n(), bob);
      const auto ct = shifted_elgamal_encrypt(a.f, a.m, exponent(bob), p);
      send("bob", "ciphertext", ct.c);
      send("bob", "a", ct.a);
      ok += shifted_elgamal_decrypt(a, ct) == p;
    }
    check("shifted.round_trip", ok == cfg.messages, std::to_string(ok) + "/" + std::to_string(cfg.messages));
  }

  void twisted() {
    int max_degree = 0;
    auto transmit = [&](const char* party, const char* type, const PolyMap& m) {
      send(party, type, m);
      max_degree = std::max(max_degree, m.degree());
    };
    std::vector<PolyMap> collisions;
    std::vector<AffineMap> conjugators;
    for (const char* session : {"1", "2"}) {
      auto keys = twisted_keygen(cfg.ring, cfg.k, setup);
      conjugators.push_back(keys.secret.T);
      const std::string s = session;
      transmit("alice", ("G" + s).c_str(), keys.pub.G);
      transmit("alice", ("H" + s).c_str(), keys.pub.H);
      transmit("alice", ("H" + s + "_inverse").c_str(), keys.pub.H_inverse);
      TwistedExponents e;
      e.kA = exponent(alice);
      e.rA = exponent(alice);
      e.kB = exponent(bob);
      e.rB = exponent(bob);
      try {
        auto run = twisted_exchange(keys.pub, e);
        transmit("alice", ("G" + s + "_A").c_str(), run.G_A);
        transmit("bob", ("G" + s + "_B").c_str(), run.G_B);
        check("twisted.collision_" + s, true, degree_density(run.collision()));
        collisions.push_back(run.collision());
      } catch (const CollisionMismatch& ex) {
        check("twisted.collision_" + s, false, ex.what());
        return;
      }
    }
    const auto tools = make_tools(cfg.ring, cfg.k, setup, conjugators);
    const auto masked = tools_mask(tools, collisions[0], collisions[1]);
    transmit("alice", "masked_P", masked.masked_P);
    transmit("alice", "masked_Q", masked.masked_Q);
    check("twisted.transmitted_degree", max_degree <= kTransmittedDegreeCap,
          "max " + std::to_string(max_degree) + " <= " + std::to_string(kTransmittedDegreeCap));
    const auto [P, Q] = tools_restore(masked, collisions[0], collisions[1]);
    check("twisted.tools_restored", P == tools.P && Q == tools.Q, "P " + degree_density(P) + ", Q " + degree_density(Q));

    SessionCipher bob_cipher({P, Q}, cfg.password, cfg.cap_constant);
    const SessionCipher alice_cipher({tools.P, tools.Q}, cfg.password, cfg.cap_constant,
                                     {tools.P_inverse, tools.Q_inverse});
    std::size_t ok = 0;
    for (std::size_t i = 0; i < cfg.messages; ++i) {
      const auto p = random_vector(cfg.ring, n(), bob);
      const auto y = bob_cipher.encrypt(p);
      send("bob", "ciphertext", y);
      ok += alice_cipher.decrypt(y) == p;
    }
    check("twisted.session_round_trip", ok == cfg.messages,
          std::to_string(ok) + "/" + std::to_string(cfg.messages) + ", cap " + std::to_string(bob_cipher.cap()));
  }
};

}  // namespace

SimResult simulate_protocol(Scheme scheme, const SimConfig& config) {
  if (!config.ring) throw InvalidSpec("simulation needs a ring");
  if (config.k < 2) throw InvalidSpec("k must be at least 2");
  Sim sim(scheme, config, SeedStream(config.seed));
  switch (scheme) {
    case Scheme::kDH: sim.dh(); break;
    case Scheme::kElGamal: sim.elgamal(); break;
    case Scheme::kShifted: sim.shifted(); break;
    case Scheme::kTwisted: sim.twisted(); break;
  }
  return std::move(sim.out);
}

std::pair<Scheme, SimConfig> sim_config_from_transcript(const Transcript& t) {
  auto get = [&](std::string_view key) {
    auto v = t.header_value(key);
    if (!v) throw ParseError("transcript header lacks '" + std::string(key) + "'");
    return *v;
  };
  auto u64 = [&](std::string_view key) {
    const auto s = get(key);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError("bad header value " + s);
    return v;
  };
  SimConfig c;
  const Scheme scheme = parse_scheme(get("scheme"));
  c.ring = Ring::parse(get("ring"));
  c.k = u64("k");
  c.seed = u64("seed");
  c.exponents.policy = parse_exponent_policy(get("policy"));
  const auto d = get("size_exponent");
  auto [ptr, ec] = std::from_chars(d.data(), d.data() + d.size(), c.exponents.size_exponent);
  if (ec != std::errc{} || ptr != d.data() + d.size()) throw ParseError("bad size_exponent " + d);
  c.password = parse_password(get("password"));
  c.cap_constant = u64("c");
  c.messages = u64("messages");
  return {scheme, std::move(c)};
}

std::optional<TranscriptMismatch> replay_and_compare(const Transcript& received) {
  const auto [scheme, cfg] = sim_config_from_transcript(received);
  return compare_transcripts(simulate_protocol(scheme, cfg).transcript, received);
}

}  // namespace dscrypt
