#include "dscrypt/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dscrypt/errors.hpp"

namespace dscrypt {

std::string to_string(TerminalKind kind) {
  switch (kind) {
    case TerminalKind::kCyclePermutation: return "cycle";
    case TerminalKind::kSinger: return "singer";
    case TerminalKind::kGeneralAffine: return "affine";
  }
  return "?";
}

TerminalKind parse_terminal_kind(std::string_view s) {
  if (s == "cycle") return TerminalKind::kCyclePermutation;
  if (s == "singer") return TerminalKind::kSinger;
  if (s == "affine") return TerminalKind::kGeneralAffine;
  throw InvalidSpec("unknown terminal colour kind '" + std::string(s) + "'");
}

void FamilySpec::validate() const {
  if (!ring) throw InvalidSpec("family spec has no ring");
  if (k < 1) throw InvalidSpec("k must be at least 1");
  if (degree < 2) throw InvalidSpec("target degree T must be at least 2");
  if (half_length < 1) throw InvalidSpec("walk half-length t must be at least 1");
  if (!(density_exponent >= 0.5) || density_exponent > degree) {
    throw InvalidSpec("density exponent d must satisfy 1/2 <= d <= T");
  }
  if (terminal == TerminalKind::kSinger && !ring->is_field()) throw InvalidSpec("Singer cycles need a field");
  if (terminal == TerminalKind::kCyclePermutation && k < 2) {
    throw InvalidSpec("a cycle permutation terminal colour needs k >= 2");
  }
  if (terminal == TerminalKind::kGeneralAffine) {
    if (!terminal_map) throw InvalidSpec("general affine terminal colour not supplied");
    if (terminal_map->dimension() != k || !same_ring(terminal_map->ring(), ring)) {
      throw InvalidSpec("terminal map does not act on K^k");
    }
    if (!terminal_map->is_invertible()) throw InvalidSpec("terminal map is not invertible");
  }
}

namespace {

// All exponent vectors in k variables of total degree <= d.
void enumerate_monomials(std::size_t k, int d, std::vector<std::uint32_t>& cur, std::size_t var,
                         std::vector<Monomial>& out) {
  if (var == k) {
    out.push_back(Monomial::from_exponents(cur));
    return;
  }
  for (int e = 0; e <= d; ++e) {
    cur[var] = static_cast<std::uint32_t>(e);
    enumerate_monomials(k, d - e, cur, var + 1, out);
  }
  cur[var] = 0;
}

Code nonzero(const Ring& R, SeedStream& rng) { return 1 + rng.uniform(R.size() - 1); }

// m distinct monomials of degree <= d, at least one of degree exactly d.
Polynomial sparse_colour_coordinate(const RingPtr& R, std::size_t k, int d, std::size_t m,
                                    const std::vector<Monomial>& pool, SeedStream& rng) {
  std::vector<std::size_t> top, rest;
  for (std::size_t i = 0; i < pool.size(); ++i) (pool[i].degree() == d ? top : rest).push_back(i);
  const std::size_t lead = top[rng.uniform(top.size())];
  for (std::size_t i : top)
    if (i != lead) rest.push_back(i);
  std::vector<Term> terms{{pool[lead], nonzero(*R, rng)}};
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const std::size_t pick = j + rng.uniform(rest.size() - j);
    std::swap(rest[j], rest[pick]);
    terms.push_back({pool[rest[j]], nonzero(*R, rng)});
  }
  return Polynomial::from_terms(R, k, std::move(terms));
}

SymbolicColour dense_affine_colour(const RingPtr& R, std::size_t k, SeedStream& rng) {
  SymbolicColour c;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Term> terms{{Monomial(), nonzero(*R, rng)}};
    for (std::size_t j = 0; j < k; ++j) terms.push_back({Monomial::variable(static_cast<std::uint32_t>(j)), nonzero(*R, rng)});
    c.push_back(Polynomial::from_terms(R, k, std::move(terms)));
  }
  return c;
}

SymbolicColour cycle_colour(const RingPtr& R, std::size_t k) {
  SymbolicColour c;
  for (std::size_t i = 0; i < k; ++i) c.push_back(Polynomial::variable(R, k, static_cast<std::uint32_t>((i + 1) % k)));
  return c;
}

SymbolicColour random_affine_colour(const RingPtr& R, std::size_t k, SeedStream& rng) {
  return colour_from_affine(affine_sample(R, k, rng));
}

// A C A^{-1} x + b with C a Singer cycle.
SymbolicColour singer_conjugate_colour(const RingPtr& R, std::size_t k, SeedStream& rng) {
  const auto c = singer_cycle(R, k);
  const auto a = affine_sample_invertible(R, k, rng);
  const auto ainv = a.matrix().inverse();
  std::vector<Code> shift(k);
  for (auto& v : shift) v = R->sample(rng);
  return colour_from_affine(AffineMap(a.matrix() * c.matrix() * *ainv, std::move(shift)));
}

}  // namespace

FamilyMember generate_stable_family_member(const FamilySpec& spec, SeedStream& rng) {
  spec.validate();
  const auto& R = spec.ring;
  const std::size_t k = spec.k;
  const std::size_t n = schubert_dimension(k);
  const int odd_degree = spec.degree - 1;

  std::vector<Monomial> pool;
  std::vector<std::uint32_t> cur(k, 0);
  enumerate_monomials(k, odd_degree, cur, 0, pool);
  const double target = std::pow(static_cast<double>(n), spec.density_exponent);
  const auto m = static_cast<std::size_t>(std::ceil(target / static_cast<double>(k) - 1e-9));
  if (m > pool.size()) {
    std::ostringstream msg;
    msg << "density exponent " << spec.density_exponent << " needs " << m
        << " monomials per colour coordinate, but only " << pool.size() << " exist of degree <= "
        << odd_degree << " in " << k << " variables";
    throw UnreachableDensity(msg.str(), 1, pool.size());
  }

  SymbolicColour terminal;
  switch (spec.terminal) {
    case TerminalKind::kCyclePermutation: terminal = cycle_colour(R, k); break;
    case TerminalKind::kSinger: terminal = colour_from_affine(singer_cycle(R, k)); break;
    case TerminalKind::kGeneralAffine: terminal = colour_from_affine(*spec.terminal_map); break;
  }

  constexpr std::size_t kMaxAttempts = 64;
  for (std::size_t attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    std::vector<SymbolicColour> colours;
    for (std::size_t i = 1; i <= 2 * spec.half_length; ++i) {
      if (i == 2 * spec.half_length) {
        colours.push_back(terminal);
      } else if (i % 2 == 1) {
        SymbolicColour c;
        for (std::size_t r = 0; r < k; ++r) c.push_back(sparse_colour_coordinate(R, k, odd_degree, std::max<std::size_t>(m, 1), pool, rng));
        colours.push_back(std::move(c));
      } else {
        colours.push_back(dense_affine_colour(R, k, rng));
      }
    }
    SymbolicKey key(R, k, std::move(colours));
    auto F = eta(key);
    const auto bound = lemma1_bound(key);
    if (bound.degree != spec.degree || F.degree() != spec.degree) continue;
    FamilyMember out{std::move(F), std::move(key), m, m, bound.density, attempt};
    if (out.map.density() < out.density_low) continue;
    return out;
  }
  throw UnreachableDensity("no balanced key found for the requested family", 1, pool.size());
}

std::pair<PolyMap, SymbolicKey> generate_stable_group_element(const RingPtr& R, std::size_t k, SeedStream& rng,
                                                              TerminalKind terminal, std::size_t half_length) {
  if (half_length < 1) throw InvalidSpec("walk half-length t must be at least 1");
  std::vector<SymbolicColour> colours;
  for (std::size_t i = 1; i < 2 * half_length; ++i) colours.push_back(random_affine_colour(R, k, rng));
  switch (terminal) {
    case TerminalKind::kSinger:
      if (!R->is_field()) throw InvalidSpec("Singer cycles need a field");
      colours.push_back(singer_conjugate_colour(R, k, rng));
      break;
    case TerminalKind::kCyclePermutation: colours.push_back(cycle_colour(R, k)); break;
    case TerminalKind::kGeneralAffine: colours.push_back(colour_from_affine(affine_sample_invertible(R, k, rng))); break;
  }
  SymbolicKey key(R, k, std::move(colours));
  auto F = eta(key);
  return {std::move(F), std::move(key)};
}

std::uint64_t map_hash(const PolyMap& f) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : f.to_text()) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

std::string StabilityCertificate::to_text() const {
  std::ostringstream os;
  os << "certificate.map_hash=" << std::hex << map_hash << std::dec << "\n"
     << "certificate.claimed_degree=" << claimed_degree << "\n"
     << "certificate.degree=" << degree << "\n"
     << "certificate.density=" << density << "\n"
     << "certificate.powers_checked=" << powers_checked << "\n"
     << "certificate.max_degree=" << max_degree << "\n"
     << "certificate.power_degrees=";
  for (std::size_t i = 0; i < power_degrees.size(); ++i) os << (i ? "," : "") << power_degrees[i];
  os << "\n";
  if (!order_evidence.empty()) os << "certificate.order_evidence=" << order_evidence << "\n";
  os << "certificate.valid=" << (valid ? "true" : "false") << "\n";
  return os.str();
}

namespace {

StabilityCertificate start_certificate(const PolyMap& f, int claimed) {
  StabilityCertificate c;
  c.map_hash = map_hash(f);
  c.claimed_degree = claimed;
  c.degree = f.degree();
  c.density = f.density();
  return c;
}

void record(StabilityCertificate& c, std::size_t power, int degree) {
  c.power_degrees.push_back(degree);
  c.powers_checked = power;
  c.max_degree = std::max(c.max_degree, degree);
  if (degree > c.claimed_degree) throw DegreeExceeded(power, degree, c.claimed_degree);
}

}  // namespace

StabilityCertificate check_stability(const PolyMap& f, int claimed, std::size_t J) {
  if (J < 1) throw InvalidSpec("J must be at least 1");
  auto cert = start_certificate(f, claimed);
  PolyMap p = f;
  record(cert, 1, p.degree());
  for (std::size_t j = 2; j <= J; ++j) {
    p = map_compose(p, f);
    record(cert, j, p.degree());
  }
  cert.valid = true;
  return cert;
}

StabilityCertificate check_key_stability(const SymbolicKey& key, int claimed, std::size_t J) {
  if (J < 1) throw InvalidSpec("J must be at least 1");
  auto cert = start_certificate(eta(key), claimed);
  SymbolicKey p = key;
  record(cert, 1, cert.degree);
  for (std::size_t j = 2; j <= J; ++j) {
    p = key_product(p, key);
    record(cert, j, eta(p).degree());
  }
  if (auto ord = projection_order(key)) cert.order_evidence = "projection_order=" + std::to_string(*ord);
  cert.valid = true;
  return cert;
}

std::optional<std::uint64_t> projection_order(const SymbolicKey& key, std::uint64_t limit) {
  if (key.length() == 0) return 1;
  const auto q = key.ring()->size();
  std::uint64_t points = 1;
  for (std::size_t i = 0; i < key.k(); ++i) {
    if (points > limit / q) return std::nullopt;
    points *= q;
  }
  return static_cast<std::uint64_t>(map_order_bruteforce(colour_as_map(key.last()), limit));
}

DensityFit measure_family_density(std::span<const std::pair<std::size_t, std::size_t>> pts) {
  std::vector<std::size_t> ns;
  for (auto [n, d] : pts) {
    if (n < 2 || d == 0) throw InsufficientData("dimensions must be >= 2 and densities positive");
    ns.push_back(n);
  }
  std::sort(ns.begin(), ns.end());
  if (std::unique(ns.begin(), ns.end()) - ns.begin() < 3) {
    throw InsufficientData("need at least three members with distinct n");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double cnt = static_cast<double>(pts.size());
  for (auto [n, d] : pts) {
    const double x = std::log(static_cast<double>(n)), y = std::log(static_cast<double>(d));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  DensityFit fit;
  fit.exponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  fit.intercept = (sy - fit.exponent * sx) / cnt;
  double ss = 0;
  for (auto [n, d] : pts) {
    const double r = std::log(static_cast<double>(d)) - fit.intercept - fit.exponent * std::log(static_cast<double>(n));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / cnt);
  return fit;
}

DensityFit measure_family_density(std::span<const std::pair<std::size_t, PolyMap>> members) {
  std::vector<std::pair<std::size_t, std::size_t>> pts;
  for (const auto& [n, f] : members) pts.emplace_back(n, f.density());
  return measure_family_density(pts);
}

}  // namespace dscrypt
