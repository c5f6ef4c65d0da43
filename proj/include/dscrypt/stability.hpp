#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dscrypt/polymap.hpp"
#include "dscrypt/schubert.hpp"

namespace dscrypt {

enum class TerminalKind { kCyclePermutation, kSinger, kGeneralAffine };

std::string to_string(TerminalKind kind);
TerminalKind parse_terminal_kind(std::string_view s);

/// Parameters of a family of stable maps of degree T and density ~ n^d.
struct FamilySpec {
  RingPtr ring;
  std::size_t k = 2;
  int degree = 2;                 // T
  double density_exponent = 1.0;  // d
  std::size_t half_length = 2;    // t, the key has 2t colours
  TerminalKind terminal = TerminalKind::kCyclePermutation;
  std::optional<AffineMap> terminal_map;  // for kGeneralAffine

  /// Throws InvalidSpec.
  void validate() const;
};

struct FamilyMember {
  PolyMap map;
  SymbolicKey key;
  std::size_t monomials_per_colour = 0;  // m = ceil(n^d / k)
  std::size_t density_low = 0;           // achievable range for the map density
  std::size_t density_high = 0;          // Lemma-1 bound
  std::size_t attempts = 0;
};

/// Balanced closed computation with M = T: odd colours of degree T-1 built
/// from m random monomials, dense affine even colours and the requested
/// terminal colour. Throws UnreachableDensity when m exceeds the number of
/// monomials of degree <= T-1 in k variables.
FamilyMember generate_stable_family_member(const FamilySpec& spec, SeedStream& rng);

/// Element of E_k(K): all colours affine, the last one invertible. With
/// kSinger the last colour is a conjugate of a Singer cycle plus a shift.
std::pair<PolyMap, SymbolicKey> generate_stable_group_element(
    const RingPtr& ring, std::size_t k, SeedStream& rng,
    TerminalKind terminal = TerminalKind::kSinger, std::size_t half_length = 2);

struct StabilityCertificate {
  std::uint64_t map_hash = 0;  // FNV-1a of the standard-form text
  int claimed_degree = 0;
  int degree = 0;
  std::size_t density = 0;
  std::size_t powers_checked = 0;
  int max_degree = 0;
  std::vector<int> power_degrees;  // deg f^j, j = 1..J
  std::string order_evidence;
  bool valid = false;

  /// key=value lines.
  std::string to_text() const;
};

/// Computes f^2..f^J by repeated composition. Throws DegreeExceeded at the
/// first power whose degree exceeds the claim.
StabilityCertificate check_stability(const PolyMap& f, int claimed_degree, std::size_t J = 10);

/// Same check through the symbolic key: f^j = eta(key^j).
StabilityCertificate check_key_stability(const SymbolicKey& key, int claimed_degree, std::size_t J = 10);

/// Order of the last colour as a permutation of K^k (brute force), which
/// divides the order of eta(key). nullopt when K^k is too large.
std::optional<std::uint64_t> projection_order(const SymbolicKey& key, std::uint64_t limit = std::uint64_t{1} << 20);

std::uint64_t map_hash(const PolyMap& f);

struct DensityFit {
  double exponent = 0;
  double intercept = 0;  // log C
  double residual = 0;   // RMS of log residuals
};

/// Least-squares slope of log(density) against log(n). Needs at least three
/// members with distinct n; throws InsufficientData.
DensityFit measure_family_density(std::span<const std::pair<std::size_t, PolyMap>> members);
DensityFit measure_family_density(std::span<const std::pair<std::size_t, std::size_t>> densities);

}  // namespace dscrypt
