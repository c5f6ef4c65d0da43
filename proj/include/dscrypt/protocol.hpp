#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dscrypt/polymap.hpp"
#include "dscrypt/schubert.hpp"
#include "dscrypt/stability.hpp"

namespace dscrypt {

// ------------------------------------------------------------- exponents

enum class ExponentPolicy { kUniform, kPolynomial };

std::string to_string(ExponentPolicy p);
ExponentPolicy parse_exponent_policy(std::string_view s);

/// Private exponents are drawn from [2, q^k - 2] (uniform) or from
/// [2, min(n^d, q^k - 2)] (polynomial size).
struct ExponentRule {
  ExponentPolicy policy = ExponentPolicy::kUniform;
  double size_exponent = 1.0;  // d_A = d_B

  std::uint64_t sample(const RingPtr& ring, std::size_t k, SeedStream& rng) const;
};

/// q^k - 2, saturating.
std::uint64_t exponent_bound(const RingPtr& ring, std::size_t k);
/// Throws ExponentOutOfRange when e > q^k - 2.
void check_exponent(std::uint64_t e, const RingPtr& ring, std::size_t k, std::string_view what);

/// k with k(k+1) = n; throws ShapeMismatch otherwise.
std::size_t schubert_rank(std::size_t n);

/// f applied `times` times to p, numerically.
std::vector<Code> apply_repeated(const PolyMap& f, std::uint64_t times, std::span<const Code> p);

/// Terminal colour used for generators over this ring: Singer cycles over
/// fields, a random invertible affine map over Z_m.
TerminalKind default_terminal(const RingPtr& ring);

// ------------------------------------------------------------ Diffie-Hellman

struct DHResult {
  PolyMap alice_sends;  // g^kA
  PolyMap bob_sends;    // g^kB
  PolyMap alice_share;  // (g^kB)^kA
  PolyMap bob_share;    // (g^kA)^kB
};

/// Both sides of the exchange. Every intermediate power is capped at the
/// degree of g (or `degree_cap`); a larger degree raises DegreeBlowup.
DHResult dh_run(const PolyMap& g, std::uint64_t kA, std::uint64_t kB, std::optional<int> degree_cap = std::nullopt);

// ---------------------------------------------------------------- El Gamal

struct ElGamalAlice {
  PolyMap g;
  PolyMap g_inverse;
  std::uint64_t kA = 0;
  PolyMap f;  // g^kA, published with g^{-1}
};

struct ElGamalCiphertext {
  std::vector<Code> c;  // f^kB(p)
  PolyMap h;            // (g^{-1})^kB
};

/// g = eta(key), g^{-1} = eta(key^{-1}).
ElGamalAlice elgamal_setup(const SymbolicKey& key, std::uint64_t kA);
ElGamalCiphertext elgamal_encrypt(const PolyMap& f, const PolyMap& g_inverse, std::uint64_t kB,
                                  std::span<const Code> p);
/// h^kA(c).
std::vector<Code> elgamal_decrypt(const ElGamalAlice& alice, const ElGamalCiphertext& ct);

struct ShiftedAlice {
  PolyMap g;
  PolyMap g_inverse;
  PolyMap h;
  PolyMap h_inverse;
  std::uint64_t kA = 0;
  PolyMap f;  // g^kA
  PolyMap m;  // h g^{-1} h^{-1}
};

struct ShiftedCiphertext {
  std::vector<Code> c;  // f^kB(p)
  PolyMap a;            // m^kB
};

/// Throws DegreeBlowup if deg m exceeds deg h * deg g^{-1} * deg h^{-1}.
ShiftedAlice shifted_elgamal_setup(const SymbolicKey& key, const PolyMap& h, const PolyMap& h_inverse,
                                   std::uint64_t kA);
ShiftedAlice shifted_elgamal_setup(const SymbolicKey& key, const AffineMap& h, std::uint64_t kA);
ShiftedCiphertext shifted_elgamal_encrypt(const PolyMap& f, const PolyMap& m, std::uint64_t kB,
                                          std::span<const Code> p);
/// h^{-1} a^kA h (c).
std::vector<Code> shifted_elgamal_decrypt(const ShiftedAlice& alice, const ShiftedCiphertext& ct);

// ---------------------------------------------------------------- twisted

inline constexpr int kTransmittedDegreeCap = 8;

struct TwistedPublic {
  std::size_t k = 0;
  PolyMap G;
  PolyMap H;
  PolyMap H_inverse;
};

struct TwistedSecrets {
  AffineMap T;
  SymbolicKey a;
  SymbolicKey b;
};

struct TwistedKeys {
  TwistedPublic pub;
  TwistedSecrets secret;
};

/// G = T eta(a) T^{-1}, H = T eta(b) T^{-1}, H^{-1} = T eta(b^{-1}) T^{-1}.
TwistedKeys twisted_keygen(const RingPtr& ring, std::size_t k, SeedStream& rng,
                           std::optional<AffineMap> T = std::nullopt);

struct TwistedExponents {
  std::uint64_t kA = 0, rA = 0, kB = 0, rB = 0;
};

struct TwistedRun {
  PolyMap G_A;  // H^rA G^kA H^-rA
  PolyMap G_B;  // H^rB G^kB H^-rB
  PolyMap Z_A;  // H^rA G_B^kA H^-rA
  PolyMap Z_B;  // H^rB G_A^kB H^-rB
  const PolyMap& collision() const { return Z_A; }
};

/// Throws ExponentOutOfRange, DegreeBlowup (cap 8 on every intermediate) or
/// CollisionMismatch.
TwistedRun twisted_exchange(const TwistedPublic& pub, const TwistedExponents& e);

// ------------------------------------------------------------------ tools

/// Throws NonCommutingCheckFailed naming the first commuting pair.
void require_pairwise_noncommuting(std::span<const AffineMap> ts);

struct Tools {
  AffineMap T1;
  AffineMap T2;
  SymbolicKey b;
  SymbolicKey c;
  PolyMap P;  // T1 eta(b) T1^{-1}
  PolyMap P_inverse;
  PolyMap Q;  // T2 eta(c) T2^{-1}
  PolyMap Q_inverse;
};

/// Checks T1, T2 and the session conjugators for pairwise non-commutation.
Tools make_tools(AffineMap T1, AffineMap T2, SymbolicKey b, SymbolicKey c,
                 std::span<const AffineMap> session_conjugators);
/// Random conjugators and E_k strings.
Tools make_tools(const RingPtr& ring, std::size_t k, SeedStream& rng, std::span<const AffineMap> session_conjugators);

struct MaskedGenerators {
  PolyMap masked_P;  // Z + P
  PolyMap masked_Q;  // Z' + Q
};

MaskedGenerators tools_mask(const Tools& tools, const PolyMap& Z, const PolyMap& Z2);
/// (Z + P) - Z and (Z' + Q) - Z'.
std::pair<PolyMap, PolyMap> tools_restore(const MaskedGenerators& masked, const PolyMap& Z, const PolyMap& Z2);

// ---------------------------------------------------------- session cipher

/// M = c * n^(D-1) with D = 2^(sum of the password), saturating at 2^64 - 1.
std::uint64_t message_cap(std::size_t n, std::span<const std::uint32_t> password, std::uint64_t c = 1);
/// 2^(sum of the password), saturating.
std::uint64_t word_degree_estimate(std::span<const std::uint32_t> password);

std::vector<std::uint32_t> parse_password(std::string_view s);
std::string password_to_string(std::span<const std::uint32_t> password);

/// Block i of the password uses generator i mod g, so with (P, Q) the word is
/// P^a1 Q^a2 P^a3 ... and an odd length ends on a P-block.
class SessionCipher {
 public:
  SessionCipher(std::vector<PolyMap> generators, std::vector<std::uint32_t> password, std::uint64_t cap_constant = 1,
                std::vector<PolyMap> inverses = {});

  std::size_t dimension() const { return generators_.front().dimension(); }
  const RingPtr& ring() const { return generators_.front().ring(); }
  std::uint64_t counter() const { return counter_; }
  std::uint64_t cap() const { return cap_; }
  const std::vector<std::uint32_t>& password() const { return password_; }
  bool can_decrypt() const { return !inverse_eval_.empty(); }

  /// Throws MessageCapExceeded once the counter reaches the cap.
  std::vector<Code> encrypt(std::span<const Code> p);
  /// Reverse word with inverse generators. Throws InverseUnavailable.
  std::vector<Code> decrypt(std::span<const Code> y) const;
  /// The encryption word composed symbolically.
  PolyMap word_map() const;

 private:
  std::vector<PolyMap> generators_;
  std::vector<MapEvaluator> eval_;
  std::vector<MapEvaluator> inverse_eval_;
  std::vector<std::uint32_t> password_;
  std::uint64_t cap_;
  std::uint64_t counter_ = 0;
};

// -------------------------------------------------------- symmetric variant

struct SymmetricSetup {
  std::size_t l = 0;
  std::vector<PolyMap> alice_generators;  // second half inverts the first half when l >= 4
  std::vector<PolyMap> bob_generators;    // recovered from the masks
  std::vector<PolyMap> collisions;        // one per protocol run
  std::vector<PolyMap> masked;
};

/// l twisted runs, one masked generator per run. l must be even.
SymmetricSetup symmetric_variant_setup(const RingPtr& ring, std::size_t k, std::size_t l, SeedStream& rng,
                                       const ExponentRule& rule = {});
/// Bob's cipher over the first l/2 generators. For l >= 4 the delivered
/// inverses let him decrypt; for l = 2 decrypt throws InverseUnavailable.
SessionCipher bob_session_cipher(const SymmetricSetup& s, std::vector<std::uint32_t> password,
                                 std::uint64_t cap_constant = 1);

// -------------------------------------------------------------- transcript

struct TranscriptRecord {
  std::string party;
  std::string type;
  std::string payload;  // map text, or a comma-separated vector
  bool operator==(const TranscriptRecord&) const = default;
};

/// `TRANSCRIPT key=value ...` header, then `SEND <party> <type>` records,
/// each followed by its payload and a line `END`.
class Transcript {
 public:
  Transcript() = default;
  explicit Transcript(std::vector<std::pair<std::string, std::string>> header) : header_(std::move(header)) {}

  void send(std::string party, std::string type, const PolyMap& m);
  void send(std::string party, std::string type, std::span<const Code> v);

  const std::vector<std::pair<std::string, std::string>>& header() const { return header_; }
  std::optional<std::string> header_value(std::string_view key) const;
  const std::vector<TranscriptRecord>& records() const { return records_; }

  std::string to_text() const;
  static Transcript parse(std::string_view text);

 private:
  std::vector<std::pair<std::string, std::string>> header_;
  std::vector<TranscriptRecord> records_;
};

std::string vector_to_text(std::span<const Code> v);
std::vector<Code> vector_from_text(std::string_view s);

struct TranscriptMismatch {
  std::size_t record = 0;  // 1-based, 0 for the header
  std::string party;
  std::string type;
  std::string location;  // e.g. "x3" or "element 2"
  std::string message() const;
};

/// First difference between a replayed and a received transcript.
std::optional<TranscriptMismatch> compare_transcripts(const Transcript& expected, const Transcript& actual);

// -------------------------------------------------------------- simulation

enum class Scheme { kDH, kElGamal, kShifted, kTwisted };

std::string to_string(Scheme s);
Scheme parse_scheme(std::string_view s);

struct SimConfig {
  RingPtr ring;
  std::size_t k = 2;
  std::uint64_t seed = 1;
  ExponentRule exponents;
  std::vector<std::uint32_t> password{1, 1};
  std::uint64_t cap_constant = 1;
  std::size_t messages = 100;
};

struct SimCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SimResult {
  Transcript transcript;
  std::vector<SimCheck> checks;
  bool pass() const;
};

/// Runs both parties in-process; every transmitted artefact is logged.
SimResult simulate_protocol(Scheme scheme, const SimConfig& config);

/// Rebuilds the configuration from a transcript header.
std::pair<Scheme, SimConfig> sim_config_from_transcript(const Transcript& t);

/// Replays the transcript from its header and compares record by record.
std::optional<TranscriptMismatch> replay_and_compare(const Transcript& received);

}  // namespace dscrypt
