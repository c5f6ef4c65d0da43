#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dscrypt/polymap.hpp"

namespace dscrypt {

/// Vertex of the Double Schubert graph DS(k, K).
///
/// A point (x) and a line [y] are incident iff x_ij - y_ij = x_i y_j for all
/// i, j. The colour of a vertex is its free part.
struct SchubertVertex {
  enum Kind { kPoint, kLine };
  Kind kind = kPoint;
  std::vector<Code> free;  // k entries
  std::vector<Code> grid;  // k*k entries, row-major (i, j)

  std::size_t k() const { return free.size(); }
  bool operator==(const SchubertVertex&) const = default;
};

bool incident(const Ring& ring, const SchubertVertex& point, const SchubertVertex& line);

/// The unique vertex of the opposite type incident to v with the given colour.
SchubertVertex neighbour(const Ring& ring, const SchubertVertex& v, std::span<const Code> colour);

SchubertVertex walk_numeric(const Ring& ring, SchubertVertex start,
                            std::span<const std::vector<Code>> colours);

/// Point of DS(k, K) from a flattened vector (free part first).
SchubertVertex point_from_vector(std::span<const Code> x, std::size_t k);
std::vector<Code> vertex_to_vector(const SchubertVertex& v);

/// k polynomials in z_1..z_k.
using SymbolicColour = std::vector<Polynomial>;

SymbolicColour colour_identity(const RingPtr& ring, std::size_t k);
SymbolicColour colour_from_affine(const AffineMap& t);
PolyMap colour_as_map(const SymbolicColour& c);
/// Numeric colour g(x_1, ..., x_k).
std::vector<Code> colour_eval(const SymbolicColour& c, std::span<const Code> x);

/// Sequence of symbolic colours driving a walk on DS(k, K).
class SymbolicKey {
 public:
  SymbolicKey(RingPtr ring, std::size_t k, std::vector<SymbolicColour> colours = {});

  const RingPtr& ring() const { return ring_; }
  std::size_t k() const { return k_; }
  std::size_t length() const { return colours_.size(); }
  const std::vector<SymbolicColour>& colours() const { return colours_; }
  const SymbolicColour& operator[](std::size_t i) const { return colours_[i]; }
  const SymbolicColour& last() const { return colours_.back(); }

  /// Last colour is an invertible affine map of K^k.
  bool invertible() const;
  bool operator==(const SymbolicKey& o) const;

  /// `KEY ring=<descriptor> k=<k> len=<L>` then L blocks of k lines.
  std::string to_text() const;
  static SymbolicKey parse(std::string_view text);

 private:
  RingPtr ring_;
  std::size_t k_;
  std::vector<SymbolicColour> colours_;
};

/// Number of variables of the point space, k(k+1).
inline std::size_t schubert_dimension(std::size_t k) { return k * (k + 1); }
/// 0-based index of the grid variable z_{i,j} (1-based i, j).
inline std::size_t grid_variable(std::size_t k, std::size_t i, std::size_t j) {
  return k + (i - 1) * k + (j - 1);
}

/// Closed point-to-point map of K^{k(k+1)} defined by an even-length key.
PolyMap eta(const SymbolicKey& key);

/// (g_1, ..., g_2t, h_1(g_2t), ..., h_2s(g_2t)).
SymbolicKey key_product(const SymbolicKey& a, const SymbolicKey& b);
/// Key of the inverse map. The last colour must be affine and invertible;
/// throws NotInvertibleLastColour otherwise.
SymbolicKey key_inverse(const SymbolicKey& key);
/// Same, with a caller-certified inverse of the last colour.
SymbolicKey key_inverse(const SymbolicKey& key, const SymbolicColour& last_inverse);
/// key^e via key_product.
SymbolicKey key_power(const SymbolicKey& key, std::uint64_t e);

struct Lemma1Bound {
  int degree = 0;                       // M
  std::size_t density = 0;              // max over coordinates
  std::vector<std::size_t> per_coordinate;  // free part first, then grid
};

/// Degree and density bounds for eta(key) computed from colour degrees and
/// densities alone.
Lemma1Bound lemma1_bound(const SymbolicKey& key);

/// deg eta(key) attains the degree bound.
bool is_balanced(const SymbolicKey& key);

/// Walk on edges of DS(k, K): state (x_1..x_k, x_11..x_kk, y_1..y_k) is a
/// point together with the colour y of an incident line. `g[i]` and `h[i]`
/// colour the i-th point and line of the chain and are polynomials in the
/// 2k variables x_1..x_k, y_1..y_k. Returns the map on K^{(k+1)^2 - 1}.
PolyMap edge_walk_map(const RingPtr& ring, std::size_t k, std::span<const std::vector<Polynomial>> g,
                      std::span<const std::vector<Polynomial>> h);

}  // namespace dscrypt
