#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dscrypt/ring.hpp"

namespace dscrypt {

/// Dense square matrix over a ring, row-major.
class Matrix {
 public:
  Matrix(RingPtr ring, std::size_t n);
  static Matrix identity(RingPtr ring, std::size_t n);

  const RingPtr& ring() const { return ring_; }
  std::size_t size() const { return n_; }
  Code& at(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  Code at(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }
  std::span<const Code> data() const { return data_; }

  Matrix operator*(const Matrix& o) const;
  std::vector<Code> apply(std::span<const Code> v) const;
  Matrix pow(std::uint64_t e) const;
  bool operator==(const Matrix& o) const;
  bool is_identity() const;

  /// Works over fields and Z_m (unimodular row operations for Z_m).
  Code determinant() const;
  /// Two-sided inverse, or nullopt when the determinant is not a unit.
  std::optional<Matrix> inverse() const;

 private:
  RingPtr ring_;
  std::size_t n_;
  std::vector<Code> data_;
};

/// Multiplicative order by repeated multiplication; nullopt past `limit`.
std::optional<std::uint64_t> matrix_order_bruteforce(const Matrix& m, std::uint64_t limit);

}  // namespace dscrypt
