#include "dscrypt/matrix.hpp"

#include <utility>

#include "dscrypt/errors.hpp"
#include "dscrypt/numtheory.hpp"

namespace dscrypt {

Matrix::Matrix(RingPtr ring, std::size_t n) : ring_(std::move(ring)), n_(n), data_(n * n, 0) {}

Matrix Matrix::identity(RingPtr ring, std::size_t n) {
  Matrix m(std::move(ring), n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = m.ring_->one();
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  require_same_ring(ring_, o.ring_);
  if (n_ != o.n_) throw ShapeMismatch("matrix sizes differ");
  Matrix out(ring_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t l = 0; l < n_; ++l) {
      const Code a = at(i, l);
      if (!a) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        out.at(i, j) = ring_->add(out.at(i, j), ring_->mul(a, o.at(l, j)));
      }
    }
  }
  return out;
}

std::vector<Code> Matrix::apply(std::span<const Code> v) const {
  if (v.size() != n_) throw ShapeMismatch("vector length does not match matrix");
  std::vector<Code> out(n_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    Code acc = 0;
    for (std::size_t j = 0; j < n_; ++j) acc = ring_->add(acc, ring_->mul(at(i, j), v[j]));
    out[i] = acc;
  }
  return out;
}

Matrix Matrix::pow(std::uint64_t e) const {
  Matrix result = identity(ring_, n_);
  Matrix base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

bool Matrix::operator==(const Matrix& o) const {
  return same_ring(ring_, o.ring_) && n_ == o.n_ && data_ == o.data_;
}

bool Matrix::is_identity() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (at(i, j) != (i == j ? ring_->one() : 0)) return false;
    }
  }
  return true;
}

namespace {

// Row-reduces `work` to upper triangular form, mirroring every row operation
// on `aug` when given. Only determinant-preserving operations are used (row
// additions and unimodular 2x2 mixes), except for the recorded swaps.
// Returns the determinant.
Code triangularize(Matrix& work, Matrix* aug) {
  const RingPtr& R = work.ring();
  const std::size_t n = work.size();
  Code det = R->one();
  auto mix_rows = [&](Matrix& m, std::size_t r1, std::size_t r2, Code a11, Code a12, Code a21, Code a22) {
    for (std::size_t c = 0; c < n; ++c) {
      const Code x = m.at(r1, c), y = m.at(r2, c);
      m.at(r1, c) = R->add(R->mul(a11, x), R->mul(a12, y));
      m.at(r2, c) = R->add(R->mul(a21, x), R->mul(a22, y));
    }
  };
  for (std::size_t col = 0; col < n; ++col) {
    if (R->is_field()) {
      std::size_t piv = col;
      while (piv < n && work.at(piv, col) == 0) ++piv;
      if (piv == n) return 0;
      if (piv != col) {
        // swap via (r1, r2) -> (r2, -r1) keeps the determinant
        const Code neg1 = R->neg(R->one());
        mix_rows(work, col, piv, 0, R->one(), neg1, 0);
        if (aug) mix_rows(*aug, col, piv, 0, R->one(), neg1, 0);
      }
      const Code inv = R->inv(work.at(col, col));
      for (std::size_t r = col + 1; r < n; ++r) {
        const Code f = R->mul(work.at(r, col), inv);
        if (!f) continue;
        const Code nf = R->neg(f);
        mix_rows(work, col, r, R->one(), 0, nf, R->one());
        if (aug) mix_rows(*aug, col, r, R->one(), 0, nf, R->one());
      }
    } else {
      const std::uint64_t m = R->size();
      for (std::size_t r = col + 1; r < n; ++r) {
        const Code b = work.at(r, col);
        if (!b) continue;
        const Code a = work.at(col, col);
        const auto bz = nt::ext_gcd(a, b);
        auto red = [m](__int128 v) {
          v %= static_cast<__int128>(m);
          if (v < 0) v += m;
          return static_cast<Code>(v);
        };
        const Code s = red(bz.s), t = red(bz.t);
        const Code u = R->neg(red(b / bz.g)), v = red(a / bz.g);
        mix_rows(work, col, r, s, t, u, v);
        if (aug) mix_rows(*aug, col, r, s, t, u, v);
      }
    }
    det = R->mul(det, work.at(col, col));
  }
  return det;
}

}  // namespace

Code Matrix::determinant() const {
  Matrix work = *this;
  return triangularize(work, nullptr);
}

std::optional<Matrix> Matrix::inverse() const {
  Matrix work = *this;
  Matrix aug = identity(ring_, n_);
  const Code det = triangularize(work, &aug);
  if (!ring_->is_unit(det)) return std::nullopt;
  // back substitution on the unit diagonal
  for (std::size_t col = n_; col-- > 0;) {
    const Code inv = ring_->inv(work.at(col, col));
    for (std::size_t c = 0; c < n_; ++c) {
      work.at(col, c) = ring_->mul(work.at(col, c), inv);
      aug.at(col, c) = ring_->mul(aug.at(col, c), inv);
    }
    for (std::size_t r = 0; r < col; ++r) {
      const Code f = work.at(r, col);
      if (!f) continue;
      for (std::size_t c = 0; c < n_; ++c) {
        work.at(r, c) = ring_->sub(work.at(r, c), ring_->mul(f, work.at(col, c)));
        aug.at(r, c) = ring_->sub(aug.at(r, c), ring_->mul(f, aug.at(col, c)));
      }
    }
  }
  return aug;
}

std::optional<std::uint64_t> matrix_order_bruteforce(const Matrix& m, std::uint64_t limit) {
  Matrix p = m;
  for (std::uint64_t j = 1; j <= limit; ++j) {
    if (p.is_identity()) return j;
    p = p * m;
  }
  return std::nullopt;
}

}  // namespace dscrypt
