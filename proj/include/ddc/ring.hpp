#pragma once

// The supported commutative base rings, their elements, and matrices over
// them. Every ring is realized on top of the scalar engine: Z and Z/m
// directly, F_p[x]/(x^n) through its regular representation over F_p.

#include "ddc/error.hpp"
#include "ddc/matrix.hpp"
#include "ddc/smith.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ddc {

enum class RingKind { integers, mod_integers, prime_field, truncated_poly };

inline bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

struct RingSpec {
  RingKind kind = RingKind::integers;
  std::int64_t modulus = 0;  ///< m for mod-integers, p for prime-field / truncated-poly
  int degree = 1;            ///< n for truncated-poly F_p[x]/(x^n)

  static RingSpec integers() { return {RingKind::integers, 0, 1}; }
  static RingSpec mod_integers(std::int64_t m) {
    RingSpec r{RingKind::mod_integers, m, 1};
    r.validate();
    return r;
  }
  static RingSpec prime_field(std::int64_t p) {
    RingSpec r{RingKind::prime_field, p, 1};
    r.validate();
    return r;
  }
  static RingSpec truncated_poly(std::int64_t p, int n) {
    RingSpec r{RingKind::truncated_poly, p, n};
    r.validate();
    return r;
  }

  void validate() const {
    switch (kind) {
      case RingKind::integers: return;
      case RingKind::mod_integers:
        if (modulus < 2 || modulus > (std::int64_t(1) << 31))
          fail(ErrorCode::bad_ring, "modulus must satisfy 2 <= m < 2^31");
        return;
      case RingKind::prime_field:
        if (!is_prime(modulus) || modulus > (std::int64_t(1) << 31))
          fail(ErrorCode::bad_ring, "prime-field needs a prime p < 2^31");
        return;
      case RingKind::truncated_poly:
        if (!is_prime(modulus) || modulus > (std::int64_t(1) << 31))
          fail(ErrorCode::bad_ring, "truncated-poly needs a prime p < 2^31");
        if (degree < 1) fail(ErrorCode::bad_ring, "truncated-poly needs n >= 1");
        return;
    }
  }

  /// Number of scalar coordinates per ring element.
  std::size_t width() const noexcept {
    return kind == RingKind::truncated_poly ? static_cast<std::size_t>(degree) : 1;
  }
  ScalarRing scalars() const noexcept {
    return ScalarRing{kind == RingKind::integers ? 0 : modulus};
  }
  bool is_finite() const noexcept { return kind != RingKind::integers; }

  /// Every Z/m and F_p[x]/(x^n) is quasi-Frobenius, hence self-injective.
  bool is_self_injective() const noexcept { return is_finite(); }

  Int cardinality() const {
    if (!is_finite()) return 0;
    Int c = 1;
    for (std::size_t i = 0; i < width(); ++i) c *= modulus;
    return c;
  }

  std::string name() const {
    switch (kind) {
      case RingKind::integers: return "Z";
      case RingKind::mod_integers: return "Z/" + std::to_string(modulus);
      case RingKind::prime_field: return "F_" + std::to_string(modulus);
      case RingKind::truncated_poly:
        return "F_" + std::to_string(modulus) + "[x]/(x^" + std::to_string(degree) + ")";
    }
    return "?";
  }

  friend bool operator==(const RingSpec&, const RingSpec&) = default;
};

/// Canonical element: one coefficient for Z, Z/m, F_p; n coefficients
/// (constant term first) for F_p[x]/(x^n).
struct RingElem {
  std::vector<Int> coeffs;
  friend bool operator==(const RingElem&, const RingElem&) = default;
};

namespace ring {

inline RingElem zero(const RingSpec& r) { return {std::vector<Int>(r.width(), 0)}; }
inline RingElem from_int(const RingSpec& r, const Int& v) {
  RingElem e = zero(r);
  e.coeffs[0] = r.scalars().reduce(v);
  return e;
}
inline RingElem one(const RingSpec& r) { return from_int(r, 1); }
/// The class of x in F_p[x]/(x^n).
inline RingElem x(const RingSpec& r) {
  RingElem e = zero(r);
  if (r.degree > 1) e.coeffs[1] = 1;
  return e;
}

inline bool is_zero(const RingElem& a) {
  for (const auto& c : a.coeffs)
    if (!c.is_zero()) return false;
  return true;
}

inline bool is_canonical(const RingSpec& r, const RingElem& a) {
  if (a.coeffs.size() != r.width()) return false;
  if (r.kind == RingKind::integers) return true;
  for (const auto& c : a.coeffs)
    if (c < 0 || c >= r.modulus) return false;
  return true;
}

inline RingElem add(const RingSpec& r, const RingElem& a, const RingElem& b) {
  RingElem out = a;
  auto s = r.scalars();
  for (std::size_t i = 0; i < out.coeffs.size(); ++i)
    out.coeffs[i] = s.reduce(out.coeffs[i] + b.coeffs[i]);
  return out;
}
inline RingElem neg(const RingSpec& r, const RingElem& a) {
  RingElem out = a;
  auto s = r.scalars();
  for (auto& c : out.coeffs) c = s.reduce(-c);
  return out;
}
inline RingElem sub(const RingSpec& r, const RingElem& a, const RingElem& b) {
  return add(r, a, neg(r, b));
}
inline RingElem mul(const RingSpec& r, const RingElem& a, const RingElem& b) {
  const std::size_t n = r.width();
  RingElem out = zero(r);
  for (std::size_t i = 0; i < n; ++i) {
    if (a.coeffs[i].is_zero()) continue;
    for (std::size_t j = 0; i + j < n; ++j)
      out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  }
  auto s = r.scalars();
  for (auto& c : out.coeffs) c = s.reduce(c);
  return out;
}
inline RingElem pow(const RingSpec& r, const RingElem& a, unsigned e) {
  RingElem out = one(r), base = a;
  while (e) {
    if (e & 1u) out = mul(r, out, base);
    base = mul(r, base, base);
    e >>= 1u;
  }
  return out;
}
inline RingElem scale(const RingSpec& r, const RingElem& a, int sign) {
  return sign >= 0 ? a : neg(r, a);
}

inline std::string to_string(const RingSpec& r, const RingElem& a) {
  if (r.kind != RingKind::truncated_poly) return a.coeffs[0].str();
  std::string s;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i].is_zero()) continue;
    if (!s.empty()) s += "+";
    if (i == 0 || a.coeffs[i] != 1) s += a.coeffs[i].str();
    if (i >= 1) s += "x";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

/// Smallest k >= 1 with a^k = 0, or 0 if a is not nilpotent (searching up
/// to `limit`).
inline unsigned nilpotency_index(const RingSpec& r, const RingElem& a,
                                 unsigned limit = 64) {
  RingElem p = a;
  for (unsigned k = 1; k <= limit; ++k) {
    if (is_zero(p)) return k;
    p = mul(r, p, a);
  }
  return 0;
}

}  // namespace ring

/// Matrix over a RingSpec, row-major, each entry stored as `width`
/// consecutive scalar coefficients.
class RMatrix {
 public:
  RMatrix() = default;
  RMatrix(std::size_t rows, std::size_t cols, std::size_t width)
      : rows_(rows), cols_(cols), width_(width), data_(rows * cols * width, 0) {}
  RMatrix(const RingSpec& r, std::size_t rows, std::size_t cols)
      : RMatrix(rows, cols, r.width()) {}

  static RMatrix identity(const RingSpec& r, std::size_t n) {
    RMatrix m(r, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, ring::one(r));
    return m;
  }
  /// Row-major integer entries, reduced into canonical form (constant
  /// term for truncated-poly).
  static RMatrix from_ints(const RingSpec& r, std::size_t rows, std::size_t cols,
                           const std::vector<long>& v) {
    if (v.size() != rows * cols) fail(ErrorCode::malformed_input, "entry count mismatch");
    RMatrix m(r, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m.set(i, j, ring::from_int(r, v[i * cols + j]));
    return m;
  }
  static RMatrix scalar(const RingSpec& r, std::size_t n, const RingElem& a) {
    RMatrix m(r, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, a);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t width() const noexcept { return width_; }

  RingElem at(std::size_t i, std::size_t j) const {
    RingElem e;
    auto base = data_.begin() + static_cast<std::ptrdiff_t>((i * cols_ + j) * width_);
    e.coeffs.assign(base, base + static_cast<std::ptrdiff_t>(width_));
    return e;
  }
  void set(std::size_t i, std::size_t j, const RingElem& e) {
    std::copy(e.coeffs.begin(), e.coeffs.end(),
              data_.begin() + static_cast<std::ptrdiff_t>((i * cols_ + j) * width_));
  }
  const Int& coeff(std::size_t i, std::size_t j, std::size_t t) const {
    return data_[(i * cols_ + j) * width_ + t];
  }
  Int& coeff(std::size_t i, std::size_t j, std::size_t t) {
    return data_[(i * cols_ + j) * width_ + t];
  }
  bool entry_is_zero(std::size_t i, std::size_t j) const {
    for (std::size_t t = 0; t < width_; ++t)
      if (!coeff(i, j, t).is_zero()) return false;
    return true;
  }
  bool is_zero() const {
    for (const auto& c : data_)
      if (!c.is_zero()) return false;
    return true;
  }

  friend bool operator==(const RMatrix&, const RMatrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0, width_ = 1;
  std::vector<Int> data_;
};

namespace rmat {

inline void check_canonical(const RingSpec& r, const RMatrix& m) {
  if (m.width() != r.width())
    fail(ErrorCode::malformed_input, "matrix width does not match ring");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!ring::is_canonical(r, m.at(i, j)))
        fail(ErrorCode::malformed_input, "entry not in canonical form");
}

inline RMatrix multiply(const RingSpec& r, const RMatrix& a, const RMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::malformed_input, "shape mismatch in product");
  RMatrix out(r, a.rows(), b.cols());
  const std::size_t w = r.width();
  auto s = r.scalars();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a.entry_is_zero(i, k)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (b.entry_is_zero(k, j)) continue;
        for (std::size_t p = 0; p < w; ++p) {
          const Int& x = a.coeff(i, k, p);
          if (x.is_zero()) continue;
          for (std::size_t q = 0; p + q < w; ++q)
            out.coeff(i, j, p + q) += x * b.coeff(k, j, q);
        }
      }
    }
  if (!s.is_integer())
    for (std::size_t i = 0; i < out.rows(); ++i)
      for (std::size_t j = 0; j < out.cols(); ++j)
        for (std::size_t p = 0; p < w; ++p) out.coeff(i, j, p) = s.reduce(out.coeff(i, j, p));
  return out;
}

inline RMatrix add(const RingSpec& r, const RMatrix& a, const RMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCode::malformed_input, "shape mismatch in sum");
  RMatrix out = a;
  auto s = r.scalars();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < r.width(); ++p)
        out.coeff(i, j, p) = s.reduce(a.coeff(i, j, p) + b.coeff(i, j, p));
  return out;
}

inline RMatrix scale(const RingSpec& r, const RMatrix& a, const RingElem& c) {
  RMatrix out(r, a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a.entry_is_zero(i, j)) out.set(i, j, ring::mul(r, c, a.at(i, j)));
  return out;
}

inline RMatrix negate(const RingSpec& r, const RMatrix& a) {
  return scale(r, a, ring::neg(r, ring::one(r)));
}

/// Kronecker product: entry ((i1, i2), (j1, j2)) = a(i1, j1) * b(i2, j2).
inline RMatrix kron(const RingSpec& r, const RMatrix& a, const RMatrix& b) {
  RMatrix out(r, a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
    for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
      if (a.entry_is_zero(i1, j1)) continue;
      RingElem x = a.at(i1, j1);
      for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
        for (std::size_t j2 = 0; j2 < b.cols(); ++j2) {
          if (b.entry_is_zero(i2, j2)) continue;
          out.set(i1 * b.rows() + i2, j1 * b.cols() + j2, ring::mul(r, x, b.at(i2, j2)));
        }
    }
  return out;
}

/// Copies `src` into `dst` with its top-left corner at (row, col).
inline void place(RMatrix& dst, const RMatrix& src, std::size_t row, std::size_t col) {
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j)
      for (std::size_t p = 0; p < src.width(); ++p)
        dst.coeff(row + i, col + j, p) = src.coeff(i, j, p);
}

inline RMatrix block(const RMatrix& src, std::size_t row, std::size_t col,
                     std::size_t rows, std::size_t cols) {
  RMatrix out(rows, cols, src.width());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t p = 0; p < src.width(); ++p)
        out.coeff(i, j, p) = src.coeff(row + i, col + j, p);
  return out;
}

inline RMatrix transpose(const RMatrix& a) {
  RMatrix out(a.cols(), a.rows(), a.width());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < a.width(); ++p) out.coeff(j, i, p) = a.coeff(i, j, p);
  return out;
}

}  // namespace rmat

/// Regular-representation expansion of a ring matrix into a scalar matrix:
/// identity for Z, lifts for Z/m (the engine works modulo m), F_p matrix for
/// F_p, and for F_p[x]/(x^n) each entry becomes its n x n multiplication
/// matrix on the basis 1, x, ..., x^{n-1}.
inline Matrix<Int> scalar_expand(const RingSpec& r, const RMatrix& m) {
  rmat::check_canonical(r, m);
  const std::size_t w = r.width();
  Matrix<Int> out(m.rows() * w, m.cols() * w);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (std::size_t k = 0; k < w; ++k) {
        const Int& c = m.coeff(i, j, k);
        if (c.is_zero()) continue;
        for (std::size_t col = 0; col + k < w; ++col) out(i * w + col + k, j * w + col) = c;
      }
  return out;
}

/// Scalar column vector (length n * width) back to ring coordinates.
inline std::vector<RingElem> to_ring_vector(const RingSpec& r, const std::vector<Int>& v) {
  const std::size_t w = r.width();
  std::vector<RingElem> out(v.size() / w);
  auto s = r.scalars();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].coeffs.resize(w);
    for (std::size_t t = 0; t < w; ++t) out[i].coeffs[t] = s.reduce(v[i * w + t]);
  }
  return out;
}

inline std::vector<Int> to_scalar_vector(const RingSpec& r, const std::vector<RingElem>& v) {
  std::vector<Int> out;
  out.reserve(v.size() * r.width());
  for (const auto& e : v)
    for (const auto& c : e.coeffs) out.push_back(c);
  return out;
}

/// Column vector as an n x 1 ring matrix.
inline RMatrix column_matrix(const RingSpec& r, const std::vector<RingElem>& v) {
  RMatrix m(r, v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m.set(i, 0, v[i]);
  return m;
}

/// Scalar action of multiplication by a ring element on a free module of
/// the given rank (scalar coordinates).
inline Matrix<Int> multiplication_operator(const RingSpec& r, const RingElem& a,
                                           std::size_t rank) {
  return scalar_expand(r, RMatrix::scalar(r, rank, a));
}

}  // namespace ddc
