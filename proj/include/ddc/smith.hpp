#pragma once

// Smith normal form, kernels and linear solves over Z and Z/m.
//
// The public entry points take a ScalarRing (modulus 0 means Z) and
// Matrix<Int>; modular work is converted to int64 internally.

#include "ddc/error.hpp"
#include "ddc/matrix.hpp"
#include "ddc/pir.hpp"

#include <optional>
#include <vector>

namespace ddc {

/// Coefficient ring of the linear-algebra engine: Z when modulus == 0,
/// otherwise Z/modulus.
struct ScalarRing {
  std::int64_t modulus = 0;

  bool is_integer() const noexcept { return modulus == 0; }
  friend bool operator==(const ScalarRing&, const ScalarRing&) = default;

  Int reduce(const Int& v) const {
    if (modulus == 0) return v;
    Int r = v % modulus;
    if (r < 0) r += modulus;
    return r;
  }
};

template <class T>
struct SmithForm {
  Matrix<T> u;                ///< rows x rows, invertible
  Matrix<T> v;                ///< cols x cols, invertible
  std::vector<T> diagonal;    ///< length min(rows, cols), normalized chain
};

namespace detail {

template <class R>
using Val = typename R::value_type;

template <class R>
void row_combine(const R& ring, Matrix<Val<R>>& m, std::size_t a, std::size_t b,
                 const pir::Bezout<Val<R>>& z) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    auto x = m(a, j), y = m(b, j);
    m(a, j) = ring.add(ring.mul(z.s, x), ring.mul(z.t, y));
    m(b, j) = ring.add(ring.mul(z.u, x), ring.mul(z.v, y));
  }
}

template <class R>
void col_combine(const R& ring, Matrix<Val<R>>& m, std::size_t a, std::size_t b,
                 const pir::Bezout<Val<R>>& z) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto x = m(i, a), y = m(i, b);
    m(i, a) = ring.add(ring.mul(z.s, x), ring.mul(z.t, y));
    m(i, b) = ring.add(ring.mul(z.u, x), ring.mul(z.v, y));
  }
}

// row b -= q * row a
template <class R>
void row_axpy(const R& ring, Matrix<Val<R>>& m, std::size_t b, std::size_t a,
              const Val<R>& q) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!ring.is_zero(m(a, j))) m(b, j) = ring.sub(m(b, j), ring.mul(q, m(a, j)));
}

template <class R>
void col_axpy(const R& ring, Matrix<Val<R>>& m, std::size_t b, std::size_t a,
              const Val<R>& q) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!ring.is_zero(m(i, a))) m(i, b) = ring.sub(m(i, b), ring.mul(q, m(i, a)));
}

template <class R>
SmithForm<Val<R>> smith(const R& ring, Matrix<Val<R>> m, bool want_transforms) {
  using T = Val<R>;
  const std::size_t rows = m.rows(), cols = m.cols();
  SmithForm<T> out;
  if (want_transforms) {
    out.u = Matrix<T>::identity(rows);
    out.v = Matrix<T>::identity(cols);
  }
  const std::size_t n = std::min(rows, cols);
  out.diagonal.assign(n, ring.zero());

  for (std::size_t t = 0; t < n; ++t) {
    // pivot search: smallest size in the trailing block
    bool found = false;
    std::size_t pi = t, pj = t;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        if (ring.is_zero(m(i, j))) continue;
        if (!found || ring.better_pivot(m(i, j), m(pi, pj))) {
          pi = i;
          pj = j;
          found = true;
        }
      }
    if (!found) break;
    m.swap_rows(t, pi);
    m.swap_cols(t, pj);
    if (want_transforms) {
      out.u.swap_rows(t, pi);
      out.v.swap_cols(t, pj);
    }

    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (ring.is_zero(m(i, t))) continue;
        if (ring.divides(m(t, t), m(i, t))) {
          T q = ring.exact_div(m(i, t), m(t, t));
          row_axpy(ring, m, i, t, q);
          if (want_transforms) row_axpy(ring, out.u, i, t, q);
        } else {
          auto z = ring.gcdext(m(t, t), m(i, t));
          row_combine(ring, m, t, i, z);
          if (want_transforms) row_combine(ring, out.u, t, i, z);
          dirty = true;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (ring.is_zero(m(t, j))) continue;
        if (ring.divides(m(t, t), m(t, j))) {
          T q = ring.exact_div(m(t, j), m(t, t));
          col_axpy(ring, m, j, t, q);
          if (want_transforms) col_axpy(ring, out.v, j, t, q);
        } else {
          auto z = ring.gcdext(m(t, t), m(t, j));
          col_combine(ring, m, t, j, z);
          if (want_transforms) col_combine(ring, out.v, t, j, z);
          dirty = true;
        }
      }
      if (dirty) continue;
      // column t may have been refilled by column operations
      bool col_clear = true;
      for (std::size_t i = t + 1; i < rows; ++i)
        if (!ring.is_zero(m(i, t))) col_clear = false;
      if (!col_clear) continue;
      // divisibility of the trailing block
      std::optional<std::size_t> bad_row;
      for (std::size_t i = t + 1; i < rows && !bad_row; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!ring.divides(m(t, t), m(i, j))) {
            bad_row = i;
            break;
          }
      if (!bad_row) break;
      // row t += row bad
      T minus_one = ring.neg(ring.one());
      row_axpy(ring, m, t, *bad_row, minus_one);
      if (want_transforms) row_axpy(ring, out.u, t, *bad_row, minus_one);
    }

    auto [canon, unit] = ring.normalize(m(t, t));
    if (unit != ring.one()) {
      for (std::size_t j = 0; j < cols; ++j) m(t, j) = ring.mul(unit, m(t, j));
      if (want_transforms)
        for (std::size_t j = 0; j < rows; ++j)
          out.u(t, j) = ring.mul(unit, out.u(t, j));
    }
    out.diagonal[t] = canon;
  }
  return out;
}

template <class R>
Matrix<Val<R>> multiply(const R& ring, const Matrix<Val<R>>& a,
                        const Matrix<Val<R>>& b) {
  Matrix<Val<R>> out(a.rows(), b.cols(), ring.zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto& x = a(i, k);
      if (ring.is_zero(x)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!ring.is_zero(b(k, j)))
          out(i, j) = ring.add(out(i, j), ring.mul(x, b(k, j)));
    }
  return out;
}

// Generators of the annihilator of a diagonal entry: Z: 0 -> 1, d -> none;
// Z/m: m / gcd(d, m).
inline std::optional<Int> annihilator(const pir::IntegerRing&, const Int& d) {
  if (d.is_zero()) return Int(1);
  return std::nullopt;
}
inline std::optional<std::int64_t> annihilator(const pir::ModRing& ring,
                                               std::int64_t d) {
  std::int64_t g = ring.ideal(d);
  if (g == 1) return std::nullopt;
  return ring.m / g;
}

template <class R>
Matrix<Val<R>> kernel(const R& ring, const Matrix<Val<R>>& m) {
  using T = Val<R>;
  const std::size_t cols = m.cols();
  if (cols == 0) return Matrix<T>(0, 0);
  if (m.rows() == 0) {
    Matrix<T> id(cols, cols, ring.zero());
    for (std::size_t i = 0; i < cols; ++i) id(i, i) = ring.one();
    return id;
  }
  auto s = smith(ring, m, true);
  std::vector<std::vector<T>> gens;
  for (std::size_t j = 0; j < cols; ++j) {
    std::optional<T> scale;
    if (j < s.diagonal.size()) {
      scale = annihilator(ring, s.diagonal[j]);
    } else {
      scale = ring.one();
    }
    if (!scale) continue;
    std::vector<T> g(cols, ring.zero());
    bool nonzero = false;
    for (std::size_t i = 0; i < cols; ++i) {
      g[i] = ring.mul(*scale, s.v(i, j));
      if (!ring.is_zero(g[i])) nonzero = true;
    }
    if (nonzero) gens.push_back(std::move(g));
  }
  return Matrix<T>::from_columns(cols, gens);
}

// Solve m * x = b for each column of b; nullopt if any column is unsolvable.
template <class R>
std::optional<Matrix<Val<R>>> solve(const R& ring, const Matrix<Val<R>>& m,
                                    const Matrix<Val<R>>& b) {
  using T = Val<R>;
  const std::size_t rows = m.rows(), cols = m.cols();
  Matrix<T> x(cols, b.cols(), ring.zero());
  if (b.cols() == 0) return x;
  if (cols == 0 || rows == 0) {
    for (auto& v : b.data())
      if (!ring.is_zero(v)) return std::nullopt;
    return x;
  }
  auto s = smith(ring, m, true);
  Matrix<T> ub = multiply(ring, s.u, b);
  Matrix<T> y(cols, b.cols(), ring.zero());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < rows; ++i) {
      const T& rhs = ub(i, c);
      if (i < s.diagonal.size()) {
        if (!ring.divides(s.diagonal[i], rhs)) return std::nullopt;
        y(i, c) = ring.exact_div(rhs, s.diagonal[i]);
      } else if (!ring.is_zero(rhs)) {
        return std::nullopt;
      }
    }
  }
  return multiply(ring, s.v, y);
}

inline Matrix<std::int64_t> to_mod(const pir::ModRing& ring, const Matrix<Int>& m) {
  Matrix<std::int64_t> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Int r = m(i, j) % ring.m;
      if (r < 0) r += ring.m;
      out(i, j) = static_cast<std::int64_t>(r);
    }
  return out;
}

inline Matrix<Int> from_mod(const Matrix<std::int64_t>& m) {
  Matrix<Int> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace detail

/// Smith normal form U * M * V = D over the given scalar ring. Diagonal
/// entries form a divisibility chain; over Z/m they are divisors of m (0
/// standing for m itself).
inline SmithForm<Int> snf(const ScalarRing& ring, const Matrix<Int>& m,
                          bool want_transforms = true) {
  if (ring.is_integer()) return detail::smith(pir::IntegerRing{}, m, want_transforms);
  pir::ModRing mod{ring.modulus};
  auto s = detail::smith(mod, detail::to_mod(mod, m), want_transforms);
  SmithForm<Int> out;
  if (want_transforms) {
    out.u = detail::from_mod(s.u);
    out.v = detail::from_mod(s.v);
  }
  for (auto d : s.diagonal) out.diagonal.emplace_back(d);
  return out;
}

/// Column generators of {x : M x = 0}.
inline Matrix<Int> kernel(const ScalarRing& ring, const Matrix<Int>& m) {
  if (ring.is_integer()) return detail::kernel(pir::IntegerRing{}, m);
  pir::ModRing mod{ring.modulus};
  return detail::from_mod(detail::kernel(mod, detail::to_mod(mod, m)));
}

inline std::optional<Matrix<Int>> solve(const ScalarRing& ring, const Matrix<Int>& m,
                                        const Matrix<Int>& b) {
  if (ring.is_integer()) return detail::solve(pir::IntegerRing{}, m, b);
  pir::ModRing mod{ring.modulus};
  auto x = detail::solve(mod, detail::to_mod(mod, m), detail::to_mod(mod, b));
  if (!x) return std::nullopt;
  return detail::from_mod(*x);
}

inline Matrix<Int> multiply(const ScalarRing& ring, const Matrix<Int>& a,
                            const Matrix<Int>& b) {
  if (ring.is_integer()) return detail::multiply(pir::IntegerRing{}, a, b);
  pir::ModRing mod{ring.modulus};
  return detail::from_mod(
      detail::multiply(mod, detail::to_mod(mod, a), detail::to_mod(mod, b)));
}

inline Matrix<Int> reduce(const ScalarRing& ring, Matrix<Int> m) {
  if (ring.is_integer()) return m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = ring.reduce(m(i, j));
  return m;
}

inline bool is_zero_matrix(const ScalarRing& ring, const Matrix<Int>& m) {
  for (const auto& v : m.data())
    if (!ring.reduce(v).is_zero()) return false;
  return true;
}

}  // namespace ddc
