#pragma once

// Coefficient rings for the exact linear-algebra engine. Both are principal
// ideal rings, which is all Smith normal form needs.

#include "ddc/matrix.hpp"

#include <cstdint>
#include <numeric>
#include <tuple>

namespace ddc::pir {

/// Bezout data: [s t; u v] is unimodular and sends (a, b) to (g, 0).
template <class T>
struct Bezout {
  T g, s, t, u, v;
};

struct IntegerRing {
  using value_type = Int;

  Int zero() const { return 0; }
  Int one() const { return 1; }
  Int reduce(const Int& a) const { return a; }
  Int add(const Int& a, const Int& b) const { return a + b; }
  Int sub(const Int& a, const Int& b) const { return a - b; }
  Int mul(const Int& a, const Int& b) const { return a * b; }
  Int neg(const Int& a) const { return -a; }
  bool is_zero(const Int& a) const { return a.is_zero(); }
  bool is_unit(const Int& a) const { return a == 1 || a == -1; }

  bool divides(const Int& a, const Int& b) const {
    if (a.is_zero()) return b.is_zero();
    return (b % a).is_zero();
  }
  Int exact_div(const Int& b, const Int& a) const {
    if (a.is_zero()) return 0;
    return b / a;
  }

  Bezout<Int> gcdext(const Int& a, const Int& b) const {
    if (b.is_zero()) {
      return {a, 1, 0, 0, 1};
    }
    Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (!r.is_zero()) {
      Int q = old_r / r;
      Int tmp = old_r - q * r;
      old_r = r;
      r = tmp;
      tmp = old_s - q * s;
      old_s = s;
      s = tmp;
      tmp = old_t - q * t;
      old_t = t;
      t = tmp;
    }
    // old_s * a + old_t * b = old_r, and (s, t) is the cofactor pair with
    // s * a + t * b = 0, up to sign chosen to make the determinant 1.
    Int g = old_r;
    Int u = -b / g, v = a / g;
    return {g, old_s, old_t, u, v};
  }

  /// Returns the canonical associate (|a|) and the unit that maps a to it.
  std::pair<Int, Int> normalize(const Int& a) const {
    if (a < 0) return {-a, Int(-1)};
    return {a, Int(1)};
  }

  /// True if a is a strictly better pivot than b (smaller nonzero size).
  bool better_pivot(const Int& a, const Int& b) const { return abs(a) < abs(b); }
};

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  return std::gcd(a, b);
}

/// Extended gcd over the integers for int64 operands.
inline std::tuple<std::int64_t, std::int64_t, std::int64_t> egcd64(
    std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

/// Z/m with canonical residues 0 <= r < m. Requires m < 2^31 so that
/// products fit in int64.
struct ModRing {
  using value_type = std::int64_t;
  std::int64_t m;

  std::int64_t zero() const { return 0; }
  std::int64_t one() const { return m == 1 ? 0 : 1; }
  std::int64_t reduce(std::int64_t a) const {
    a %= m;
    return a < 0 ? a + m : a;
  }
  std::int64_t add(std::int64_t a, std::int64_t b) const {
    std::int64_t r = a + b;
    return r >= m ? r - m : r;
  }
  std::int64_t sub(std::int64_t a, std::int64_t b) const {
    std::int64_t r = a - b;
    return r < 0 ? r + m : r;
  }
  std::int64_t mul(std::int64_t a, std::int64_t b) const { return (a * b) % m; }
  std::int64_t neg(std::int64_t a) const { return a == 0 ? 0 : m - a; }
  bool is_zero(std::int64_t a) const { return a == 0; }

  /// gcd(a, m), with the convention gcd(0, m) = m.
  std::int64_t ideal(std::int64_t a) const { return gcd64(a, m); }
  bool is_unit(std::int64_t a) const { return ideal(a) == 1; }

  bool divides(std::int64_t a, std::int64_t b) const { return b % ideal(a) == 0; }

  std::int64_t inverse(std::int64_t a) const {
    auto [g, s, t] = egcd64(reduce(a), m);
    (void)t;
    assert(g == 1);
    return reduce(s);
  }

  /// Some q with a * q = b; requires divides(a, b).
  std::int64_t exact_div(std::int64_t b, std::int64_t a) const {
    std::int64_t g = ideal(a);
    if (b == 0) return 0;
    std::int64_t mp = m / g;
    if (mp == 1) return 0;
    ModRing sub{mp};
    std::int64_t ap = sub.reduce(a / g), bp = sub.reduce(b / g);
    return reduce(sub.mul(bp, sub.inverse(ap)));
  }

  Bezout<std::int64_t> gcdext(std::int64_t a, std::int64_t b) const {
    if (a == 0 && b == 0) return {0, 1, 0, 0, 1};
    auto [g, s, t] = egcd64(a, b);
    return {reduce(g), reduce(s), reduce(t), reduce(-(b / g)), reduce(a / g)};
  }

  /// A unit w with w * a = gcd(a, m); returns (gcd(a, m) mod m, w).
  std::pair<std::int64_t, std::int64_t> normalize(std::int64_t a) const {
    std::int64_t g = ideal(a);
    if (g == m) return {0, 1};
    std::int64_t mp = m / g;
    ModRing sub{mp};
    std::int64_t w = mp == 1 ? 1 : sub.inverse(sub.reduce(a / g));
    // lift w to a unit modulo m
    while (gcd64(w, m) != 1) w += mp;
    return {reduce(g), reduce(w)};
  }

  bool better_pivot(std::int64_t a, std::int64_t b) const {
    return ideal(a) < ideal(b);
  }
};

}  // namespace ddc::pir
