#pragma once

// Bounded complexes of finitely generated free modules, cohomological
// grading. Sign conventions:
//   shift:  X[s]^k = X^{k+s}, d = (-1)^s d_X
//   cone:   cone(f)^k = Y^k + X^{k+1}, d = [[d_Y, f], [0, -d_X]]
//   tensor: d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy
//   hom:    d(f) = d_Y f - (-1)^|f| f d_X
// Tensor basis in degree k: X-degree ascending, then X basis (major), then
// Y basis (minor). Hom basis in degree i: source degree ascending, then the
// matrix of X^k -> Y^{k+i} flattened column-major (index a * rank_Y + b for
// the coefficient of y_b in f(x_a)).

#include "ddc/error.hpp"
#include "ddc/module.hpp"
#include "ddc/ring.hpp"

#include <map>
#include <optional>
#include <vector>

namespace ddc {

class FreeComplex {
 public:
  FreeComplex() = default;

  /// Validates shapes and d^2 = 0. Zero-rank entries are dropped.
  FreeComplex(RingSpec ring, std::map<int, std::size_t> ranks, std::map<int, RMatrix> diffs,
              bool check = true)
      : ring_(ring) {
    for (auto [k, r] : ranks)
      if (r > 0) ranks_[k] = r;
    for (auto& [k, d] : diffs) {
      if (d.rows() != rank(k + 1) || d.cols() != rank(k))
        fail(ErrorCode::malformed_input,
             "differential d^" + std::to_string(k) + " has the wrong shape");
      if (d.rows() == 0 || d.cols() == 0) continue;
      if (check) rmat::check_canonical(ring_, d);
      if (!d.is_zero()) diffs_[k] = std::move(d);
    }
    if (check) verify();
  }

  /// A single free module of the given rank in degree `deg`.
  static FreeComplex concentrated(const RingSpec& r, std::size_t rank, int deg = 0) {
    return FreeComplex(r, {{deg, rank}}, {});
  }

  const RingSpec& ring() const noexcept { return ring_; }
  std::size_t rank(int k) const {
    auto it = ranks_.find(k);
    return it == ranks_.end() ? 0 : it->second;
  }
  const std::map<int, std::size_t>& ranks() const noexcept { return ranks_; }

  /// d^k : X^k -> X^{k+1}.
  RMatrix d(int k) const {
    auto it = diffs_.find(k);
    if (it != diffs_.end()) return it->second;
    return RMatrix(ring_, rank(k + 1), rank(k));
  }
  bool d_is_zero(int k) const { return diffs_.find(k) == diffs_.end(); }

  bool is_zero() const noexcept { return ranks_.empty(); }
  /// Lowest / highest degree with nonzero rank (0 for the zero complex).
  int lo() const { return ranks_.empty() ? 0 : ranks_.begin()->first; }
  int hi() const { return ranks_.empty() ? 0 : ranks_.rbegin()->first; }
  /// hi - lo, the amplitude of the support.
  int width() const { return ranks_.empty() ? 0 : hi() - lo(); }

  std::size_t total_rank() const {
    std::size_t t = 0;
    for (auto [k, r] : ranks_) t += r;
    return t;
  }

  void verify() const {
    for (const auto& [k, dk] : diffs_) {
      auto it = diffs_.find(k + 1);
      if (it == diffs_.end()) continue;
      if (!rmat::multiply(ring_, it->second, dk).is_zero())
        fail(ErrorCode::not_a_complex, "d^" + std::to_string(k + 1) + " d^" +
                                           std::to_string(k) + " != 0");
    }
  }

  friend bool operator==(const FreeComplex& a, const FreeComplex& b) {
    return a.ring_ == b.ring_ && a.ranks_ == b.ranks_ && a.diffs_ == b.diffs_;
  }

 private:
  RingSpec ring_{};
  std::map<int, std::size_t> ranks_;
  std::map<int, RMatrix> diffs_;
};

/// Degree-0 chain morphism src -> dst.
class ChainMap {
 public:
  ChainMap() = default;
  ChainMap(FreeComplex src, FreeComplex dst, std::map<int, RMatrix> comps, bool check = true)
      : src_(std::move(src)), dst_(std::move(dst)) {
    if (!(src_.ring() == dst_.ring())) fail(ErrorCode::ring_mismatch, "chain map");
    for (auto& [k, f] : comps) {
      if (f.rows() != dst_.rank(k) || f.cols() != src_.rank(k))
        fail(ErrorCode::malformed_input,
             "chain map component " + std::to_string(k) + " has the wrong shape");
      if (f.rows() == 0 || f.cols() == 0) continue;
      if (check) rmat::check_canonical(src_.ring(), f);
      if (!f.is_zero()) comps_[k] = std::move(f);
    }
    if (check) verify();
  }

  static ChainMap identity(const FreeComplex& x) {
    std::map<int, RMatrix> c;
    for (auto [k, r] : x.ranks()) c[k] = RMatrix::identity(x.ring(), r);
    return ChainMap(x, x, std::move(c), false);
  }
  static ChainMap zero(const FreeComplex& src, const FreeComplex& dst) {
    return ChainMap(src, dst, {}, false);
  }

  const FreeComplex& src() const noexcept { return src_; }
  const FreeComplex& dst() const noexcept { return dst_; }
  const RingSpec& ring() const noexcept { return src_.ring(); }

  RMatrix at(int k) const {
    auto it = comps_.find(k);
    if (it != comps_.end()) return it->second;
    return RMatrix(src_.ring(), dst_.rank(k), src_.rank(k));
  }
  const std::map<int, RMatrix>& components() const noexcept { return comps_; }

  void verify() const {
    const auto& r = src_.ring();
    for (int k = std::min(src_.lo(), dst_.lo()) - 1; k <= std::max(src_.hi(), dst_.hi()); ++k) {
      if (src_.rank(k) == 0 || dst_.rank(k + 1) == 0) continue;
      RMatrix lhs = rmat::multiply(r, dst_.d(k), at(k));
      RMatrix rhs = rmat::multiply(r, at(k + 1), src_.d(k));
      if (!(lhs == rhs))
        fail(ErrorCode::not_a_chain_map, "fails to commute in degree " + std::to_string(k));
    }
  }

 private:
  FreeComplex src_, dst_;
  std::map<int, RMatrix> comps_;
};

namespace detail {

inline RMatrix signed_matrix(const RingSpec& r, const RMatrix& m, int sign) {
  return sign > 0 ? m : rmat::negate(r, m);
}

inline int sign_of(long e) { return (e % 2 == 0) ? 1 : -1; }

/// Degrees k with rank > 0 in X, ascending.
inline std::vector<int> degrees(const FreeComplex& x) {
  std::vector<int> out;
  for (auto [k, r] : x.ranks()) out.push_back(k);
  return out;
}

}  // namespace detail

inline FreeComplex shift(const FreeComplex& x, int s) {
  const auto& r = x.ring();
  std::map<int, std::size_t> ranks;
  std::map<int, RMatrix> diffs;
  for (auto [k, rk] : x.ranks()) ranks[k - s] = rk;
  for (auto [k, rk] : x.ranks())
    if (!x.d_is_zero(k)) diffs[k - s] = detail::signed_matrix(r, x.d(k), detail::sign_of(s));
  return FreeComplex(r, ranks, std::move(diffs), false);
}

inline FreeComplex direct_sum(const FreeComplex& x, const FreeComplex& y) {
  if (!(x.ring() == y.ring())) fail(ErrorCode::ring_mismatch, "direct_sum");
  const auto& r = x.ring();
  std::map<int, std::size_t> ranks;
  for (auto [k, rk] : x.ranks()) ranks[k] += rk;
  for (auto [k, rk] : y.ranks()) ranks[k] += rk;
  std::map<int, RMatrix> diffs;
  for (auto [k, rk] : ranks) {
    if (x.d_is_zero(k) && y.d_is_zero(k)) continue;
    RMatrix d(r, ranks.count(k + 1) ? ranks[k + 1] : 0, rk);
    rmat::place(d, x.d(k), 0, 0);
    rmat::place(d, y.d(k), x.rank(k + 1), x.rank(k));
    diffs[k] = std::move(d);
  }
  return FreeComplex(r, ranks, std::move(diffs), false);
}

/// cone(f)^k = dst^k + src^{k+1} with d = [[d_dst, f], [0, -d_src]].
inline FreeComplex cone(const ChainMap& f) {
  const auto& r = f.ring();
  const auto& x = f.src();
  const auto& y = f.dst();
  std::map<int, std::size_t> ranks;
  int lo = std::min(y.lo(), x.lo() - 1), hi = std::max(y.hi(), x.hi() - 1);
  for (int k = lo; k <= hi; ++k) ranks[k] = y.rank(k) + x.rank(k + 1);
  std::map<int, RMatrix> diffs;
  for (int k = lo; k < hi; ++k) {
    RMatrix d(r, ranks[k + 1], ranks[k]);
    rmat::place(d, y.d(k), 0, 0);
    rmat::place(d, f.at(k + 1), 0, y.rank(k));
    rmat::place(d, rmat::negate(r, x.d(k + 1)), y.rank(k + 1), y.rank(k));
    diffs[k] = std::move(d);
  }
  FreeComplex out(r, ranks, std::move(diffs), false);
  out.verify();
  return out;
}

/// Offsets of the (i, k - i) blocks inside tensor degree k.
inline std::map<int, std::size_t> tensor_offsets(const FreeComplex& x, const FreeComplex& y,
                                                 int k) {
  std::map<int, std::size_t> off;
  std::size_t pos = 0;
  for (auto [i, rx] : x.ranks()) {
    std::size_t ry = y.rank(k - i);
    if (ry == 0) continue;
    off[i] = pos;
    pos += rx * ry;
  }
  return off;
}

inline std::size_t tensor_rank(const FreeComplex& x, const FreeComplex& y, int k) {
  std::size_t t = 0;
  for (auto [i, rx] : x.ranks()) t += rx * y.rank(k - i);
  return t;
}

inline FreeComplex tensor(const FreeComplex& x, const FreeComplex& y) {
  if (!(x.ring() == y.ring())) fail(ErrorCode::ring_mismatch, "tensor");
  const auto& r = x.ring();
  if (x.is_zero() || y.is_zero()) return FreeComplex(r, {}, {});
  int lo = x.lo() + y.lo(), hi = x.hi() + y.hi();
  std::map<int, std::size_t> ranks;
  for (int k = lo; k <= hi; ++k) ranks[k] = tensor_rank(x, y, k);
  std::map<int, RMatrix> diffs;
  for (int k = lo; k < hi; ++k) {
    RMatrix d(r, ranks[k + 1], ranks[k]);
    auto src_off = tensor_offsets(x, y, k);
    auto dst_off = tensor_offsets(x, y, k + 1);
    for (auto [i, so] : src_off) {
      int j = k - i;
      std::size_t rx = x.rank(i), ry = y.rank(j);
      // dx (x) y lands in block (i + 1, j)
      if (auto it = dst_off.find(i + 1); it != dst_off.end() && !x.d_is_zero(i))
        rmat::place(d, rmat::kron(r, x.d(i), RMatrix::identity(r, ry)), it->second, so);
      // (-1)^i x (x) dy lands in block (i, j + 1)
      if (auto it = dst_off.find(i); it != dst_off.end() && !y.d_is_zero(j))
        rmat::place(d,
                    detail::signed_matrix(r, rmat::kron(r, RMatrix::identity(r, rx), y.d(j)),
                                          detail::sign_of(i)),
                    it->second, so);
    }
    diffs[k] = std::move(d);
  }
  return FreeComplex(r, ranks, std::move(diffs), false);
}

inline ChainMap tensor(const ChainMap& f, const ChainMap& g) {
  const auto& r = f.ring();
  FreeComplex src = tensor(f.src(), g.src());
  FreeComplex dst = tensor(f.dst(), g.dst());
  std::map<int, RMatrix> comps;
  for (auto [k, rk] : src.ranks()) {
    RMatrix c(r, dst.rank(k), rk);
    auto so = tensor_offsets(f.src(), g.src(), k);
    auto dof = tensor_offsets(f.dst(), g.dst(), k);
    for (auto [i, s_off] : so) {
      auto it = dof.find(i);
      if (it == dof.end()) continue;
      rmat::place(c, rmat::kron(r, f.at(i), g.at(k - i)), it->second, s_off);
    }
    comps[k] = std::move(c);
  }
  return ChainMap(src, dst, std::move(comps), false);
}

/// Offsets of the source-degree-k blocks inside Hom degree i.
inline std::map<int, std::size_t> hom_offsets(const FreeComplex& x, const FreeComplex& y,
                                              int i) {
  std::map<int, std::size_t> off;
  std::size_t pos = 0;
  for (auto [k, rx] : x.ranks()) {
    std::size_t ry = y.rank(k + i);
    if (ry == 0) continue;
    off[k] = pos;
    pos += rx * ry;
  }
  return off;
}

inline std::size_t hom_rank(const FreeComplex& x, const FreeComplex& y, int i) {
  std::size_t t = 0;
  for (auto [k, rx] : x.ranks()) t += rx * y.rank(k + i);
  return t;
}

inline FreeComplex hom_complex(const FreeComplex& x, const FreeComplex& y) {
  if (!(x.ring() == y.ring())) fail(ErrorCode::ring_mismatch, "hom_complex");
  const auto& r = x.ring();
  if (x.is_zero() || y.is_zero()) return FreeComplex(r, {}, {});
  int lo = y.lo() - x.hi(), hi = y.hi() - x.lo();
  std::map<int, std::size_t> ranks;
  for (int i = lo; i <= hi; ++i) ranks[i] = hom_rank(x, y, i);
  std::map<int, RMatrix> diffs;
  for (int i = lo; i < hi; ++i) {
    RMatrix d(r, ranks[i + 1], ranks[i]);
    auto src_off = hom_offsets(x, y, i);
    auto dst_off = hom_offsets(x, y, i + 1);
    for (auto [k, so] : src_off) {
      std::size_t rx = x.rank(k);
      // d_Y f : X^k -> Y^{k+i+1}, vec(A f) = (I (x) A) vec(f)
      if (auto it = dst_off.find(k); it != dst_off.end() && !y.d_is_zero(k + i))
        rmat::place(d, rmat::kron(r, RMatrix::identity(r, rx), y.d(k + i)), it->second, so);
      // -(-1)^i f d_X : X^{k-1} -> Y^{k+i}, vec(f B) = (B^T (x) I) vec(f)
      if (auto it = dst_off.find(k - 1); it != dst_off.end() && !x.d_is_zero(k - 1))
        rmat::place(d,
                    detail::signed_matrix(
                        r, rmat::kron(r, rmat::transpose(x.d(k - 1)),
                                      RMatrix::identity(r, y.rank(k + i))),
                        -detail::sign_of(i)),
                    it->second, so);
    }
    diffs[i] = std::move(d);
  }
  return FreeComplex(r, ranks, std::move(diffs), false);
}

/// Hom(X, g) : Hom(X, Y) -> Hom(X, Y'), f |-> g f.
inline ChainMap hom_map(const FreeComplex& x, const ChainMap& g) {
  const auto& r = g.ring();
  FreeComplex src = hom_complex(x, g.src());
  FreeComplex dst = hom_complex(x, g.dst());
  std::map<int, RMatrix> comps;
  for (auto [i, ri] : src.ranks()) {
    RMatrix c(r, dst.rank(i), ri);
    auto so = hom_offsets(x, g.src(), i);
    auto dof = hom_offsets(x, g.dst(), i);
    for (auto [k, s_off] : so) {
      auto it = dof.find(k);
      if (it == dof.end()) continue;
      rmat::place(c, rmat::kron(r, RMatrix::identity(r, x.rank(k)), g.at(k + i)), it->second,
                  s_off);
    }
    comps[i] = std::move(c);
  }
  return ChainMap(src, dst, std::move(comps), false);
}

/// Hom(h, Y) : Hom(X, Y) -> Hom(X', Y), f |-> f h, for h : X' -> X.
inline ChainMap hom_map(const ChainMap& h, const FreeComplex& y) {
  const auto& r = h.ring();
  FreeComplex src = hom_complex(h.dst(), y);
  FreeComplex dst = hom_complex(h.src(), y);
  std::map<int, RMatrix> comps;
  for (auto [i, ri] : src.ranks()) {
    RMatrix c(r, dst.rank(i), ri);
    auto so = hom_offsets(h.dst(), y, i);
    auto dof = hom_offsets(h.src(), y, i);
    for (auto [k, s_off] : so) {
      auto it = dof.find(k);
      if (it == dof.end()) continue;
      rmat::place(c,
                  rmat::kron(r, rmat::transpose(h.at(k)), RMatrix::identity(r, y.rank(k + i))),
                  it->second, s_off);
    }
    comps[i] = std::move(c);
  }
  return ChainMap(src, dst, std::move(comps), false);
}

inline ChainMap compose(const ChainMap& g, const ChainMap& f) {
  if (!(f.dst() == g.src())) fail(ErrorCode::malformed_input, "compose: mismatched complexes");
  std::map<int, RMatrix> comps;
  for (auto [k, rk] : f.src().ranks())
    if (g.dst().rank(k) > 0) comps[k] = rmat::multiply(f.ring(), g.at(k), f.at(k));
  return ChainMap(f.src(), g.dst(), std::move(comps), false);
}

/// Scalar generators of ker d^k (ambient X^k in scalar coordinates).
inline Matrix<Int> cocycle_generators(const FreeComplex& x, int k) {
  const auto& r = x.ring();
  const std::size_t amb = x.rank(k) * r.width();
  if (amb == 0) return Matrix<Int>(0, 0);
  if (x.rank(k + 1) == 0 || x.d_is_zero(k)) return Matrix<Int>::identity(amb);
  return kernel(r.scalars(), scalar_expand(r, x.d(k)));
}

inline Matrix<Int> coboundary_generators(const FreeComplex& x, int k) {
  const auto& r = x.ring();
  const std::size_t amb = x.rank(k) * r.width();
  if (amb == 0 || x.rank(k - 1) == 0 || x.d_is_zero(k - 1)) return Matrix<Int>(amb, 0);
  return scalar_expand(r, x.d(k - 1));
}

inline PresentedModule cohomology_at(const FreeComplex& x, int k) {
  const auto& r = x.ring();
  const std::size_t amb = x.rank(k) * r.width();
  return PresentedModule(r, amb, cocycle_generators(x, k), coboundary_generators(x, k));
}

/// H^k(f) on the cohomology presentations.
inline InducedMap cohomology_map(const ChainMap& f, int k, const PresentedModule& hs,
                                 const PresentedModule& hd) {
  return induced_map(f.at(k), hs, hd);
}

inline InducedMap cohomology_map(const ChainMap& f, int k) {
  return cohomology_map(f, k, cohomology_at(f.src(), k), cohomology_at(f.dst(), k));
}

inline bool is_acyclic(const FreeComplex& x) {
  for (auto [k, rk] : x.ranks())
    if (!cohomology_at(x, k).is_zero()) return false;
  return true;
}

inline bool is_quasi_iso(const ChainMap& f) {
  std::map<int, int> degs;
  for (auto [k, r] : f.src().ranks()) degs[k] = 1;
  for (auto [k, r] : f.dst().ranks()) degs[k] = 1;
  for (auto [k, one] : degs)
    if (!cohomology_map(f, k).is_bijective()) return false;
  return true;
}

}  // namespace ddc
