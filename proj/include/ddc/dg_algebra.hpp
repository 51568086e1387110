#pragma once

// DG algebras realized as subalgebras of End_A(L) spanned by matrix units,
// their cohomology algebras, Ext algebras through chain maps P -> P[i], and
// the triangular comparison of two resolutions.
//
// Product convention: f g = f o g (apply g first), so that
//   d(f g) = d(f) g + (-1)^|f| f d(g).

#include "ddc/complex.hpp"

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace ddc {

using Element = std::vector<RingElem>;

/// Graded map of degree i: block k is L^k -> L^{k+i}.
using GradedMap = std::map<int, RMatrix>;

class DGAlgebra {
 public:
  /// allowed(src, dst) selects the matrix units x_src -> x_dst (global basis
  /// indices of L, degree-ordered). An empty predicate keeps all of End_A(L).
  using Predicate = std::function<bool(std::size_t src, std::size_t dst)>;

  DGAlgebra() = default;
  explicit DGAlgebra(FreeComplex l, Predicate allowed = {}) : l_(std::move(l)) {
    const auto& r = l_.ring();
    std::size_t pos = 0;
    for (auto [k, rk] : l_.ranks()) {
      offset_[k] = pos;
      pos += rk;
    }
    end_ = hom_complex(l_, l_);
    std::map<int, std::size_t> ranks;
    for (auto [i, ri] : end_.ranks()) {
      auto& keep = keep_[i];
      auto& pos_of = sub_index_[i];
      pos_of.assign(ri, npos);
      for (auto [k, off] : hom_offsets(l_, l_, i)) {
        const std::size_t rs = l_.rank(k), rt = l_.rank(k + i);
        for (std::size_t a = 0; a < rs; ++a)
          for (std::size_t b = 0; b < rt; ++b) {
            std::size_t full = off + a * rt + b;
            if (!allowed || allowed(offset_[k] + a, offset_[k + i] + b)) {
              pos_of[full] = keep.size();
              keep.push_back(full);
            }
          }
      }
      if (!keep.empty()) ranks[i] = keep.size();
    }
    std::map<int, RMatrix> diffs;
    for (auto [i, ri] : ranks) {
      if (!ranks.count(i + 1) && end_.rank(i + 1) == 0) continue;
      RMatrix full = end_.d(i);
      // closure: nothing may leave the allowed units
      for (std::size_t row = 0; row < full.rows(); ++row) {
        if (sub_index_[i + 1].size() > row && sub_index_[i + 1][row] != npos) continue;
        for (std::size_t c : keep_[i])
          if (!full.entry_is_zero(row, c))
            fail(ErrorCode::not_well_defined, "matrix-unit span is not closed under d");
      }
      if (!ranks.count(i + 1)) continue;
      RMatrix d(r, ranks[i + 1], ri);
      for (std::size_t a = 0; a < keep_[i + 1].size(); ++a)
        for (std::size_t b = 0; b < ri; ++b) d.set(a, b, full.at(keep_[i + 1][a], keep_[i][b]));
      diffs[i] = std::move(d);
    }
    c_ = FreeComplex(r, ranks, std::move(diffs), false);
  }

  const RingSpec& ring() const noexcept { return l_.ring(); }
  /// The complex L on which the algebra acts.
  const FreeComplex& base() const noexcept { return l_; }
  /// Underlying complex of the algebra.
  const FreeComplex& complex() const noexcept { return c_; }
  std::size_t rank(int i) const { return c_.rank(i); }

  /// Position of a full End_A(L) coordinate in this algebra, or npos.
  std::size_t sub_index(int i, std::size_t full) const {
    auto it = sub_index_.find(i);
    if (it == sub_index_.end() || full >= it->second.size()) return npos;
    return it->second[full];
  }
  std::size_t full_index(int i, std::size_t sub) const { return keep_.at(i).at(sub); }
  std::size_t global_offset(int k) const {
    auto it = offset_.find(k);
    return it == offset_.end() ? 0 : it->second;
  }

  Element zero(int i) const { return Element(rank(i), ring::zero(ring())); }
  Element basis(int i, std::size_t s) const {
    Element e = zero(i);
    e[s] = ring::one(ring());
    return e;
  }
  Element unit() const {
    GradedMap id;
    for (auto [k, rk] : l_.ranks()) id[k] = RMatrix::identity(ring(), rk);
    return from_map(0, id);
  }

  GradedMap to_map(int i, const Element& f) const {
    GradedMap out;
    for (auto [k, rk] : l_.ranks()) {
      const std::size_t rt = l_.rank(k + i);
      if (rt) out[k] = RMatrix(ring(), rt, rk);
    }
    auto offs = hom_offsets(l_, l_, i);
    for (std::size_t s = 0; s < f.size(); ++s) {
      if (ring::is_zero(f[s])) continue;
      std::size_t full = keep_.at(i)[s];
      auto it = std::prev(std::upper_bound(
          offs.begin(), offs.end(), full,
          [](std::size_t v, const std::pair<const int, std::size_t>& p) { return v < p.second; }));
      int k = it->first;
      std::size_t local = full - it->second, rt = l_.rank(k + i);
      out[k].set(local % rt, local / rt, f[s]);
    }
    return out;
  }

  Element from_map(int i, const GradedMap& m) const {
    Element out = zero(i);
    auto offs = hom_offsets(l_, l_, i);
    for (const auto& [k, blk] : m) {
      auto it = offs.find(k);
      if (it == offs.end()) continue;
      const std::size_t rt = l_.rank(k + i);
      for (std::size_t a = 0; a < blk.cols(); ++a)
        for (std::size_t b = 0; b < blk.rows(); ++b) {
          if (blk.entry_is_zero(b, a)) continue;
          std::size_t sub = sub_index(i, it->second + a * rt + b);
          if (sub == npos) fail(ErrorCode::not_well_defined, "map leaves the subalgebra");
          out[sub] = blk.at(b, a);
        }
    }
    return out;
  }

  /// f g for f of degree i and g of degree j.
  Element multiply(int i, const Element& f, int j, const Element& g) const {
    GradedMap fm = to_map(i, f), gm = to_map(j, g), out;
    for (const auto& [k, gb] : gm) {
      auto it = fm.find(k + j);
      if (it == fm.end()) continue;
      out[k] = rmat::multiply(ring(), it->second, gb);
    }
    return from_map(i + j, out);
  }

  Element differential(int i, const Element& f) const {
    if (rank(i + 1) == 0) return {};
    return apply(c_.d(i), f);
  }

  Element apply(const RMatrix& m, const Element& v) const {
    Element out(m.rows(), ring::zero(ring()));
    for (std::size_t a = 0; a < m.rows(); ++a)
      for (std::size_t b = 0; b < m.cols(); ++b)
        if (!m.entry_is_zero(a, b) && !ring::is_zero(v[b]))
          out[a] = ring::add(ring(), out[a], ring::mul(ring(), m.at(a, b), v[b]));
    return out;
  }

  Element add(const Element& a, const Element& b, int sign = 1) const {
    Element out = a;
    for (std::size_t s = 0; s < a.size(); ++s)
      out[s] = ring::add(ring(), a[s], ring::scale(ring(), b[s], sign));
    return out;
  }

  /// Evaluation action on L: f(x) for f of degree i and x in L^k.
  Element act(int i, const Element& f, int k, const Element& x) const {
    GradedMap fm = to_map(i, f);
    auto it = fm.find(k);
    if (it == fm.end()) return Element(l_.rank(k + i), ring::zero(ring()));
    return apply(it->second, x);
  }

  /// Graded Leibniz rule on all pairs of basis elements.
  bool check_leibniz() const {
    for (auto [i, ri] : c_.ranks())
      for (auto [j, rj] : c_.ranks()) {
        if (rank(i + j + 1) == 0) continue;
        for (std::size_t s = 0; s < ri; ++s)
          for (std::size_t t = 0; t < rj; ++t) {
            Element f = basis(i, s), g = basis(j, t);
            Element lhs = differential(i + j, multiply(i, f, j, g));
            Element rhs = zero(i + j + 1);
            if (rank(i + 1)) rhs = add(rhs, multiply(i + 1, differential(i, f), j, g));
            if (rank(j + 1))
              rhs = add(rhs, multiply(i, f, j + 1, differential(j, g)), detail::sign_of(i));
            if (lhs.empty()) lhs = zero(i + j + 1);
            if (!(lhs == rhs)) return false;
          }
      }
    return true;
  }

  /// Associativity on basis triples (all of them up to `limit` triples, a
  /// seeded sample beyond) and the two unit laws on every basis element.
  bool check_associativity(std::size_t limit = 20000, unsigned seed = 1) const {
    std::vector<std::pair<int, std::size_t>> all;
    for (auto [i, ri] : c_.ranks())
      for (std::size_t s = 0; s < ri; ++s) all.emplace_back(i, s);
    Element u = unit();
    for (auto [i, s] : all) {
      Element f = basis(i, s);
      if (!(multiply(0, u, i, f) == f) || !(multiply(i, f, 0, u) == f)) return false;
    }
    auto triple = [&](std::size_t x, std::size_t y, std::size_t z) {
      auto [i, s] = all[x];
      auto [j, t] = all[y];
      auto [k, v] = all[z];
      Element f = basis(i, s), g = basis(j, t), h = basis(k, v);
      Element lhs = multiply(i + j, multiply(i, f, j, g), k, h);
      Element rhs = multiply(i, f, j + k, multiply(j, g, k, h));
      return lhs == rhs;
    };
    const std::size_t n = all.size();
    if (n * n * n <= limit) {
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          for (std::size_t z = 0; z < n; ++z)
            if (!triple(x, y, z)) return false;
      return true;
    }
    std::mt19937 gen(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t t = 0; t < limit; ++t)
      if (!triple(pick(gen), pick(gen), pick(gen))) return false;
    return true;
  }

  /// Action Leibniz d(f x) = d(f) x + (-1)^|f| f d(x) on basis elements.
  bool check_action() const {
    for (auto [i, ri] : c_.ranks())
      for (auto [k, rk] : l_.ranks()) {
        if (l_.rank(k + i + 1) == 0) continue;
        for (std::size_t s = 0; s < ri; ++s)
          for (std::size_t a = 0; a < rk; ++a) {
            Element f = basis(i, s);
            Element x(rk, ring::zero(ring()));
            x[a] = ring::one(ring());
            Element fx = act(i, f, k, x);
            Element lhs = apply(l_.d(k + i), fx);
            Element rhs(l_.rank(k + i + 1), ring::zero(ring()));
            if (rank(i + 1)) rhs = add(rhs, act(i + 1, differential(i, f), k, x));
            if (l_.rank(k + 1))
              rhs = add(rhs, act(i, f, k + 1, apply(l_.d(k), x)), detail::sign_of(i));
            if (!(lhs == rhs)) return false;
          }
      }
    return true;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  FreeComplex l_;
  FreeComplex end_;
  FreeComplex c_;
  std::map<int, std::size_t> offset_;
  std::map<int, std::vector<std::size_t>> keep_;
  std::map<int, std::vector<std::size_t>> sub_index_;
};

/// P as a left DG module over End_A(P) by evaluation.
struct DGModuleOverB {
  FreeComplex p;
  bool action_checked = false;
};

inline std::pair<DGAlgebra, DGModuleOverB> end_dg_algebra(const FreeComplex& p) {
  DGAlgebra b(p);
  DGModuleOverB m{p, b.check_action()};
  return {std::move(b), std::move(m)};
}

/// Cohomology algebra with structure constants on the chosen generators.
struct GradedAlgebra {
  struct Product {
    int i = 0, j = 0;
    /// table[g][h] = coordinates of (gen_g of degree i)(gen_h of degree j).
    std::vector<std::vector<std::vector<Int>>> table;
  };
  RingSpec ring;
  std::map<int, PresentedModule> degrees;
  std::vector<Product> products;
  std::vector<Int> unit;

  const PresentedModule* at(int i) const {
    auto it = degrees.find(i);
    return it == degrees.end() ? nullptr : &it->second;
  }
  const Product* product(int i, int j) const {
    for (const auto& p : products)
      if (p.i == i && p.j == j) return &p;
    return nullptr;
  }

  /// Associativity and unit laws on generators, exactly modulo relations.
  bool check_laws() const;
};

namespace detail {

inline std::vector<Int> reduce_coords(const PresentedModule& m, std::vector<Int> c) {
  for (std::size_t g = 0; g < c.size(); ++g) c[g] = m.reduce_mod_order(c[g], m.orders()[g]);
  return c;
}

/// Multiply coordinate vectors through a product table.
inline std::vector<Int> table_product(const GradedAlgebra& alg, int i, const std::vector<Int>& x,
                                      int j, const std::vector<Int>& y) {
  const PresentedModule* tgt = alg.at(i + j);
  if (!tgt) return {};
  std::vector<Int> out(tgt->num_generators(), 0);
  const auto* p = alg.product(i, j);
  if (!p) return out;
  for (std::size_t g = 0; g < x.size(); ++g) {
    if (x[g].is_zero()) continue;
    for (std::size_t h = 0; h < y.size(); ++h) {
      if (y[h].is_zero()) continue;
      const auto& c = p->table[g][h];
      for (std::size_t t = 0; t < out.size(); ++t) out[t] += x[g] * y[h] * c[t];
    }
  }
  return reduce_coords(*tgt, out);
}

}  // namespace detail

inline bool GradedAlgebra::check_laws() const {
  auto basis = [](const PresentedModule& m, std::size_t g) {
    std::vector<Int> v(m.num_generators(), 0);
    v[g] = 1;
    return v;
  };
  for (const auto& [i, mi] : degrees) {
    for (std::size_t g = 0; g < mi.num_generators(); ++g) {
      auto e = basis(mi, g);
      if (at(0) && !at(0)->is_zero()) {
        if (detail::table_product(*this, 0, unit, i, e) != detail::reduce_coords(mi, e))
          return false;
        if (detail::table_product(*this, i, e, 0, unit) != detail::reduce_coords(mi, e))
          return false;
      }
    }
    for (const auto& [j, mj] : degrees)
      for (const auto& [k, mk] : degrees) {
        if (!at(i + j + k)) continue;
        for (std::size_t g = 0; g < mi.num_generators(); ++g)
          for (std::size_t h = 0; h < mj.num_generators(); ++h)
            for (std::size_t t = 0; t < mk.num_generators(); ++t) {
              auto x = basis(mi, g), y = basis(mj, h), z = basis(mk, t);
              auto xy = at(i + j) ? detail::table_product(*this, i, x, j, y)
                                  : std::vector<Int>{};
              auto yz = at(j + k) ? detail::table_product(*this, j, y, k, z)
                                  : std::vector<Int>{};
              std::vector<Int> lhs = at(i + j) ? detail::table_product(*this, i + j, xy, k, z)
                                               : std::vector<Int>(at(i + j + k)->num_generators(), 0);
              std::vector<Int> rhs = at(j + k) ? detail::table_product(*this, i, x, j + k, yz)
                                               : std::vector<Int>(at(i + j + k)->num_generators(), 0);
              if (lhs != rhs) return false;
            }
      }
  }
  return true;
}

namespace detail {

using ProductFn = std::function<Element(int, const Element&, int, const Element&)>;

inline GradedAlgebra assemble_algebra(const FreeComplex& c, const ProductFn& mult,
                                      const Element& unit_rep) {
  GradedAlgebra alg;
  const auto& r = c.ring();
  alg.ring = r;
  for (auto [i, ri] : c.ranks()) alg.degrees.emplace(i, cohomology_at(c, i));
  auto rep = [&](const PresentedModule& m, std::size_t g) {
    return to_ring_vector(r, m.generators().column(g));
  };
  for (const auto& [i, mi] : alg.degrees)
    for (const auto& [j, mj] : alg.degrees) {
      const PresentedModule* tgt = alg.at(i + j);
      if (!tgt || mi.is_zero() || mj.is_zero() || tgt->is_zero()) continue;
      GradedAlgebra::Product p;
      p.i = i;
      p.j = j;
      p.table.assign(mi.num_generators(), {});
      for (std::size_t g = 0; g < mi.num_generators(); ++g)
        for (std::size_t h = 0; h < mj.num_generators(); ++h) {
          Element prod = mult(i, rep(mi, g), j, rep(mj, h));
          auto coords = tgt->coordinates(to_scalar_vector(r, prod));
          if (!coords) fail(ErrorCode::not_well_defined, "product of cocycles is not a cocycle");
          p.table[g].push_back(*coords);
        }
      alg.products.push_back(std::move(p));
    }
  if (const auto* h0 = alg.at(0); h0 && !h0->is_zero()) {
    auto coords = h0->coordinates(to_scalar_vector(r, unit_rep));
    if (!coords) fail(ErrorCode::not_well_defined, "identity is not a cocycle");
    alg.unit = *coords;
  }
  return alg;
}

}  // namespace detail

/// H(B) with products from the DG multiplication.
inline GradedAlgebra cohomology_algebra(const DGAlgebra& b) {
  return detail::assemble_algebra(
      b.complex(),
      [&](int i, const Element& f, int j, const Element& g) { return b.multiply(i, f, j, g); },
      b.unit());
}

/// Chain map P -> P[i] for a cocycle of Hom^i(P, P) given in hom coordinates.
inline ChainMap cocycle_to_chain_map(const FreeComplex& p, int i, const Element& f) {
  const auto& r = p.ring();
  FreeComplex tgt = shift(p, i);
  std::map<int, RMatrix> comps;
  auto offs = hom_offsets(p, p, i);
  for (auto [k, off] : offs) {
    const std::size_t rs = p.rank(k), rt = p.rank(k + i);
    RMatrix blk(r, rt, rs);
    for (std::size_t a = 0; a < rs; ++a)
      for (std::size_t b = 0; b < rt; ++b) blk.set(b, a, f[off + a * rt + b]);
    comps[k] = std::move(blk);
  }
  return ChainMap(p, tgt, std::move(comps));
}

inline Element chain_map_to_cocycle(const FreeComplex& p, int i, const ChainMap& m) {
  const auto& r = p.ring();
  Element out(hom_rank(p, p, i), ring::zero(r));
  for (auto [k, off] : hom_offsets(p, p, i)) {
    RMatrix blk = m.at(k);
    const std::size_t rt = p.rank(k + i);
    for (std::size_t a = 0; a < blk.cols(); ++a)
      for (std::size_t b = 0; b < blk.rows(); ++b) out[off + a * rt + b] = blk.at(b, a);
  }
  return out;
}

/// Ext_A(P) for bounded free P: classes of chain maps P -> P[i] up to
/// homotopy, multiplied by Yoneda composition g[i] o f.
inline GradedAlgebra ext_algebra_A(const FreeComplex& p) {
  FreeComplex e = hom_complex(p, p);
  auto yoneda = [&](int i, const Element& f, int j, const Element& g) {
    // f : P -> P[i], g : P -> P[j]; the product f g is f[j] o g : P -> P[i + j]
    ChainMap fm = cocycle_to_chain_map(p, i, f);
    ChainMap gm = cocycle_to_chain_map(p, j, g);
    std::map<int, RMatrix> shifted;
    for (const auto& [k, blk] : fm.components()) shifted[k - j] = blk;
    ChainMap fj(shift(p, j), shift(p, i + j), std::move(shifted));
    return chain_map_to_cocycle(p, i + j, compose(fj, gm));
  };
  Element unit = chain_map_to_cocycle(p, 0, ChainMap::identity(p));
  return detail::assemble_algebra(e, yoneda, unit);
}

/// Structure constants of two algebras on the same presentations agree.
inline bool same_structure(const GradedAlgebra& a, const GradedAlgebra& b) {
  if (a.degrees.size() != b.degrees.size()) return false;
  for (const auto& [i, m] : a.degrees) {
    const auto* o = b.at(i);
    if (!o || o->invariants() != m.invariants()) return false;
  }
  if (a.unit != b.unit || a.products.size() != b.products.size()) return false;
  for (const auto& p : a.products) {
    const auto* q = b.product(p.i, p.j);
    if (!q) return false;
    const auto* tgt = a.at(p.i + p.j);
    for (std::size_t g = 0; g < p.table.size(); ++g)
      for (std::size_t h = 0; h < p.table[g].size(); ++h)
        if (detail::reduce_coords(*tgt, p.table[g][h]) !=
            detail::reduce_coords(*tgt, q->table[g][h]))
          return false;
  }
  return true;
}

struct ComparisonReport {
  DGAlgebra b, b_prime, b_triangular;
  bool projection_quasi_iso = false;        ///< B'' -> B
  bool projection_prime_quasi_iso = false;  ///< B'' -> B'
  bool kernel_acyclic = false;
  bool kernel_prime_acyclic = false;
  bool projections_multiplicative = false;
  std::map<int, std::vector<Int>> h_b, h_b_prime, h_b_triangular;
  bool invariants_match = false;

  bool passed() const {
    return projection_quasi_iso && projection_prime_quasi_iso && kernel_acyclic &&
           kernel_prime_acyclic && projections_multiplicative && invariants_match;
  }
};

namespace detail {

/// Coordinate projection of a matrix-unit subalgebra onto another whose
/// units are a subset, with an optional sign (-1)^degree.
inline ChainMap unit_projection(const DGAlgebra& from, const DGAlgebra& to,
                                const std::function<std::pair<bool, std::size_t>(int, std::size_t)>&
                                    target_of,
                                bool degree_sign) {
  const auto& r = from.ring();
  std::map<int, RMatrix> comps;
  for (auto [i, ri] : from.complex().ranks()) {
    RMatrix m(r, to.rank(i), ri);
    for (std::size_t s = 0; s < ri; ++s) {
      auto [ok, t] = target_of(i, s);
      if (!ok) continue;
      m.set(t, s, degree_sign && (i % 2 != 0) ? ring::neg(r, ring::one(r)) : ring::one(r));
    }
    comps[i] = std::move(m);
  }
  return ChainMap(from.complex(), to.complex(), std::move(comps));
}

inline FreeComplex kernel_subcomplex(const DGAlgebra& a,
                                     const std::function<bool(int, std::size_t)>& in_kernel) {
  const auto& r = a.ring();
  std::map<int, std::vector<std::size_t>> keep;
  std::map<int, std::size_t> ranks;
  for (auto [i, ri] : a.complex().ranks()) {
    for (std::size_t s = 0; s < ri; ++s)
      if (in_kernel(i, s)) keep[i].push_back(s);
    if (!keep[i].empty()) ranks[i] = keep[i].size();
  }
  std::map<int, RMatrix> diffs;
  for (auto [i, ri] : ranks) {
    if (!ranks.count(i + 1)) continue;
    RMatrix full = a.complex().d(i);
    RMatrix d(r, ranks[i + 1], ri);
    for (std::size_t x = 0; x < keep[i + 1].size(); ++x)
      for (std::size_t y = 0; y < ri; ++y) d.set(x, y, full.at(keep[i + 1][x], keep[i][y]));
    diffs[i] = std::move(d);
  }
  return FreeComplex(r, ranks, std::move(diffs));
}

inline std::map<int, std::vector<Int>> cohomology_invariants(const FreeComplex& c) {
  std::map<int, std::vector<Int>> out;
  for (auto [i, ri] : c.ranks()) {
    auto h = cohomology_at(c, i);
    if (!h.is_zero()) out[i] = h.invariants();
  }
  return out;
}

}  // namespace detail

/// Resolution comparison for a quasi-isomorphism phi : P' -> P. With
/// L = cone(phi) = P + P'[1], B'' is the subalgebra of End_A(L) with no
/// component P -> P'[1]. The projections are f |-> f_PP onto End(P) and
/// f |-> (-1)^|f| f_P'P' onto End(P') (End(P'[1]) and End(P') share blocks,
/// with opposite differentials).
inline ComparisonReport compare_resolutions(const FreeComplex& p, const FreeComplex& p_prime,
                                            const ChainMap& phi) {
  if (!(phi.src() == p_prime) || !(phi.dst() == p))
    fail(ErrorCode::invalid_comparison, "phi must map P' to P");
  if (!is_quasi_iso(phi)) fail(ErrorCode::invalid_comparison, "phi is not a quasi-isomorphism");
  FreeComplex l = cone(phi);
  // global index in L -> (in P, degree, local index)
  struct Slot {
    bool in_p;
    int degree;
    std::size_t local;
  };
  std::vector<Slot> slots;
  for (auto [k, rk] : l.ranks())
    for (std::size_t a = 0; a < rk; ++a) {
      bool in_p = a < p.rank(k);
      slots.push_back({in_p, k, in_p ? a : a - p.rank(k)});
    }
  ComparisonReport rep;
  rep.b = DGAlgebra(p);
  rep.b_prime = DGAlgebra(p_prime);
  rep.b_triangular =
      DGAlgebra(l, [&](std::size_t s, std::size_t t) { return !(slots[s].in_p && !slots[t].in_p); });

  const DGAlgebra& bt = rep.b_triangular;
  // locate the matrix unit of each B'' basis element
  auto unit_of = [&](int i, std::size_t s) {
    std::size_t full = bt.full_index(i, s);
    auto offs = hom_offsets(l, l, i);
    auto it = std::prev(std::upper_bound(
        offs.begin(), offs.end(), full,
        [](std::size_t v, const std::pair<const int, std::size_t>& q) { return v < q.second; }));
    int k = it->first;
    std::size_t local = full - it->second, rt = l.rank(k + i);
    std::size_t a = local / rt, b = local % rt;
    return std::pair{slots[bt.global_offset(k) + a], slots[bt.global_offset(k + i) + b]};
  };
  auto to_b = [&](int i, std::size_t s) -> std::pair<bool, std::size_t> {
    auto [src, dst] = unit_of(i, s);
    if (!src.in_p || !dst.in_p) return {false, 0};
    auto offs = hom_offsets(p, p, i);
    std::size_t full = offs.at(src.degree) + src.local * p.rank(src.degree + i) + dst.local;
    return {true, rep.b.sub_index(i, full)};
  };
  auto to_b_prime = [&](int i, std::size_t s) -> std::pair<bool, std::size_t> {
    auto [src, dst] = unit_of(i, s);
    if (src.in_p || dst.in_p) return {false, 0};
    // L^k holds P'^{k+1}
    int ks = src.degree + 1;
    auto offs = hom_offsets(p_prime, p_prime, i);
    std::size_t full = offs.at(ks) + src.local * p_prime.rank(ks + i) + dst.local;
    return {true, rep.b_prime.sub_index(i, full)};
  };
  ChainMap pr = detail::unit_projection(bt, rep.b, to_b, false);
  ChainMap pr_prime = detail::unit_projection(bt, rep.b_prime, to_b_prime, true);
  rep.projection_quasi_iso = is_quasi_iso(pr);
  rep.projection_prime_quasi_iso = is_quasi_iso(pr_prime);
  rep.kernel_acyclic =
      is_acyclic(detail::kernel_subcomplex(bt, [&](int i, std::size_t s) { return !to_b(i, s).first; }));
  rep.kernel_prime_acyclic = is_acyclic(
      detail::kernel_subcomplex(bt, [&](int i, std::size_t s) { return !to_b_prime(i, s).first; }));

  // multiplicativity of both projections on basis pairs
  auto project = [&](const ChainMap& m, int i, const Element& f) { return bt.apply(m.at(i), f); };
  rep.projections_multiplicative = true;
  for (auto [i, ri] : bt.complex().ranks())
    for (auto [j, rj] : bt.complex().ranks())
      for (std::size_t s = 0; s < ri && rep.projections_multiplicative; ++s)
        for (std::size_t t = 0; t < rj; ++t) {
          Element f = bt.basis(i, s), g = bt.basis(j, t);
          Element fg = bt.rank(i + j) ? bt.multiply(i, f, j, g) : Element{};
          for (const auto* alg : {&rep.b, &rep.b_prime}) {
            const ChainMap& m = alg == &rep.b ? pr : pr_prime;
            if (alg->rank(i + j) == 0) continue;
            Element lhs = fg.empty() ? alg->zero(i + j) : project(m, i + j, fg);
            Element pf = alg->rank(i) ? project(m, i, f) : Element{};
            Element pg = alg->rank(j) ? project(m, j, g) : Element{};
            Element rhs = (pf.empty() || pg.empty()) ? alg->zero(i + j)
                                                     : alg->multiply(i, pf, j, pg);
            if (!(lhs == rhs)) {
              rep.projections_multiplicative = false;
              break;
            }
          }
          if (!rep.projections_multiplicative) break;
        }

  rep.h_b = detail::cohomology_invariants(rep.b.complex());
  rep.h_b_prime = detail::cohomology_invariants(rep.b_prime.complex());
  rep.h_b_triangular = detail::cohomology_invariants(bt.complex());
  rep.invariants_match = rep.h_b == rep.h_b_prime && rep.h_b == rep.h_b_triangular;
  return rep;
}

}  // namespace ddc
