#pragma once

// Semi-free resolutions of DG modules over a DG algebra B by cell
// attachment, and the complexes Hom_B(Q, M) and Q (x)_B P built from them.
//
// Q = sum_c B x_c with |x_c| = e_c, d(u x_c) = d(u) x_c + (-1)^|u| u dx_c,
// dx_c = sum_c' beta_{c,c'} x_c' a cycle of earlier cells, and augmentation
// pi(u x_c) = u pi(x_c). Level n attaches one cell per A-minimal generator of
// H(cone(pi)) that is still nonzero when reached: a cocycle (p, q) of
// cone(pi)^k = N^k + Q^{k+1} yields a cell of degree k with dx = q and
// pi(x) = -p.
//
// Hom_B(Q, M)^d = sum_c M^{e_c + d} with
//   (Df)(x_c) = d_M f(x_c) - (-1)^d sum_c' (-1)^{d |beta|} beta f(x_c').
// Right modules are handled as left modules over B^op with
// u * x = (-1)^{|u||x|} x u.
//
// Cells may be B e x for an idempotent cycle e of B^0 (a projection onto a
// connected summand of P). A summand B e covered only by free cells leaves
// kernels B(1 - e), B e, ... that never terminate; with B e x the summand is
// resolved by one cell. Then Hom_B(B e x, M) = e M and B e x (x) P = e P.

#include "ddc/dg_algebra.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

namespace ddc {

using ProductFn = std::function<Element(int, const Element&, int, const Element&)>;
/// Left action: (degree of b, b, degree of x, x) -> b x.
using ActionFn = std::function<Element(int, const Element&, int, const Element&)>;

struct AlgebraView {
  FreeComplex complex;
  ProductFn mul;
  Element unit;
};

struct ModuleView {
  FreeComplex complex;
  ActionFn act;
};

inline AlgebraView left_view(const DGAlgebra& b) {
  return {b.complex(),
          [&b](int i, const Element& f, int j, const Element& g) { return b.multiply(i, f, j, g); },
          b.unit()};
}

/// B^op: f * g = (-1)^{|f||g|} g f.
inline AlgebraView opposite_view(const DGAlgebra& b) {
  return {b.complex(),
          [&b](int i, const Element& f, int j, const Element& g) {
            Element out = b.multiply(j, g, i, f);
            if ((i * j) % 2 != 0)
              for (auto& x : out) x = ring::neg(b.ring(), x);
            return out;
          },
          b.unit()};
}

/// P as a left B-module by evaluation.
inline ModuleView evaluation_module(const DGAlgebra& b) {
  return {b.base(), [&b](int i, const Element& u, int k, const Element& x) {
            return b.act(i, u, k, x);
          }};
}

/// B as a left module over B^op (the right regular module).
inline ModuleView right_regular_module(const DGAlgebra& b) {
  AlgebraView op = opposite_view(b);
  return {b.complex(), op.mul};
}

namespace detail {

/// Graded map X -> Y of degree i from Hom coordinates.
inline GradedMap hom_to_map(const FreeComplex& x, const FreeComplex& y, int i, const Element& f) {
  const auto& r = x.ring();
  GradedMap out;
  for (auto [k, off] : hom_offsets(x, y, i)) {
    const std::size_t rs = x.rank(k), rt = y.rank(k + i);
    RMatrix blk(r, rt, rs);
    for (std::size_t a = 0; a < rs; ++a)
      for (std::size_t b = 0; b < rt; ++b) blk.set(b, a, f[off + a * rt + b]);
    out[k] = std::move(blk);
  }
  return out;
}

inline Element map_to_hom(const FreeComplex& x, const FreeComplex& y, int i, const GradedMap& m) {
  const auto& r = x.ring();
  Element out(hom_rank(x, y, i), ring::zero(r));
  for (auto [k, off] : hom_offsets(x, y, i)) {
    auto it = m.find(k);
    if (it == m.end()) continue;
    const std::size_t rt = y.rank(k + i);
    for (std::size_t a = 0; a < it->second.cols(); ++a)
      for (std::size_t b = 0; b < it->second.rows(); ++b) out[off + a * rt + b] = it->second.at(b, a);
  }
  return out;
}

inline Element apply_matrix(const RingSpec& r, const RMatrix& m, const Element& v) {
  Element out(m.rows(), ring::zero(r));
  for (std::size_t a = 0; a < m.rows(); ++a)
    for (std::size_t b = 0; b < m.cols(); ++b)
      if (!m.entry_is_zero(a, b) && !ring::is_zero(v[b]))
        out[a] = ring::add(r, out[a], ring::mul(r, m.at(a, b), v[b]));
  return out;
}

inline Element slice_of(const Element& v, std::size_t off, std::size_t n) {
  return Element(v.begin() + static_cast<std::ptrdiff_t>(off),
                 v.begin() + static_cast<std::ptrdiff_t>(off + n));
}

inline Element negated(const RingSpec& r, Element v) {
  for (auto& x : v) x = ring::neg(r, x);
  return v;
}

}  // namespace detail

/// F(L) = Hom_A(P, L) as a left B^op-module: u * f = (-1)^{|u||f|} f o u.
inline ModuleView hom_module(const DGAlgebra& b, const FreeComplex& l) {
  const FreeComplex& p = b.base();
  FreeComplex h = hom_complex(p, l);
  return {h, [&b, p, l](int i, const Element& u, int k, const Element& f) {
            GradedMap um = b.to_map(i, u);
            GradedMap fm = detail::hom_to_map(p, l, k, f);
            GradedMap out;
            for (const auto& [s, ub] : um) {
              auto it = fm.find(s + i);
              if (it == fm.end()) continue;
              out[s] = rmat::multiply(p.ring(), it->second, ub);
            }
            Element v = detail::map_to_hom(p, l, i + k, out);
            return (i * k) % 2 != 0 ? detail::negated(p.ring(), std::move(v)) : v;
          }};
}

/// Action Leibniz rule d(u x) = d(u) x + (-1)^|u| u d(x) on basis elements.
inline bool check_module(const AlgebraView& b, const ModuleView& m) {
  const auto& r = m.complex.ring();
  auto basis = [&](std::size_t n, std::size_t s) {
    Element e(n, ring::zero(r));
    e[s] = ring::one(r);
    return e;
  };
  auto add = [&](Element a, const Element& c, int sign) {
    for (std::size_t t = 0; t < a.size(); ++t) a[t] = ring::add(r, a[t], ring::scale(r, c[t], sign));
    return a;
  };
  for (auto [i, ri] : b.complex.ranks())
    for (auto [k, rk] : m.complex.ranks()) {
      const std::size_t rt = m.complex.rank(i + k + 1);
      if (rt == 0) continue;
      for (std::size_t s = 0; s < ri; ++s)
        for (std::size_t a = 0; a < rk; ++a) {
          Element u = basis(ri, s), x = basis(rk, a);
          Element ux = m.act(i, u, k, x);
          Element lhs = m.complex.rank(i + k) ? detail::apply_matrix(r, m.complex.d(i + k), ux)
                                              : Element(rt, ring::zero(r));
          Element rhs(rt, ring::zero(r));
          if (b.complex.rank(i + 1))
            rhs = add(rhs, m.act(i + 1, detail::apply_matrix(r, b.complex.d(i), u), k, x), 1);
          if (m.complex.rank(k + 1))
            rhs = add(rhs, m.act(i, u, k + 1, detail::apply_matrix(r, m.complex.d(k), x)),
                      detail::sign_of(i));
          if (!(lhs == rhs)) return false;
        }
    }
  return true;
}

/// Projections onto the connected components of P (basis vectors linked by
/// a nonzero differential entry). Empty when P is connected or B does not
/// contain them.
inline std::vector<Element> component_idempotents(const DGAlgebra& b) {
  const FreeComplex& p = b.base();
  std::vector<std::size_t> parent(p.total_rank());
  for (std::size_t t = 0; t < parent.size(); ++t) parent[t] = t;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (auto [k, rk] : p.ranks()) {
    if (p.d_is_zero(k)) continue;
    const RMatrix& d = p.d(k);
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j)
        if (!d.entry_is_zero(i, j))
          parent[find(b.global_offset(k + 1) + i)] = find(b.global_offset(k) + j);
  }
  std::map<std::size_t, std::vector<std::size_t>> comps;
  for (std::size_t t = 0; t < parent.size(); ++t) comps[find(t)].push_back(t);
  if (comps.size() < 2) return {};
  std::vector<Element> out;
  try {
    for (const auto& [root, members] : comps) {
      GradedMap m;
      for (auto [k, rk] : p.ranks()) {
        RMatrix e(p.ring(), rk, rk);
        for (std::size_t t : members)
          if (t >= b.global_offset(k) && t < b.global_offset(k) + rk)
            e.set(t - b.global_offset(k), t - b.global_offset(k), ring::one(p.ring()));
        m[k] = std::move(e);
      }
      out.push_back(b.from_map(0, m));
    }
  } catch (const Error&) {
    return {};
  }
  return out;
}

struct Cell {
  int degree = 0;
  unsigned level = 0;
  /// Idempotent e in B^0 with x = e x (a summand B e of B); empty: free cell.
  Element idem;
  /// dx = sum beta x_c' over earlier cells c', beta in B^{degree + 1 - e_c'}
  /// in full coordinates.
  std::vector<std::pair<std::size_t, Element>> boundary;
  /// pi(x) in e N^{degree}.
  Element image;
};

class SemiFreeResolution {
 public:
  using Candidate = std::tuple<int, std::vector<Int>, Element>;

  SemiFreeResolution(AlgebraView b, ModuleView n) : b_(std::move(b)), n_(std::move(n)) {}

  const AlgebraView& algebra() const noexcept { return b_; }
  const ModuleView& module() const noexcept { return n_; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  const RingSpec& ring() const { return n_.complex.ring(); }
  /// True once cone(pi) became acyclic: Q is then an honest resolution.
  bool terminated() const noexcept { return terminated_; }
  unsigned levels() const noexcept { return levels_; }

  /// A complete set of orthogonal idempotent cycles of B^0 acting diagonally;
  /// candidate classes are split along it and cells become B e x.
  void set_idempotents(std::vector<Element> e) { idems_ = std::move(e); }
  /// Chooses cells by set cover instead of in order: slower per level, fewer
  /// cells when one class generates the others.
  void set_cover(bool on) { cover_ = on; }

  /// Number of cells with level <= n.
  std::size_t cells_up_to(unsigned n) const {
    std::size_t m = 0;
    while (m < cells_.size() && cells_[m].level <= n) ++m;
    return m;
  }

  /// Free seed cells for the given cocycles of N, attached before level 0.
  void seed(const std::vector<std::pair<int, Element>>& gens) {
    for (const auto& [k, v] : gens) {
      Cell c;
      c.degree = k;
      c.image = v;
      push(std::move(c));
    }
  }

  /// Builds levels until `max_level` (inclusive) or termination.
  void build(unsigned max_level) {
    for (unsigned lvl = levels_; lvl <= max_level && !terminated_; ++lvl) {
      FreeComplex c = cone(augmentation(cells_.size()));
      std::vector<Candidate> cand;
      // top degree first: B^{<0} multiples of a cell reach lower degrees
      for (auto it = c.ranks().rbegin(); it != c.ranks().rend(); ++it) {
        const int k = it->first;
        auto h = cohomology_at(c, k);
        for (auto& g : h.ring_generators()) {
          if (idems_.empty()) {
            cand.emplace_back(k, std::move(g), Element{});
            continue;
          }
          for (const auto& e : idems_) {
            auto w = to_scalar_vector(ring(), act_on_cone(k, e, to_ring_vector(ring(), g)));
            if (!h.represents_zero(w)) cand.emplace_back(k, std::move(w), e);
          }
        }
      }
      levels_ = lvl + 1;
      if (cand.empty()) {
        terminated_ = true;
        break;
      }
      if (cover_) {
        // attach first the class whose cell kills the most remaining classes
        while (!cand.empty()) {
          std::size_t best = 0, best_kills = 0;
          std::vector<bool> best_dead;
          for (std::size_t t = 0; t < cand.size(); ++t) {
            attach(lvl, cand[t]);
            auto dead = dead_classes(cand);
            pop();
            auto kills = static_cast<std::size_t>(std::count(dead.begin(), dead.end(), true));
            if (kills > best_kills) {
              best = t;
              best_kills = kills;
              best_dead = std::move(dead);
            }
          }
          if (best_kills == 0) fail(ErrorCode::inconclusive, "cell attachment did not kill its class");
          attach(lvl, cand[best]);
          std::vector<Candidate> rest;
          for (std::size_t t = 0; t < cand.size(); ++t)
            if (!best_dead[t]) rest.push_back(std::move(cand[t]));
          cand = std::move(rest);
        }
      } else {
        const std::size_t first = cells_.size();
        for (auto& cd : cand) {
          if (cells_.size() > first) {
            std::vector<Candidate> one{cd};
            if (dead_classes(one)[0]) continue;
          }
          attach(lvl, cd);
        }
      }
    }
  }

  /// Kept basis indices of B^i for cell c (those with u e_c = u).
  const std::vector<std::size_t>& kept(std::size_t c, int i) const {
    static const std::vector<std::size_t> none;
    auto it = kept_[c].find(i);
    return it == kept_[c].end() ? none : it->second;
  }

  /// Basis indices of M^j fixed by e_c; e_c has to act diagonally.
  std::vector<std::size_t> kept_in(const ModuleView& m, std::size_t c, int j) const {
    const std::size_t rj = m.complex.rank(j);
    std::vector<std::size_t> out;
    if (cells_[c].idem.empty()) {
      for (std::size_t a = 0; a < rj; ++a) out.push_back(a);
      return out;
    }
    for (std::size_t a = 0; a < rj; ++a) {
      Element ea = unit_vector(rj, a);
      Element w = m.act(0, cells_[c].idem, j, ea);
      if (w == ea)
        out.push_back(a);
      else if (!is_zero_vector(w))
        fail(ErrorCode::inconclusive, "cell idempotent does not act diagonally");
    }
    return out;
  }

  Element expand(std::size_t c, int i, const Element& k) const {
    Element out(b_.complex.rank(i), ring::zero(ring()));
    const auto& idx = kept(c, i);
    for (std::size_t t = 0; t < idx.size(); ++t) out[idx[t]] = k[t];
    return out;
  }

  Element restrict_to(std::size_t c, int i, const Element& full) const {
    Element out;
    for (std::size_t s : kept(c, i)) out.push_back(full[s]);
    return out;
  }

  /// Q restricted to the first m cells, as a complex over A. Basis in degree
  /// k: cells in order, then the kept basis of B^{k - e_c}.
  FreeComplex q_complex(std::size_t m) const {
    const auto& r = ring();
    std::map<int, std::size_t> ranks;
    for (std::size_t c = 0; c < m; ++c)
      for (const auto& [i, idx] : kept_[c])
        if (!idx.empty()) ranks[i + cells_[c].degree] += idx.size();
    std::map<int, RMatrix> diffs;
    for (auto [k, rk] : ranks) {
      if (!ranks.count(k + 1)) continue;
      RMatrix d(r, ranks[k + 1], rk);
      auto src = q_offsets(m, k), dst = q_offsets(m, k + 1);
      for (auto [c, so] : src) {
        const Cell& cell = cells_[c];
        const int i = k - cell.degree;
        const auto& idx = kept(c, i);
        for (std::size_t t = 0; t < idx.size(); ++t) {
          Element u = unit_vector(b_.complex.rank(i), idx[t]);
          const std::size_t col = so + t;
          if (b_.complex.rank(i + 1) && dst.count(c)) {
            Element du = restrict_to(c, i + 1, detail::apply_matrix(r, b_.complex.d(i), u));
            for (std::size_t z = 0; z < du.size(); ++z) d.set(dst.at(c) + z, col, du[z]);
          }
          for (const auto& [cp, beta] : cell.boundary) {
            const int bdeg = cell.degree + 1 - cells_[cp].degree;
            const int pdeg = i + bdeg;
            if (!dst.count(cp) || b_.complex.rank(pdeg) == 0) continue;
            Element ub = restrict_to(cp, pdeg, b_.mul(i, u, bdeg, beta));
            const int sign = detail::sign_of(i);
            for (std::size_t z = 0; z < ub.size(); ++z)
              if (!ring::is_zero(ub[z]))
                d.set(dst.at(cp) + z, col,
                      ring::add(r, d.at(dst.at(cp) + z, col), ring::scale(r, ub[z], sign)));
          }
        }
      }
      diffs[k] = std::move(d);
    }
    return FreeComplex(r, ranks, std::move(diffs));
  }

  ChainMap augmentation(std::size_t m) const {
    const auto& r = ring();
    FreeComplex q = q_complex(m);
    std::map<int, RMatrix> comps;
    for (auto [k, rk] : q.ranks()) {
      const std::size_t rn = n_.complex.rank(k);
      if (rn == 0) continue;
      RMatrix f(r, rn, rk);
      for (auto [c, o] : q_offsets(m, k)) {
        const int i = k - cells_[c].degree;
        const auto& idx = kept(c, i);
        for (std::size_t t = 0; t < idx.size(); ++t) {
          Element v = n_.act(i, unit_vector(b_.complex.rank(i), idx[t]), cells_[c].degree,
                             cells_[c].image);
          for (std::size_t z = 0; z < rn; ++z) f.set(z, o + t, v[z]);
        }
      }
      comps[k] = std::move(f);
    }
    return ChainMap(q, n_.complex, std::move(comps));
  }

  /// Offsets of each cell's block in Q_m^k (cells with a nonzero block).
  std::map<std::size_t, std::size_t> q_offsets(std::size_t m, int k) const {
    std::map<std::size_t, std::size_t> out;
    std::size_t pos = 0;
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t n = kept(c, k - cells_[c].degree).size();
      if (n == 0) continue;
      out[c] = pos;
      pos += n;
    }
    return out;
  }

  /// b q for b in B^i and q in Q_m^k (kept coordinates).
  Element left_multiply(std::size_t m, int i, const Element& b, int k, const Element& q) const {
    auto src = q_offsets(m, k), dst = q_offsets(m, k + i);
    std::size_t total = 0;
    for (std::size_t c = 0; c < m; ++c) total += kept(c, k + i - cells_[c].degree).size();
    Element out(total, ring::zero(ring()));
    for (auto [c, o] : src) {
      if (!dst.count(c)) continue;
      const int w = k - cells_[c].degree;
      Element z = expand(c, w, detail::slice_of(q, o, kept(c, w).size()));
      Element bz = restrict_to(c, w + i, b_.mul(i, b, w, z));
      for (std::size_t t = 0; t < bz.size(); ++t) out[dst.at(c) + t] = bz[t];
    }
    return out;
  }

  /// Hom_B(Q_m, M) over A. Basis in degree d: cells in order, then the basis
  /// of e_c M^{e_c + d}.
  FreeComplex hom_into(const ModuleView& target, std::size_t m) const {
    const auto& r = ring();
    const FreeComplex& mc = target.complex;
    std::map<std::pair<std::size_t, int>, std::vector<std::size_t>> keep;
    auto kp = [&](std::size_t c, int j) -> const std::vector<std::size_t>& {
      auto key = std::make_pair(c, j);
      auto it = keep.find(key);
      if (it == keep.end()) it = keep.emplace(key, kept_in(target, c, j)).first;
      return it->second;
    };
    std::map<int, std::size_t> ranks;
    for (std::size_t c = 0; c < m; ++c)
      for (auto [j, rj] : mc.ranks())
        if (!kp(c, j).empty()) ranks[j - cells_[c].degree] += kp(c, j).size();
    std::map<int, RMatrix> diffs;
    for (auto [d, rd] : ranks) {
      if (!ranks.count(d + 1)) continue;
      RMatrix mat(r, ranks[d + 1], rd);
      auto src = hom_offsets_cells(target, m, d), dst = hom_offsets_cells(target, m, d + 1);
      for (auto [c, co] : dst) {
        const Cell& cell = cells_[c];
        const auto& rows = kp(c, cell.degree + d + 1);
        // d_M f(x_c)
        if (src.count(c) && !mc.d_is_zero(cell.degree + d)) {
          const auto& cols = kp(c, cell.degree + d);
          const RMatrix& dm = mc.d(cell.degree + d);
          for (std::size_t y = 0; y < rows.size(); ++y)
            for (std::size_t x = 0; x < cols.size(); ++x)
              mat.set(co + y, src.at(c) + x, dm.at(rows[y], cols[x]));
        }
        for (const auto& [cp, beta] : cell.boundary) {
          if (!src.count(cp)) continue;
          const int bdeg = cell.degree + 1 - cells_[cp].degree;
          const int jdeg = cells_[cp].degree + d;
          const auto& cols = kp(cp, jdeg);
          const int sign = -detail::sign_of(d) * detail::sign_of(static_cast<long>(d) * bdeg);
          for (std::size_t x = 0; x < cols.size(); ++x) {
            Element v = target.act(bdeg, beta, jdeg, unit_vector(mc.rank(jdeg), cols[x]));
            for (std::size_t y = 0; y < rows.size(); ++y) {
              const RingElem& e = v[rows[y]];
              if (ring::is_zero(e)) continue;
              RingElem cur = mat.at(co + y, src.at(cp) + x);
              mat.set(co + y, src.at(cp) + x, ring::add(r, cur, ring::scale(r, e, sign)));
            }
          }
        }
      }
      diffs[d] = std::move(mat);
    }
    return FreeComplex(r, ranks, std::move(diffs));
  }

  std::map<std::size_t, std::size_t> hom_offsets_cells(const ModuleView& target, std::size_t m,
                                                       int d) const {
    std::map<std::size_t, std::size_t> out;
    std::size_t pos = 0;
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t n = kept_in(target, c, cells_[c].degree + d).size();
      if (n == 0) continue;
      out[c] = pos;
      pos += n;
    }
    return out;
  }

  /// Restriction Hom_B(Q_m, M) -> Hom_B(Q_m', M) for m' <= m: a prefix.
  ChainMap restriction(const ModuleView& target, std::size_t m, std::size_t m_small) const {
    FreeComplex big = hom_into(target, m), small = hom_into(target, m_small);
    std::map<int, RMatrix> comps;
    for (auto [d, rd] : small.ranks()) {
      RMatrix f(ring(), rd, big.rank(d));
      for (std::size_t t = 0; t < rd; ++t) f.set(t, t, ring::one(ring()));
      comps[d] = std::move(f);
    }
    return ChainMap(big, small, std::move(comps));
  }

  /// For a right module N (given as a left B^op-module) and the left
  /// B-module P: Q_m (x)_B P with basis cells in order, then e_c P^{k - e_c},
  /// and d(x_c (x) p) = sum (-1)^{|beta| e_c'} x_c' (x) beta p
  /// + (-1)^{e_c} x_c (x) dp.
  FreeComplex tensor_with(const ModuleView& p, std::size_t m) const {
    const auto& r = ring();
    const FreeComplex& pc = p.complex;
    std::map<int, std::size_t> ranks;
    for (std::size_t c = 0; c < m; ++c)
      for (auto [j, rj] : pc.ranks()) {
        const std::size_t n = kept_in(p, c, j).size();
        if (n) ranks[j + cells_[c].degree] += n;
      }
    std::map<int, RMatrix> diffs;
    for (auto [k, rk] : ranks) {
      if (!ranks.count(k + 1)) continue;
      RMatrix mat(r, ranks[k + 1], rk);
      auto src = tensor_offsets_cells(p, m, k), dst = tensor_offsets_cells(p, m, k + 1);
      for (auto [c, so] : src) {
        const Cell& cell = cells_[c];
        const int j = k - cell.degree;
        const auto cols = kept_in(p, c, j);
        if (dst.count(c) && !pc.d_is_zero(j)) {
          const auto rows = kept_in(p, c, j + 1);
          const RMatrix& dp = pc.d(j);
          const int sign = detail::sign_of(cell.degree);
          for (std::size_t y = 0; y < rows.size(); ++y)
            for (std::size_t x = 0; x < cols.size(); ++x)
              mat.set(dst.at(c) + y, so + x, ring::scale(r, dp.at(rows[y], cols[x]), sign));
        }
        for (const auto& [cp, beta] : cell.boundary) {
          if (!dst.count(cp)) continue;
          const int bdeg = cell.degree + 1 - cells_[cp].degree;
          const int sign = detail::sign_of(static_cast<long>(bdeg) * cells_[cp].degree);
          const auto rows = kept_in(p, cp, j + bdeg);
          for (std::size_t x = 0; x < cols.size(); ++x) {
            Element v = p.act(bdeg, beta, j, unit_vector(pc.rank(j), cols[x]));
            for (std::size_t y = 0; y < rows.size(); ++y) {
              const RingElem& e = v[rows[y]];
              if (ring::is_zero(e)) continue;
              RingElem cur = mat.at(dst.at(cp) + y, so + x);
              mat.set(dst.at(cp) + y, so + x, ring::add(r, cur, ring::scale(r, e, sign)));
            }
          }
        }
      }
      diffs[k] = std::move(mat);
    }
    return FreeComplex(r, ranks, std::move(diffs));
  }

  std::map<std::size_t, std::size_t> tensor_offsets_cells(const ModuleView& p, std::size_t m,
                                                          int k) const {
    std::map<std::size_t, std::size_t> out;
    std::size_t pos = 0;
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t n = kept_in(p, c, k - cells_[c].degree).size();
      if (n == 0) continue;
      out[c] = pos;
      pos += n;
    }
    return out;
  }

  Element unit_vector(std::size_t n, std::size_t s) const {
    Element e(n, ring::zero(ring()));
    e[s] = ring::one(ring());
    return e;
  }

 private:
  static bool is_zero_vector(const Element& v) {
    for (const auto& x : v)
      if (!ring::is_zero(x)) return false;
    return true;
  }

  /// e (p, q) on cone(pi)^k = N^k + Q^{k+1} for e in B^0.
  Element act_on_cone(int k, const Element& e, const Element& v) const {
    const std::size_t rn = n_.complex.rank(k);
    Element p(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(rn));
    Element q(v.begin() + static_cast<std::ptrdiff_t>(rn), v.end());
    Element out = rn ? n_.act(0, e, k, p) : Element{};
    Element eq = left_multiply(cells_.size(), 0, e, k + 1, q);
    out.insert(out.end(), eq.begin(), eq.end());
    return out;
  }

  /// Pads candidate vectors to the current cone and flags those that became
  /// coboundaries.
  std::vector<bool> dead_classes(std::vector<Candidate>& todo) const {
    FreeComplex cur = cone(augmentation(cells_.size()));
    std::map<int, PresentedModule> h;
    std::vector<bool> out;
    for (auto& [k, v, e] : todo) {
      v.resize(cur.rank(k) * ring().width(), 0);
      if (!h.count(k)) h.emplace(k, cohomology_at(cur, k));
      out.push_back(h.at(k).represents_zero(v));
    }
    return out;
  }

  void push(Cell cell) {
    std::map<int, std::vector<std::size_t>> keep;
    for (auto [i, ri] : b_.complex.ranks()) {
      auto& idx = keep[i];
      for (std::size_t s = 0; s < ri; ++s) {
        if (cell.idem.empty()) {
          idx.push_back(s);
          continue;
        }
        Element u = unit_vector(ri, s);
        Element w = b_.mul(i, u, 0, cell.idem);
        if (w == u)
          idx.push_back(s);
        else if (!is_zero_vector(w))
          fail(ErrorCode::inconclusive, "cell idempotent is not diagonal in B");
      }
    }
    kept_.push_back(std::move(keep));
    cells_.push_back(std::move(cell));
  }

  void pop() {
    cells_.pop_back();
    kept_.pop_back();
  }

  void attach(unsigned lvl, const Candidate& cd) {
    const auto& [k, scalar0, idem] = cd;
    const auto& r = ring();
    const std::size_t rn = n_.complex.rank(k);
    std::size_t rq = 0;
    for (std::size_t c = 0; c < cells_.size(); ++c) rq += kept(c, k + 1 - cells_[c].degree).size();
    std::vector<Int> scalar = scalar0;
    scalar.resize((rn + rq) * r.width(), 0);
    Element v = to_ring_vector(r, scalar);
    Cell cell;
    cell.degree = k;
    cell.level = lvl;
    cell.idem = idem;
    cell.image = detail::negated(r, Element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(rn)));
    for (auto [c, o] : q_offsets(cells_.size(), k + 1)) {
      const int i = k + 1 - cells_[c].degree;
      Element beta = expand(c, i, detail::slice_of(v, rn + o, kept(c, i).size()));
      if (!is_zero_vector(beta)) cell.boundary.emplace_back(c, std::move(beta));
    }
    push(std::move(cell));
  }

  AlgebraView b_;
  ModuleView n_;
  std::vector<Cell> cells_;
  std::vector<std::map<int, std::vector<std::size_t>>> kept_;
  std::vector<Element> idems_;
  unsigned levels_ = 0;
  bool terminated_ = false;
  bool cover_ = false;
};

}  // namespace ddc
