#pragma once

// F(L) = Hom_A(P, L) with its right B-action, G(N) = N (x)^L_B P through a
// semi-free resolution of N over B^op, the unit B -> Hom_A(P, G(B)), and the
// duality D = Hom_A(-, A[0]) over self-injective finite rings.

#include "ddc/centralizer.hpp"

#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace ddc {

namespace detail {

inline PresentedModule free_module(const RingSpec& r, std::size_t rank) {
  const std::size_t n = rank * r.width();
  return PresentedModule(r, n, Matrix<Int>::identity(n), Matrix<Int>(n, 0));
}

/// Componentwise bijective: every component is an isomorphism of free modules.
inline bool is_isomorphism(const ChainMap& f) {
  const auto& r = f.src().ring();
  std::map<int, bool> seen;
  for (auto [k, rk] : f.src().ranks()) seen[k] = true;
  for (auto [k, rk] : f.dst().ranks()) seen[k] = true;
  for (auto [k, unused] : seen) {
    const std::size_t a = f.src().rank(k), b = f.dst().rank(k);
    if (a != b) return false;
    if (a == 0) continue;
    if (!induced_map(f.at(k), free_module(r, a), free_module(r, b)).is_bijective()) return false;
  }
  return true;
}

inline std::map<int, PresentedModule> all_cohomology(const FreeComplex& x) {
  std::map<int, PresentedModule> out;
  for (auto [k, rk] : x.ranks()) out.emplace(k, cohomology_at(x, k));
  return out;
}

/// Identity of P in Hom_A(P, P)^0 coordinates.
inline Element identity_element(const FreeComplex& p) {
  GradedMap id;
  for (auto [k, rk] : p.ranks()) id[k] = RMatrix::identity(p.ring(), rk);
  return map_to_hom(p, p, 0, id);
}

}  // namespace detail

struct MoritaFReport {
  FreeComplex complex;
  bool action_checked = false;
  std::map<int, PresentedModule> cohomology;
  /// For L = P: the inclusion B -> F(P) is a quasi-isomorphism.
  std::optional<bool> iso_to_B;
};

inline MoritaFReport morita_F(const DGAlgebra& b, const FreeComplex& l) {
  if (!(b.ring() == l.ring())) fail(ErrorCode::ring_mismatch, "morita_F");
  const FreeComplex& p = b.base();
  MoritaFReport out;
  ModuleView f = hom_module(b, l);
  out.complex = f.complex;
  out.action_checked = check_module(opposite_view(b), f);
  out.cohomology = detail::all_cohomology(f.complex);
  if (l == p) {
    std::map<int, RMatrix> comps;
    for (auto [i, ri] : b.complex().ranks()) {
      RMatrix m(b.ring(), f.complex.rank(i), ri);
      for (std::size_t s = 0; s < ri; ++s) {
        Element v = detail::map_to_hom(p, p, i, b.to_map(i, b.basis(i, s)));
        for (std::size_t t = 0; t < v.size(); ++t) m.set(t, s, v[t]);
      }
      comps[i] = std::move(m);
    }
    out.iso_to_B = is_quasi_iso(ChainMap(b.complex(), f.complex, std::move(comps)));
  }
  return out;
}

struct MoritaGReport {
  unsigned level = 0;
  bool terminated = false;
  std::vector<std::size_t> cells;
  /// G truncated at the top level: Q_{<=N} (x)_B P.
  FreeComplex complex;
  /// stages[k][N] = H^k(Q_{<=N} (x)_B P).
  std::map<int, std::vector<PresentedModule>> stages;
  /// forward maps H^k(G_N) -> H^k(G_{N+1}) bijective over the last two steps.
  std::map<int, bool> stabilized;
  /// Evaluation Q (x)_B P -> L at the top level is a quasi-isomorphism.
  bool counit_quasi_iso = false;
  bool all_stabilized() const {
    for (const auto& [k, s] : stabilized)
      if (!s) return false;
    return true;
  }
};

/// G(F(L)) = Hom_A(P, L) (x)^L_B P truncated at `level`, with the counit
/// f (x) p -> f(p) to L. With `seed_unit` (needs L = P, i.e. N = B) the
/// resolution starts from the identity and terminates at once.
inline MoritaGReport morita_G(const DGAlgebra& b, const FreeComplex& l, unsigned level,
                              bool seed_unit = false) {
  if (!(b.ring() == l.ring())) fail(ErrorCode::ring_mismatch, "morita_G");
  if (level < 2) fail(ErrorCode::insufficient_truncation, "G needs at least two comparison levels");
  const FreeComplex& p = b.base();
  const auto& r = b.ring();
  ModuleView n = hom_module(b, l);
  SemiFreeResolution res(opposite_view(b), n);
  res.set_idempotents(component_idempotents(b));
  res.set_cover(true);
  if (seed_unit) {
    if (!(l == p)) fail(ErrorCode::invalid_comparison, "unit seed needs L = P");
    res.seed({{0, detail::identity_element(p)}});
  }
  res.build(level);
  MoritaGReport out;
  out.terminated = res.terminated();
  const unsigned top = out.terminated ? res.levels() - 1 : level;
  out.level = top;
  for (unsigned k = 0; k <= top; ++k) out.cells.push_back(res.cells_up_to(k));
  ModuleView pv = evaluation_module(b);
  std::vector<FreeComplex> gs;
  for (unsigned k = 0; k <= top; ++k) gs.push_back(res.tensor_with(pv, out.cells[k]));
  out.complex = gs.back();

  // inclusions G_N -> G_{N+1}: blocks are ordered by cell
  auto inclusion = [&](unsigned k) {
    std::map<int, RMatrix> comps;
    for (auto [d, rd] : gs[k].ranks()) {
      RMatrix m(r, gs[k + 1].rank(d), rd);
      for (std::size_t t = 0; t < rd; ++t) m.set(t, t, ring::one(r));
      comps[d] = std::move(m);
    }
    return ChainMap(gs[k], gs[k + 1], std::move(comps));
  };
  std::map<int, bool> degrees;
  for (const auto& g : gs)
    for (auto [d, rd] : g.ranks()) degrees[d] = true;
  for (auto [d, unused] : degrees) {
    auto& st = out.stages[d];
    for (const auto& g : gs) st.push_back(cohomology_at(g, d));
    bool ok = true;
    if (!out.terminated)
      for (unsigned k = top - 2; k < top && ok; ++k)
        ok = induced_map(inclusion(k).at(d), st[k], st[k + 1]).is_bijective();
    out.stabilized[d] = ok;
  }

  // counit: x_c (x) p -> pi(x_c)(p)
  const FreeComplex& g = out.complex;
  std::map<int, RMatrix> comps;
  for (auto [k, rk] : g.ranks()) {
    if (l.rank(k) == 0) continue;
    RMatrix m(r, l.rank(k), rk);
    auto off = res.tensor_offsets_cells(pv, out.cells.back(), k);
    for (auto [c, o] : off) {
      const Cell& cell = res.cells()[c];
      GradedMap f = detail::hom_to_map(p, l, cell.degree, cell.image);
      auto it = f.find(k - cell.degree);
      if (it == f.end()) continue;
      auto cols = res.kept_in(pv, c, k - cell.degree);
      for (std::size_t x = 0; x < cols.size(); ++x)
        for (std::size_t y = 0; y < l.rank(k); ++y) m.set(y, o + x, it->second.at(y, cols[x]));
    }
    comps[k] = std::move(m);
  }
  out.counit_quasi_iso = is_quasi_iso(ChainMap(g, l, std::move(comps)));
  return out;
}

struct MoritaUnitReport {
  bool chain_map = false;
  bool bijective = false;
  bool g_quasi_iso = false;  ///< G(B) -> P
};

/// eta_B : B -> Hom_A(P, B (x)_B P), b -> (p -> x_0 (x) b p).
inline MoritaUnitReport morita_unit_check(const DGAlgebra& b) {
  const FreeComplex& p = b.base();
  MoritaUnitReport out;
  MoritaGReport g = morita_G(b, p, 2, true);
  out.g_quasi_iso = g.terminated && g.counit_quasi_iso;
  FreeComplex h = hom_complex(p, g.complex);
  std::map<int, RMatrix> comps;
  for (auto [i, ri] : b.complex().ranks()) {
    RMatrix m(b.ring(), h.rank(i), ri);
    for (std::size_t s = 0; s < ri; ++s) {
      Element v = detail::map_to_hom(p, g.complex, i, b.to_map(i, b.basis(i, s)));
      for (std::size_t t = 0; t < v.size(); ++t) m.set(t, s, v[t]);
    }
    comps[i] = std::move(m);
  }
  try {
    ChainMap eta(b.complex(), h, std::move(comps));
    out.chain_map = true;
    out.bijective = detail::is_isomorphism(eta);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::not_a_chain_map) throw;
  }
  return out;
}

struct DualityReport {
  FreeComplex dual;    ///< D(M) = Hom_A(M, A[0])
  FreeComplex bidual;  ///< D(D(M))
  bool quasi_iso = false;
  std::map<int, PresentedModule> cohomology;
  std::map<int, PresentedModule> dual_cohomology;
};

/// D(M) and the biduality M -> D(D(M)), m -> (f -> (-1)^{|m||f|} f(m)).
inline DualityReport duality_D(const FreeComplex& m) {
  const auto& r = m.ring();
  if (!r.is_finite() || !r.is_self_injective())
    fail(ErrorCode::unsupported_ring, "duality needs a self-injective finite ring");
  FreeComplex a0 = FreeComplex::concentrated(r, 1);
  DualityReport out;
  out.dual = hom_complex(m, a0);
  out.bidual = hom_complex(out.dual, a0);
  // D(D(M))^k has the dual basis of the dual basis of M^k.
  std::map<int, RMatrix> comps;
  for (auto [k, rk] : m.ranks()) {
    RMatrix c = RMatrix::identity(r, rk);
    if (k % 2 != 0) c = rmat::negate(r, c);
    comps[k] = std::move(c);
  }
  ChainMap bd(m, out.bidual, std::move(comps));
  out.quasi_iso = is_quasi_iso(bd);
  out.cohomology = detail::all_cohomology(m);
  out.dual_cohomology = detail::all_cohomology(out.dual);
  return out;
}

}  // namespace ddc
