#pragma once

// Ext_B(P, P) for B = End_A(P) through truncations T_N = Hom_B(Q_{<=N}, P)
// of a semi-free resolution Q -> P, the degree-0 ring structure by lifting
// cocycles to Q, and the canonical map A -> Ext^0_B(P, P).
//
// The truncations form a tower of surjections T_{N+1} -> T_N. A degree d of
// the window is stabilized when the restrictions H^d(T_{N+1}) -> H^d(T_N)
// are bijective for the last `window` levels (value H^d(T_Nmax)), or when
// a composite of at most `window` restrictions out of the top level vanishes
// (value 0). Both make the tower Mittag-Leffler at d.

#include "ddc/semifree.hpp"
#include "ddc/torsion.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ddc {

struct ExtDegree {
  enum class Rule { none, bijective_window, vanishing_window, exact };

  int degree = 0;
  /// stages[N] = H^d(T_N).
  std::vector<PresentedModule> stages;
  /// restrictions[N - 1] : H^d(T_N) -> H^d(T_{N-1}).
  std::vector<InducedMap> restrictions;
  bool stabilized = false;
  Rule rule = Rule::none;
  std::optional<PresentedModule> value;

  std::string rule_name() const {
    switch (rule) {
      case Rule::bijective_window: return "bijective-window";
      case Rule::vanishing_window: return "vanishing-window";
      case Rule::exact: return "exact";
      case Rule::none: break;
    }
    return "none";
  }
};

/// Products of degree-0 classes: generators of H^0(T_N) restricted to
/// T_{N-1}, and their products there.
struct Degree0Ring {
  unsigned level = 0;
  PresentedModule target;  ///< H^0(T_{N-1})
  std::vector<std::vector<Int>> generators;
  /// products[g][h] = coordinates of gen_g * gen_h.
  std::vector<std::vector<std::vector<Int>>> products;
  std::vector<Int> unit;
};

struct CentralizerReport {
  enum class Grade { certified_bounded, certified_heuristic, undetermined };

  int lo = 0, hi = 0;
  unsigned max_level = 0;
  unsigned window = 3;
  bool terminated = false;
  std::shared_ptr<const DGAlgebra> algebra;
  std::shared_ptr<SemiFreeResolution> resolution;
  /// cells[N] = number of cells of level <= N.
  std::vector<std::size_t> cells;
  std::map<int, ExtDegree> degrees;
  std::optional<Degree0Ring> ring0;
  Grade grade = Grade::undetermined;

  std::string grade_name() const {
    switch (grade) {
      case Grade::certified_bounded: return "certified-bounded";
      case Grade::certified_heuristic: return "certified-heuristic";
      case Grade::undetermined: break;
    }
    return "undetermined";
  }
  unsigned top() const { return static_cast<unsigned>(cells.size() - 1); }
  FreeComplex truncation(unsigned n) const {
    return resolution->hom_into(resolution->module(), cells.at(n));
  }
};

/// Smallest admissible top level for a window: the truncation has to see
/// the window, the width of P and two comparison levels.
inline unsigned minimal_truncation(int lo, int hi, const FreeComplex& p) {
  return static_cast<unsigned>(hi - lo) + static_cast<unsigned>(p.width()) + 2;
}

namespace detail {

inline Element slice(const Element& v, std::size_t off, std::size_t n) {
  return Element(v.begin() + static_cast<std::ptrdiff_t>(off),
                 v.begin() + static_cast<std::ptrdiff_t>(off + n));
}

inline std::size_t hom_rank_cells(const SemiFreeResolution& res, std::size_t m) {
  std::size_t n = 0;
  for (std::size_t c = 0; c < m; ++c)
    n += res.kept_in(res.module(), c, res.cells()[c].degree).size();
  return n;
}

/// Embeds kept coordinates of e_c M^j into M^j.
inline Element embed(const SemiFreeResolution& res, std::size_t c, int j, const Element& v) {
  const auto& mc = res.module().complex;
  Element out(mc.rank(j), ring::zero(mc.ring()));
  auto idx = res.kept_in(res.module(), c, j);
  for (std::size_t t = 0; t < idx.size(); ++t) out[idx[t]] = v[t];
  return out;
}

/// Lifts a degree-0 element f of Hom_B(Q_big, P) along pi to f~ : Q_small ->
/// Q_big cell by cell and returns g o f~ in Hom_B(Q_small, P)^0.
inline Element lift_and_compose(const SemiFreeResolution& res, std::size_t big,
                                std::size_t small, const Element& f, const Element& g) {
  const auto& r = res.ring();
  const auto& cells = res.cells();
  const ModuleView& pm = res.module();
  const FreeComplex& p = pm.complex;
  FreeComplex q = res.q_complex(big);
  ChainMap pi = res.augmentation(big);
  auto hoff_big = res.hom_offsets_cells(pm, big, 0);
  auto hoff_small = res.hom_offsets_cells(pm, small, 0);
  std::vector<Element> y(small);  // f~(x_c) in Q_big^{e_c}

  for (std::size_t c = 0; c < small; ++c) {
    const int e = cells[c].degree;
    const std::size_t qe = q.rank(e), qe1 = q.rank(e + 1), pe = p.rank(e);
    Element rhs(qe1, ring::zero(r));
    for (const auto& [cp, beta] : cells[c].boundary) {
      if (y[cp].empty()) continue;
      Element bw = res.left_multiply(big, e + 1 - cells[cp].degree, beta, cells[cp].degree, y[cp]);
      for (std::size_t t = 0; t < bw.size(); ++t) rhs[t] = ring::add(r, rhs[t], bw[t]);
    }
    const std::size_t nk = res.kept_in(pm, c, e).size();
    Element fx = hoff_big.count(c) ? embed(res, c, e, slice(f, hoff_big.at(c), nk))
                                   : Element(pe, ring::zero(r));
    if (qe == 0) {
      bool ok = true;
      for (const auto& v : rhs) ok = ok && ring::is_zero(v);
      for (const auto& v : fx) ok = ok && ring::is_zero(v);
      if (!ok) fail(ErrorCode::inconclusive, "degree-0 lift does not exist at this truncation");
      continue;
    }
    RMatrix stack(r, qe1 + pe, qe);
    if (qe1) rmat::place(stack, q.d(e), 0, 0);
    if (pe) rmat::place(stack, pi.at(e), qe1, 0);
    Element target = rhs;
    target.insert(target.end(), fx.begin(), fx.end());
    auto tv = to_scalar_vector(r, target);
    Matrix<Int> tgt(tv.size(), 1);
    for (std::size_t t = 0; t < tv.size(); ++t) tgt(t, 0) = tv[t];
    auto sol = solve(r.scalars(), scalar_expand(r, stack), tgt);
    if (!sol) fail(ErrorCode::inconclusive, "degree-0 lift does not exist at this truncation");
    std::vector<Int> sv(sol->rows());
    for (std::size_t t = 0; t < sv.size(); ++t) sv[t] = (*sol)(t, 0);
    y[c] = to_ring_vector(r, sv);
    // x_c = e x_c, so the lift has to lie in e Q
    if (!cells[c].idem.empty()) y[c] = res.left_multiply(big, 0, cells[c].idem, e, y[c]);
  }

  Element out(hom_rank_cells(res, small), ring::zero(r));
  for (std::size_t c = 0; c < small; ++c) {
    if (!hoff_small.count(c) || y[c].empty()) continue;
    const int e = cells[c].degree;
    Element acc(p.rank(e), ring::zero(r));
    for (auto [cc, o] : res.q_offsets(big, e)) {
      const int wdeg = e - cells[cc].degree;
      if (!hoff_big.count(cc)) continue;
      const int ecc = cells[cc].degree;
      Element gx = embed(res, cc, ecc, slice(g, hoff_big.at(cc), res.kept_in(pm, cc, ecc).size()));
      Element w = res.expand(cc, wdeg, slice(y[c], o, res.kept(cc, wdeg).size()));
      Element v = pm.act(wdeg, w, ecc, gx);
      for (std::size_t t = 0; t < v.size(); ++t) acc[t] = ring::add(r, acc[t], v[t]);
    }
    auto idx = res.kept_in(pm, c, e);
    for (std::size_t t = 0; t < idx.size(); ++t) out[hoff_small.at(c) + t] = acc[idx[t]];
  }
  return out;
}

/// a . pi in Hom_B(Q_m, P)^0.
inline Element canonical_element(const SemiFreeResolution& res, std::size_t m, const RingElem& a) {
  const auto& r = res.ring();
  Element out;
  for (std::size_t c = 0; c < m; ++c) {
    const auto& img = res.cells()[c].image;
    for (std::size_t t : res.kept_in(res.module(), c, res.cells()[c].degree))
      out.push_back(ring::mul(r, a, img[t]));
  }
  return out;
}

inline Element column_element(const RingSpec& r, const Matrix<Int>& gens, std::size_t g) {
  std::vector<Int> v(gens.rows());
  for (std::size_t t = 0; t < v.size(); ++t) v[t] = gens(t, g);
  return to_ring_vector(r, v);
}

inline std::vector<Int> class_of(const PresentedModule& m, const Element& v) {
  auto c = m.coordinates(to_scalar_vector(m.ring(), v));
  if (!c) fail(ErrorCode::inconclusive, "element is not a cocycle of the truncation");
  return *c;
}

}  // namespace detail

/// Ext^d_B(P, P) for d in [lo, hi] with B = End_A(P), truncated at level
/// max_level.
inline CentralizerReport ext_over_B(std::shared_ptr<const DGAlgebra> b, int lo, int hi,
                                    unsigned max_level, unsigned window = 3) {
  if (lo > hi) fail(ErrorCode::bad_indices, "empty window");
  if (window < 1) fail(ErrorCode::bad_indices, "window must be >= 1");
  const FreeComplex& p = b->base();
  if (max_level < minimal_truncation(lo, hi, p))
    fail(ErrorCode::insufficient_truncation,
         "truncation level " + std::to_string(max_level) + " below " +
             std::to_string(minimal_truncation(lo, hi, p)) + " for this window");
  CentralizerReport rep;
  rep.lo = lo;
  rep.hi = hi;
  rep.max_level = max_level;
  rep.window = window;
  rep.algebra = b;
  rep.resolution = std::make_shared<SemiFreeResolution>(left_view(*b), evaluation_module(*b));
  auto& res = *rep.resolution;
  res.set_idempotents(component_idempotents(*b));
  res.build(max_level);
  rep.terminated = res.terminated();
  const unsigned top = rep.terminated ? res.levels() - 1 : max_level;
  for (unsigned n = 0; n <= top; ++n) rep.cells.push_back(res.cells_up_to(n));

  std::vector<FreeComplex> ts;
  for (unsigned n = 0; n <= top; ++n) ts.push_back(rep.truncation(n));
  std::vector<ChainMap> rs;
  for (unsigned n = 1; n <= top; ++n)
    rs.push_back(res.restriction(res.module(), rep.cells[n], rep.cells[n - 1]));

  bool all = true;
  for (int d = lo; d <= hi; ++d) {
    ExtDegree ed;
    ed.degree = d;
    for (unsigned n = 0; n <= top; ++n) ed.stages.push_back(cohomology_at(ts[n], d));
    for (unsigned n = 1; n <= top; ++n)
      ed.restrictions.push_back(
          induced_map(rs[n - 1].at(d), ed.stages[n], ed.stages[n - 1]));
    if (rep.terminated) {
      ed.stabilized = true;
      ed.rule = ExtDegree::Rule::exact;
      ed.value = ed.stages.back();
    } else {
      bool bij = top >= window;
      for (unsigned s = 0; bij && s < window; ++s) bij = ed.restrictions[top - 1 - s].is_bijective();
      if (bij) {
        ed.stabilized = true;
        ed.rule = ExtDegree::Rule::bijective_window;
        ed.value = ed.stages.back();
      } else {
        // composite H^d(T_top) -> H^d(T_{top-s})
        Matrix<Int> comp;
        for (unsigned s = 1; s <= window && s <= top && !ed.stabilized; ++s) {
          const auto& step = ed.restrictions[top - s].matrix;
          comp = s == 1 ? step : multiply(p.ring().scalars(), step, comp);
          bool zero = true;
          const auto& dst = ed.stages[top - s];
          for (std::size_t g = 0; g < comp.rows() && zero; ++g)
            for (std::size_t h = 0; h < comp.cols() && zero; ++h)
              zero = dst.reduce_mod_order(comp(g, h), dst.orders()[g]) == 0;
          if (zero) {
            ed.stabilized = true;
            ed.rule = ExtDegree::Rule::vanishing_window;
            ed.value = PresentedModule(p.ring(), 0, Matrix<Int>(0, 0), Matrix<Int>(0, 0));
          }
        }
      }
    }
    all = all && ed.stabilized;
    rep.degrees.emplace(d, std::move(ed));
  }
  rep.grade = rep.terminated ? CentralizerReport::Grade::certified_bounded
              : all          ? CentralizerReport::Grade::certified_heuristic
                             : CentralizerReport::Grade::undetermined;

  if (top >= 1 && lo <= 0 && hi >= 0) {
    Degree0Ring ring0;
    ring0.level = top;
    const std::size_t big = rep.cells[top], small = rep.cells[top - 1];
    PresentedModule hb = cohomology_at(ts[top], 0);
    ring0.target = cohomology_at(ts[top - 1], 0);
    const auto& r = p.ring();
    std::vector<Element> gens;
    for (std::size_t g = 0; g < hb.num_generators(); ++g)
      gens.push_back(detail::column_element(r, hb.generators(), g));
    const std::size_t ns = detail::hom_rank_cells(res, small);
    for (const auto& f : gens)
      ring0.generators.push_back(detail::class_of(ring0.target, detail::slice(f, 0, ns)));
    for (const auto& f : gens) {
      std::vector<std::vector<Int>> row;
      for (const auto& g : gens)
        row.push_back(detail::class_of(ring0.target, detail::lift_and_compose(res, big, small, g, f)));
      ring0.products.push_back(std::move(row));
    }
    ring0.unit = detail::class_of(ring0.target, detail::canonical_element(res, small, ring::one(r)));
    rep.ring0 = std::move(ring0);
  }
  return rep;
}

struct CanonicalMapCheck {
  unsigned level = 0;
  bool unital = false;
  bool multiplicative = false;
  /// Finite rings: A -> H^0(T_N) bijective.
  std::optional<bool> bijective;
  /// Over Z: A / a^i -> H^0(T_N) / a^i bijective for i = 1..precision.
  std::vector<PresentedModule> stage_quotients;
  std::vector<bool> stage_bijective;
  bool passed() const {
    bool ok = unital && multiplicative && bijective.value_or(true);
    for (bool s : stage_bijective) ok = ok && s;
    return ok && (bijective.has_value() || !stage_bijective.empty());
  }
};

/// a -> [a . pi] on the top truncation. Products are checked in the level
/// below, on the ring elements in `samples` (defaults to a scalar basis).
inline CanonicalMapCheck canonical_map_check(const CentralizerReport& rep, const Sequence& a,
                                             unsigned precision = 4) {
  const auto& res = *rep.resolution;
  const auto& r = res.ring();
  if (rep.top() < 1) fail(ErrorCode::insufficient_truncation, "canonical map needs two levels");
  CanonicalMapCheck out;
  out.level = rep.top();
  const std::size_t big = rep.cells[out.level], small = rep.cells[out.level - 1];
  FreeComplex tb = rep.truncation(out.level), ts = rep.truncation(out.level - 1);
  PresentedModule hb = cohomology_at(tb, 0), hs = cohomology_at(ts, 0);

  std::vector<RingElem> samples;
  if (r.kind == RingKind::integers) {
    for (long v : {1L, 2L, 3L, -5L}) samples.push_back(ring::from_int(r, v));
  } else if (r.kind == RingKind::truncated_poly) {
    for (std::size_t t = 0; t < r.width(); ++t) samples.push_back(ring::pow(r, ring::x(r), t));
  } else {
    samples.push_back(ring::one(r));
    if (r.cardinality() > 2) samples.push_back(ring::from_int(r, -1));
  }

  // scalar matrix of a -> a . pi over a scalar basis of A
  const std::size_t w = r.width();
  Matrix<Int> m(tb.rank(0) * w, w);
  for (std::size_t t = 0; t < w; ++t) {
    RingElem basis = r.kind == RingKind::truncated_poly ? ring::pow(r, ring::x(r), t) : ring::one(r);
    auto v = to_scalar_vector(r, detail::canonical_element(res, big, basis));
    for (std::size_t s = 0; s < v.size(); ++s) m(s, t) = v[s];
  }
  PresentedModule afree = quotient_module(r, 1, RMatrix(r, 1, 0));
  if (r.is_finite()) {
    out.bijective = induced_map(m, afree, hb).is_bijective();
  } else {
    auto la = lambda_module(r, a, afree, precision);
    auto lh = lambda_module(r, a, hb, precision);
    for (unsigned i = 0; i < precision; ++i) {
      out.stage_quotients.push_back(lh.tower[i]);
      out.stage_bijective.push_back(induced_map(m, la.tower[i], lh.tower[i]).is_bijective());
    }
  }

  Element pi = detail::canonical_element(res, big, ring::one(r));
  out.unital = true;
  for (std::size_t g = 0; g < hb.num_generators() && out.unital; ++g) {
    Element f = detail::column_element(r, hb.generators(), g);
    Element fs = detail::slice(f, 0, detail::hom_rank_cells(res, small));
    auto left = detail::lift_and_compose(res, big, small, f, pi);
    auto right = detail::lift_and_compose(res, big, small, pi, f);
    auto diff = [&](Element x) {
      for (std::size_t t = 0; t < x.size(); ++t) x[t] = ring::sub(r, x[t], fs[t]);
      return hs.represents_zero(to_scalar_vector(r, x));
    };
    out.unital = diff(left) && diff(right);
  }
  out.multiplicative = true;
  for (const auto& x : samples)
    for (const auto& y : samples) {
      if (!out.multiplicative) break;
      auto prod = detail::lift_and_compose(res, big, small, detail::canonical_element(res, big, x),
                                           detail::canonical_element(res, big, y));
      auto expect = detail::canonical_element(res, small, ring::mul(r, y, x));
      for (std::size_t t = 0; t < prod.size(); ++t) prod[t] = ring::sub(r, prod[t], expect[t]);
      out.multiplicative = hs.represents_zero(to_scalar_vector(r, prod));
    }
  return out;
}

}  // namespace ddc
