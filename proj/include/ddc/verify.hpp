#pragma once

// The full chain for one (A, a, P): WPR, Ext_B(P) from the cell resolution,
// the completion, the transport through Ext_{B^op}(F(A)), the dual Koszul
// stages against the completion tower, GM duality and the canonical map.

#include "ddc/centralizer.hpp"
#include "ddc/koszul.hpp"
#include "ddc/morita.hpp"
#include "ddc/torsion.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ddc {

struct VerifyParams {
  int lo = -2, hi = 2;
  unsigned levels = 8;
  unsigned window = 3;
  unsigned precision = 4;
  unsigned wpr_depth = 3;
  unsigned wpr_horizon = 12;
  unsigned gm_stage = 6;
  /// Skip the WPR link and record it as assumed.
  bool assume_wpr = false;
};

struct VerifyLink {
  enum class Status { pass, fail, flagged };
  std::string name;
  Status status = Status::fail;
  std::string detail;

  std::string status_name() const {
    switch (status) {
      case Status::pass: return "pass";
      case Status::flagged: return "flagged";
      case Status::fail: break;
    }
    return "fail";
  }
};

struct VerifyReport {
  bool exact = true;  ///< finite ring; otherwise precision mode
  std::vector<VerifyLink> links;
  std::optional<ProZeroCertificate> wpr;
  CentralizerReport centralizer;
  CanonicalMapCheck canonical;
  CompletionResult completion;
  std::optional<PresentedModule> transport;  ///< H^0 Ext_{B^op}(F(A))
  std::optional<GmReport> gm;
  /// "bijective", "stagewise" (precision mode) or "failed".
  std::string canonical_map;
  std::optional<std::string> limit_note;

  bool passed() const {
    for (const auto& l : links)
      if (l.status == VerifyLink::Status::fail) return false;
    return true;
  }
  bool flagged() const {
    for (const auto& l : links)
      if (l.status == VerifyLink::Status::flagged) return true;
    return false;
  }
  const VerifyLink* link(const std::string& name) const {
    for (const auto& l : links)
      if (l.name == name) return &l;
    return nullptr;
  }
};

namespace detail {

inline std::string invariants_text(const PresentedModule& m) {
  std::string s = "[";
  for (const auto& x : m.invariants()) s += (s.size() > 1 ? "," : "") + x.str();
  return s + "]";
}

inline PresentedModule free_rank_one(const RingSpec& r) {
  const std::size_t n = r.width();
  return PresentedModule(r, n, Matrix<Int>::identity(n), Matrix<Int>(n, 0));
}

inline bool same_tower(const std::vector<PresentedModule>& x, const std::vector<PresentedModule>& y,
                       std::size_t n) {
  if (x.size() < n || y.size() < n) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (x[i].invariants() != y[i].invariants()) return false;
  return true;
}

}  // namespace detail

inline VerifyReport verify_main_theorem(const RingSpec& r, const Sequence& a, const FreeComplex& p,
                                        const VerifyParams& prm = {}) {
  if (!(p.ring() == r)) fail(ErrorCode::ring_mismatch, "verify");
  using S = VerifyLink::Status;
  VerifyReport rep;
  rep.exact = r.is_finite();

  // wpr
  if (prm.assume_wpr) {
    rep.links.push_back({"wpr", S::flagged, "assumed"});
  } else {
    rep.wpr = wpr_certificate(r, a, prm.wpr_depth, prm.wpr_horizon);
    bool ok = rep.wpr->verdict == ProZeroCertificate::Verdict::certified && reverify(r, *rep.wpr);
    rep.links.push_back({"wpr", ok ? S::pass : S::fail, rep.wpr->verdict_name()});
  }

  // Ext_B(P)
  auto b = std::make_shared<const DGAlgebra>(p);
  rep.centralizer = ext_over_B(b, prm.lo, prm.hi, prm.levels, prm.window);
  {
    bool off_zero = true, zero_ok = true;
    for (const auto& [d, e] : rep.centralizer.degrees) {
      if (d == 0)
        zero_ok = e.stabilized;
      else
        off_zero = off_zero && e.stabilized && e.value && e.value->is_zero();
    }
    std::string det = "grade " + rep.centralizer.grade_name();
    S st = off_zero ? S::pass : S::fail;
    if (off_zero && !zero_ok) {
      st = rep.exact ? S::fail : S::flagged;
      det += ", degree 0 not stabilized";
    }
    rep.links.push_back({"centralizer", st, det});
  }

  // completion of A
  rep.completion = lambda_module(r, a, detail::free_rank_one(r), prm.precision);
  const bool lam_exact = rep.completion.mode == CompletionResult::Mode::exact;
  rep.links.push_back({"completion", lam_exact ? S::pass : S::flagged, rep.completion.mode_name()});
  if (!rep.exact) rep.limit_note = "completion is not finitely presentable; reported through A / a^i";

  // transport: H^0 of Hom_{B^op}(Q, F(A)) for a cell resolution Q of F(A)
  {
    SemiFreeResolution res(opposite_view(*b), hom_module(*b, FreeComplex::concentrated(r, 1)));
    res.set_idempotents(component_idempotents(*b));
    res.set_cover(true);
    res.build(prm.precision);
    FreeComplex t = res.hom_into(res.module(), res.cells().size());
    rep.transport = cohomology_at(t, 0);
    bool ok;
    if (rep.exact) {
      ok = lam_exact && rep.transport->invariants() == rep.completion.value().invariants();
    } else {
      auto tw = lambda_module(r, a, *rep.transport, prm.precision);
      ok = detail::same_tower(tw.tower, rep.completion.tower, prm.precision);
    }
    rep.links.push_back({"transport", ok ? S::pass : S::fail,
                         "H^0 " + detail::invariants_text(*rep.transport)});
  }

  // Hom(K_dual(a^i), A) against A / a^i
  {
    bool ok = true;
    for (unsigned i = 1; i <= prm.precision && ok; ++i) {
      auto st = dual_koszul_stage(r, a, i);
      auto h = cohomology_at(hom_complex(st.complex, FreeComplex::concentrated(r, 1)), 0);
      const auto& lam = rep.completion.tower.at(std::min<std::size_t>(i, rep.completion.tower.size()) - 1);
      ok = h.invariants() == lam.invariants();
    }
    rep.links.push_back({"rgamma-hom", ok ? S::pass : S::fail,
                         "stages 1.." + std::to_string(prm.precision)});
  }

  // GM duality on P
  if (has_torsion_cohomology(r, a, p)) {
    rep.gm = gm_duality_check(r, a, p, prm.gm_stage, prm.window);
    rep.links.push_back({"gm", rep.gm->verdict ? S::pass : S::fail,
                         "stage " + std::to_string(prm.gm_stage)});
  } else {
    rep.links.push_back({"gm", S::flagged, "P has non-torsion cohomology"});
  }

  // canonical map
  rep.canonical = canonical_map_check(rep.centralizer, a, prm.precision);
  if (rep.exact) {
    const auto& e0 = rep.centralizer.degrees.count(0) ? rep.centralizer.degrees.at(0) : ExtDegree{};
    bool size_ok = e0.value && lam_exact &&
                   e0.value->cardinality() == rep.completion.value().cardinality() &&
                   e0.value->cardinality() == r.cardinality();
    bool ok = rep.canonical.passed() && size_ok;
    rep.canonical_map = ok ? "bijective" : "failed";
    rep.links.push_back({"canonical-map", ok ? S::pass : S::fail, rep.canonical_map});
  } else {
    bool ok = rep.canonical.passed() &&
              detail::same_tower(rep.canonical.stage_quotients, rep.completion.tower, prm.precision);
    rep.canonical_map = ok ? "stagewise" : "failed";
    rep.links.push_back({"canonical-map", ok ? S::flagged : S::fail,
                         rep.canonical_map + " to precision " + std::to_string(prm.precision)});
  }
  return rep;
}

}  // namespace ddc
