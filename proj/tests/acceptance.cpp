// One PASS/FAIL line per acceptance criterion. Time limits are pinned below;
// a criterion that finishes over its limit fails.

#include "ddc/cli.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace ddc;

namespace {

struct Case {
  RingSpec r;
  Sequence a;
};

Sequence seq(const RingSpec& r, std::initializer_list<long> v) {
  Sequence out;
  for (long x : v) out.push_back(ring::from_int(r, x));
  return out;
}

const RingSpec ZZ = RingSpec::integers();
const RingSpec Z4 = RingSpec::mod_integers(4);
const RingSpec Z12 = RingSpec::mod_integers(12);
const RingSpec F2X3 = RingSpec::truncated_poly(2, 3);

std::vector<Case> finite_suite() { return {{Z4, seq(Z4, {2})}, {Z12, seq(Z12, {6})}, {F2X3, {ring::x(F2X3)}}}; }

FreeComplex unit(const RingSpec& r, int deg = 0) { return FreeComplex::concentrated(r, 1, deg); }
FreeComplex doubled(const FreeComplex& m) { return direct_sum(m, shift(m, 1)); }

ChainMap first_projection(const FreeComplex& p, const FreeComplex& c) {
  FreeComplex s = direct_sum(p, c);
  std::map<int, RMatrix> comps;
  for (auto [k, rk] : s.ranks()) {
    RMatrix m(p.ring(), p.rank(k), rk);
    for (std::size_t i = 0; i < p.rank(k); ++i) m.set(i, i, ring::one(p.ring()));
    comps[k] = m;
  }
  return ChainMap(s, p, comps);
}

// -- criteria

bool koszul_basics(std::string& note) {
  std::vector<Case> suite = {{ZZ, seq(ZZ, {2})}, {ZZ, seq(ZZ, {2, 3})}, {Z4, seq(Z4, {2})},
                             {Z12, seq(Z12, {6})}, {F2X3, {ring::x(F2X3)}}};
  for (const auto& c : suite) {
    auto cmp = koszul_h0_comparison(c.r, c.a);
    if (!cmp.map.is_bijective() || cmp.h0.invariants() != cmp.quotient.invariants()) {
      note = c.r.name();
      return false;
    }
  }
  return true;
}

bool weak_proregularity(std::string& note) {
  for (const auto& c : std::vector<Case>{{Z4, seq(Z4, {2})}, {Z12, seq(Z12, {6})}}) {
    auto cert = wpr_certificate(c.r, c.a, 3, 12);
    if (cert.verdict != ProZeroCertificate::Verdict::certified || !reverify(c.r, cert)) return false;
    for (const auto& [k, list] : cert.witnesses)
      for (auto [i, j] : list)
        if (j - i != 2) {
          note = c.r.name() + " gap " + std::to_string(j - i);
          return false;
        }
  }
  for (const auto& a : {seq(ZZ, {2}), seq(ZZ, {2, 3})}) {
    auto cert = wpr_certificate(ZZ, a, 3, 12);
    if (cert.verdict != ProZeroCertificate::Verdict::certified) return false;
    for (const auto& [k, list] : cert.witnesses)
      for (auto [i, j] : list)
        if (i != j) return false;
  }
  return true;
}

bool derived_torsion(std::string& note) {
  auto rg = rgamma(Z4, seq(Z4, {2}), unit(Z4), 4);
  if (!rg.all_stabilized()) return false;
  for (const auto& d : rg.degrees) {
    if (d.degree == 0 ? d.value->invariants() != std::vector<Int>{4} : !d.value->is_zero()) {
      note = "Z/4 degree " + std::to_string(d.degree);
      return false;
    }
  }
  auto rz = rgamma(ZZ, seq(ZZ, {2}), unit(ZZ), 4);
  const auto* d1 = rz.at(1);
  if (!d1 || d1->stabilized || d1->stages.size() != 4) return false;
  for (unsigned i = 0; i < 4; ++i)
    if (d1->stages[i].invariants() != std::vector<Int>{Int(2) << i}) return false;
  for (const auto& f : d1->forward)
    if (!f.is_injective) return false;
  return true;
}

bool gm_instance(std::string&) {
  return gm_duality_check(Z4, seq(Z4, {2}), koszul(Z4, seq(Z4, {2})), 6).verdict &&
         gm_duality_check(ZZ, seq(ZZ, {2}), koszul(ZZ, seq(ZZ, {2})), 6).verdict;
}

bool mgm_round_trip(std::string& note) {
  for (const auto& c : finite_suite())
    for (const auto& x : {unit(c.r), koszul(c.r, c.a)}) {
      auto m = mgm_check(c.r, c.a, x, 6, 4);
      if (m.verdict != MgmReport::Verdict::pass) {
        note = c.r.name() + " " + m.verdict_name();
        return false;
      }
    }
  return true;
}

bool ext_algebra_consistency(std::string& note) {
  for (const auto& p : {unit(Z4), doubled(unit(Z4)), koszul(Z4, seq(Z4, {2}))}) {
    DGAlgebra b(p);
    auto h = cohomology_algebra(b);
    auto e = ext_algebra_A(p);
    if (!same_structure(h, e) || !h.check_laws()) {
      note = "rank " + std::to_string(p.total_rank());
      return false;
    }
  }
  return true;
}

bool resolution_independence(std::string&) {
  for (const auto& p : {unit(Z4), koszul(Z4, seq(Z4, {2}))})
    for (int s : {0, -1}) {
      auto c = shift(cone(ChainMap::identity(unit(Z4))), s);
      auto phi = first_projection(p, c);
      if (!compare_resolutions(p, phi.src(), phi).passed()) return false;
    }
  return true;
}

bool morita_checks(std::string& note) {
  std::vector<FreeComplex> ps;
  for (const auto& c : finite_suite()) {
    ps.push_back(unit(c.r));
    ps.push_back(doubled(unit(c.r)));
    ps.push_back(koszul(c.r, c.a));
  }
  ps.push_back(koszul(ZZ, seq(ZZ, {2})));
  for (const auto& p : ps) {
    DGAlgebra b(p);
    auto u = morita_unit_check(b);
    auto f = morita_F(b, p);
    if (!u.chain_map || !u.bijective || !u.g_quasi_iso || !f.iso_to_B.value_or(false)) {
      note = p.ring().name();
      return false;
    }
  }
  return true;
}

bool exact_case(const Case& c, const FreeComplex& p, std::string& note) {
  VerifyParams prm;
  prm.lo = -2;
  prm.hi = 2;
  prm.levels = 8;
  auto v = verify_main_theorem(c.r, c.a, p, prm);
  for (const auto& [d, e] : v.centralizer.degrees) {
    if (!e.stabilized || !e.value) return false;
    if (d != 0 && !e.value->is_zero()) {
      note = c.r.name() + " Ext^" + std::to_string(d);
      return false;
    }
  }
  const auto& e0 = *v.centralizer.degrees.at(0).value;
  bool ok = v.passed() && !v.flagged() && v.canonical.unital && v.canonical.multiplicative &&
            v.canonical.bijective.value_or(false) && e0.cardinality() == c.r.cardinality();
  if (!ok) note = c.r.name();
  return ok;
}

bool main_theorem_exact(std::string& note) {
  for (const auto& c : finite_suite())
    if (!exact_case(c, koszul(c.r, c.a), note)) return false;
  return true;
}

bool main_theorem_precision(std::string& note) {
  Sequence a = seq(ZZ, {2});
  VerifyParams prm;
  prm.precision = 4;
  auto v = verify_main_theorem(ZZ, a, koszul(ZZ, a), prm);
  if (!v.passed() || !v.limit_note || v.canonical_map != "stagewise") return false;
  const auto& q = v.canonical.stage_quotients;
  if (q.size() != 4) return false;
  for (unsigned i = 0; i < 4; ++i)
    if (q[i].invariants() != std::vector<Int>{Int(2) << i}) {
      note = "stage " + std::to_string(i + 1);
      return false;
    }
  for (int d : {-1, 1}) {
    const auto& e = v.centralizer.degrees.at(d);
    if (!e.stabilized || !e.value || !e.value->is_zero()) {
      note = "Ext^" + std::to_string(d);
      return false;
    }
  }
  return v.link("centralizer")->status == VerifyLink::Status::flagged;
}

bool generator_robustness(std::string& note) {
  for (const auto& c : finite_suite())
    if (!exact_case(c, doubled(koszul(c.r, c.a)), note)) return false;
  return true;
}

bool determinism(std::string& note) {
  const std::vector<std::string> problems = {
      R"({"ring":{"kind":"mod-integers","modulus":4},"sequence":[2],"module":{"kind":"koszul"}})",
      R"({"ring":{"kind":"mod-integers","modulus":12},"sequence":[6],"module":{"kind":"koszul"}})",
      R"({"ring":{"kind":"truncated-poly","p":2,"n":3},"sequence":[[0,1,0]],"module":{"kind":"koszul"}})",
      R"({"ring":{"kind":"integers"},"sequence":[2],"module":{"kind":"koszul"}})",
      R"({"ring":{"kind":"mod-integers","modulus":4},"sequence":[2],"module":{"kind":"augmented-koszul","shifts":[1]}})"};
  CommandFlags f;
  for (const auto& text : problems)
    for (const auto& cmd : command_names()) {
      auto first = render(run_command(cmd, parse_problem(text), f).report, false);
      auto second = render(run_command(cmd, parse_problem(text), f).report, false);
      if (first != second) {
        note = cmd;
        return false;
      }
    }
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> all = {
      {1, "koszul-basics", 1, koszul_basics},
      {2, "weak-proregularity", 1, weak_proregularity},
      {3, "derived-torsion", 1, derived_torsion},
      {4, "gm-duality", 5, gm_instance},
      {5, "mgm-round-trip", 5, mgm_round_trip},
      {6, "ext-algebra-consistency", 5, ext_algebra_consistency},
      {7, "resolution-independence", 10, resolution_independence},
      {8, "morita-checks", 10, morita_checks},
      {9, "main-theorem-exact", 180, main_theorem_exact},  // 60 s per ring
      {10, "main-theorem-precision", 120, main_theorem_precision},
      {11, "generator-robustness", 120, generator_robustness},
      {12, "determinism", 120, determinism},
  };
  int failed = 0;
  for (const auto& c : all) {
    std::string note;
    bool ok = false;
    auto t0 = std::chrono::steady_clock::now();
    try {
      ok = c.run(note);
    } catch (const std::exception& e) {
      note = e.what();
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && s > c.limit_s) {
      ok = false;
      note = "over time limit";
    }
    std::printf("%s %2d %-26s %8.3f s (limit %g s)%s%s\n", ok ? "PASS" : "FAIL", c.id, c.name, s,
                c.limit_s, note.empty() ? "" : "  ", note.c_str());
    if (!ok) ++failed;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
