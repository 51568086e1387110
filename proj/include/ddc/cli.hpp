#pragma once

// Command dispatch for the ddc tool: every command returns a JSON report and
// an exit status (0 pass, 2 inconclusive, 1 error or failed check).

#include "ddc/io.hpp"
#include "ddc/verify.hpp"

#include <iomanip>
#include <sstream>
#include <string>

namespace ddc {

struct CommandFlags {
  unsigned depth = 3;
  unsigned horizon = 12;
  unsigned stage = 6;
  unsigned precision = 4;
  unsigned bar = 8;
  int lo = -2, hi = 2;
  unsigned window = 3;
  bool assume_wpr = false;
  std::uint64_t seed = 0;
  bool text = false;
};

struct CommandResult {
  Json report;
  int exit_code = 1;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"koszul", "wpr",         "rgamma", "llambda",
                                                 "ext",    "dgend",       "centralizer",
                                                 "morita", "mgm",         "gm",     "verify"};
  return names;
}

namespace cli {

enum class Status { pass, inconclusive, fail };

inline int exit_of(Status s) { return s == Status::pass ? 0 : s == Status::inconclusive ? 2 : 1; }
inline const char* status_name(Status s) {
  return s == Status::pass ? "pass" : s == Status::inconclusive ? "inconclusive" : "fail";
}

struct Outcome {
  Json result;
  Status status = Status::pass;
  std::string grade = "certified-bounded";
};

inline Json cohomology_json(const FreeComplex& x) {
  Json j = Json::object();
  for (auto [k, rk] : x.ranks()) j[std::to_string(k)] = io::module_json(cohomology_at(x, k));
  return j;
}

inline Json staged_json(const StagedColimit& s) {
  Json j = Json::object();
  for (const auto& d : s.degrees) {
    Json e;
    e["stages"] = Json::array();
    for (const auto& m : d.stages) e["stages"].push_back(io::module_json(m));
    e["forward"] = Json::array();
    for (const auto& f : d.forward) e["forward"].push_back(io::map_json(f));
    e["stabilized"] = d.stabilized;
    e["rule"] = d.rule_name();
    if (d.stabilized) e["stable_from"] = d.stable_from;
    if (d.value) e["value"] = io::module_json(*d.value);
    j[std::to_string(d.degree)] = e;
  }
  return j;
}

inline std::string staged_grade(const StagedColimit& s) {
  if (!s.all_stabilized()) return "undetermined";
  for (const auto& d : s.degrees)
    if (d.rule != StagedDegree::Rule::eventual_image) return "certified-heuristic";
  return "certified-bounded";
}

inline Json algebra_json(const GradedAlgebra& a) {
  Json j;
  j["degrees"] = Json::object();
  for (const auto& [i, m] : a.degrees) j["degrees"][std::to_string(i)] = io::module_json(m);
  j["unit"] = io::ints_json(a.unit);
  Json prods = Json::array();
  for (const auto& p : a.products) {
    Json t;
    t["i"] = p.i;
    t["j"] = p.j;
    Json tab = Json::array();
    for (const auto& row : p.table) {
      Json r = Json::array();
      for (const auto& v : row) r.push_back(io::ints_json(v));
      tab.push_back(r);
    }
    t["table"] = tab;
    prods.push_back(t);
  }
  j["products"] = prods;
  j["laws"] = a.check_laws();
  return j;
}

inline Outcome run_koszul(const ProblemSpec& s, const CommandFlags&) {
  Outcome o;
  FreeComplex k = koszul(s.ring, s.sequence);
  o.result["complex"] = io::complex_to_json(k);
  o.result["cohomology"] = cohomology_json(k);
  auto c = koszul_h0_comparison(s.ring, s.sequence);
  o.result["h0_vs_quotient"] = {{"h0", io::module_json(c.h0)},
                                {"quotient", io::module_json(c.quotient)},
                                {"map", io::map_json(c.map)}};
  if (!c.map.is_bijective()) o.status = Status::fail;
  return o;
}

inline Outcome run_wpr(const ProblemSpec& s, const CommandFlags& f) {
  Outcome o;
  auto cert = wpr_certificate(s.ring, s.sequence, f.depth, f.horizon);
  Json w = Json::object();
  for (const auto& [k, list] : cert.witnesses) {
    Json a = Json::array();
    for (auto [i, j] : list) a.push_back({i, j});
    w[std::to_string(k)] = a;
  }
  Json open = Json::array();
  for (auto [k, i] : cert.open) open.push_back({k, i});
  const bool re = reverify(s.ring, cert);
  o.result = {{"certificate", cert.verdict_name()}, {"depth", cert.depth},
              {"horizon", cert.horizon},            {"witnesses", w},
              {"open", open},                       {"reverified", re}};
  // regular sequences: every witness is the trivial pair (i, i)
  bool vac = true;
  for (const auto& [k, list] : cert.witnesses)
    for (auto [i, j] : list) vac = vac && i == j;
  o.result["vacuous"] = cert.verdict == ProZeroCertificate::Verdict::certified && vac;
  if (!re) o.status = Status::fail;
  else if (cert.verdict != ProZeroCertificate::Verdict::certified) o.status = Status::inconclusive;
  o.grade = cert.verdict == ProZeroCertificate::Verdict::certified ? "certified-bounded" : "undetermined";
  return o;
}

inline Outcome run_rgamma(const ProblemSpec& s, const CommandFlags& f) {
  Outcome o;
  auto rg = rgamma(s.ring, s.sequence, build_module(s), f.stage, f.window);
  o.result["stage"] = f.stage;
  if (rg.constant_from) o.result["constant_from"] = *rg.constant_from;
  o.result["degrees"] = staged_json(rg);
  if (!rg.all_stabilized()) o.status = Status::inconclusive;
  o.grade = staged_grade(rg);
  return o;
}

inline Outcome run_llambda(const ProblemSpec& s, const CommandFlags& f) {
  Outcome o;
  auto c = llambda(s.ring, s.sequence, build_module(s), f.precision);
  o.result["mode"] = c.mode_name();
  if (c.mode == CompletionResult::Mode::exact) o.result["stage"] = c.stage;
  o.result["nilpotent"] = c.nilpotent;
  if (c.value) o.result["value"] = io::complex_to_json(*c.value);
  Json t = Json::object();
  for (const auto& [k, tw] : c.tower) {
    Json a = Json::array();
    for (const auto& m : tw) a.push_back(io::module_json(m));
    t[std::to_string(k)] = a;
  }
  o.result["tower"] = t;
  if (c.mode != CompletionResult::Mode::exact) {
    o.status = Status::inconclusive;
    o.grade = "undetermined";
    o.result["note"] = "completion is not finitely presentable; tower reported to the given precision";
  }
  return o;
}

inline Outcome run_ext(const ProblemSpec& s, const CommandFlags&) {
  Outcome o;
  auto a = ext_algebra_A(build_module(s));
  o.result = algebra_json(a);
  if (!o.result["laws"].get<bool>()) o.status = Status::fail;
  return o;
}

inline Outcome run_dgend(const ProblemSpec& s, const CommandFlags&) {
  Outcome o;
  FreeComplex p = build_module(s);
  DGAlgebra b(p);
  Json ranks = Json::object();
  for (auto [i, ri] : b.complex().ranks()) ranks[std::to_string(i)] = ri;
  auto h = cohomology_algebra(b);
  auto e = ext_algebra_A(p);
  const bool leib = b.check_leibniz(), same = same_structure(h, e);
  o.result = {{"ranks", ranks}, {"leibniz", leib}, {"cohomology", algebra_json(h)},
              {"matches_ext_algebra", same}};
  if (!leib || !same) o.status = Status::fail;
  return o;
}

inline Outcome run_centralizer(const ProblemSpec& s, const CommandFlags& f) {
  Outcome o;
  auto b = std::make_shared<const DGAlgebra>(build_module(s));
  auto rep = ext_over_B(b, f.lo, f.hi, f.bar, f.window);
  o.result["window"] = {f.lo, f.hi};
  o.result["levels"] = rep.cells;
  o.result["terminated"] = rep.terminated;
  Json degs = Json::object();
  for (const auto& [d, e] : rep.degrees) {
    Json j;
    j["stabilized"] = e.stabilized;
    j["rule"] = e.rule_name();
    j["grade"] = e.rule == ExtDegree::Rule::exact ? "certified-bounded"
                 : e.stabilized                   ? "certified-heuristic"
                                                  : "undetermined";
    if (e.value) {
      j["invariants"] = io::ints_json(e.value->invariants());
      j["description"] = e.value->describe();
    }
    Json st = Json::array();
    for (const auto& m : e.stages) st.push_back(io::ints_json(m.invariants()));
    j["stages"] = st;
    degs[std::to_string(d)] = j;
  }
  o.result["degrees"] = degs;
  o.grade = rep.grade_name();
  if (rep.grade == CentralizerReport::Grade::undetermined) o.status = Status::inconclusive;
  if (rep.top() >= 1 && f.lo <= 0 && f.hi >= 0) {
    auto c = canonical_map_check(rep, s.sequence, f.precision);
    Json cm;
    cm["unital"] = c.unital;
    cm["multiplicative"] = c.multiplicative;
    if (c.bijective) {
      o.result["canonical_map"] = *c.bijective && c.passed() ? "bijective" : "not-bijective";
      if (!c.passed()) o.status = Status::fail;
    } else {
      o.result["canonical_map"] = c.passed() ? "stagewise" : "failed";
      Json q = Json::array();
      for (const auto& m : c.stage_quotients) q.push_back(io::ints_json(m.invariants()));
      cm["stage_quotients"] = q;
      cm["stage_bijective"] = c.stage_bijective;
      o.result["limit"] = "not finitely presentable";
      if (!c.passed()) o.status = Status::fail;
    }
    o.result["canonical_map_check"] = cm;
  }
  return o;
}

inline Outcome run_morita(const ProblemSpec& s, const CommandFlags& f) {
  Outcome o;
  FreeComplex p = build_module(s);
  DGAlgebra b(p);
  auto fr = morita_F(b, p);
  auto u = morita_unit_check(b);
  auto g = morita_G(b, p, std::max(2u, std::min(f.bar, 5u)));
  auto g0 = morita_G(b, FreeComplex(s.ring, {}, {}), 2);
  Json j;
  j["F"] = {{"action", fr.action_checked}, {"iso_to_B", fr.iso_to_B.value_or(false)}};
  j["unit"] = {{"chain_map", u.chain_map}, {"bijective", u.bijective}, {"G_of_B_quasi_iso", u.g_quasi_iso}};
  j["counit"] = {{"cells", g.cells}, {"terminated", g.terminated}, {"quasi_iso", g.counit_quasi_iso},
                 {"stabilized", g.all_stabilized()}};
  j["G_of_zero_rank"] = g0.complex.total_rank();
  bool ok = fr.action_checked && fr.iso_to_B.value_or(false) && u.chain_map && u.bijective &&
            u.g_quasi_iso && g.counit_quasi_iso && g0.complex.total_rank() == 0;
  if (s.ring.is_self_injective()) {
    auto d = duality_D(p);
    j["duality"] = {{"biduality_quasi_iso", d.quasi_iso}, {"dual", io::complex_to_json(d.dual)}};
    ok = ok && d.quasi_iso;
  } else {
    j["duality"] = "unsupported-ring";
  }
  o.result = j;
  if (!ok) o.status = Status::fail;
  else if (!g.terminated && !g.all_stabilized()) o.status = Status::inconclusive;
  return o;
}

inline Outcome run_mgm(const ProblemSpec& s, const CommandFlags& f) {
  Outcome o;
  auto m = mgm_check(s.ring, s.sequence, build_module(s), f.stage, f.precision, f.window);
  o.result["verdict"] = m.verdict_name();
  Json id = Json::object(), cc = Json::object();
  for (auto [k, v] : m.idempotence) id[std::to_string(k)] = v;
  for (auto [k, v] : m.completion_comparison) cc[std::to_string(k)] = v;
  o.result["idempotence"] = id;
  o.result["completion_comparison"] = cc;
  o.result["flagged"] = m.flagged;
  o.result["rgamma"] = staged_json(m.rgamma);
  o.result["completion_mode"] = m.completion.mode_name();
  if (!m.note.empty()) o.result["note"] = m.note;
  o.status = m.verdict == MgmReport::Verdict::pass   ? Status::pass
             : m.verdict == MgmReport::Verdict::fail ? Status::fail
                                                     : Status::inconclusive;
  o.grade = staged_grade(m.rgamma);
  return o;
}

inline Outcome run_gm(const ProblemSpec& s, const CommandFlags& f) {
  Outcome o;
  auto g = gm_duality_check(s.ring, s.sequence, build_module(s), f.stage, f.window);
  o.result["verdict"] = g.verdict;
  if (g.stable_from) o.result["stable_from"] = *g.stable_from;
  Json d = Json::object();
  for (const auto& x : g.degrees) {
    d[std::to_string(x.degree)] = {{"target", io::module_json(x.target)},
                                   {"stage_bijective", x.stage_bijective},
                                   {"stabilized", x.stabilized},
                                   {"colimit_bijective", x.colimit_bijective}};
  }
  o.result["degrees"] = d;
  o.result["staged"] = staged_json(g.staged);
  o.grade = staged_grade(g.staged);
  if (!g.staged.all_stabilized()) o.status = Status::inconclusive;
  else if (!g.verdict) o.status = Status::fail;
  return o;
}

inline Outcome run_verify(const ProblemSpec& s, const CommandFlags& f) {
  Outcome o;
  VerifyParams prm;
  prm.lo = f.lo;
  prm.hi = f.hi;
  prm.levels = f.bar;
  prm.window = f.window;
  prm.precision = f.precision;
  prm.wpr_depth = f.depth;
  prm.wpr_horizon = f.horizon;
  prm.gm_stage = f.stage;
  prm.assume_wpr = f.assume_wpr;
  auto v = verify_main_theorem(s.ring, s.sequence, build_module(s), prm);
  Json links = Json::array();
  for (const auto& l : v.links)
    links.push_back({{"link", l.name}, {"status", l.status_name()}, {"detail", l.detail}});
  o.result["links"] = links;
  o.result["mode"] = v.exact ? "exact" : "precision";
  o.result["canonical_map"] = v.canonical_map;
  Json degs = Json::object();
  for (const auto& [d, e] : v.centralizer.degrees) {
    Json j = {{"stabilized", e.stabilized}, {"rule", e.rule_name()}};
    if (e.value) j["invariants"] = io::ints_json(e.value->invariants());
    degs[std::to_string(d)] = j;
  }
  o.result["ext"] = degs;
  o.result["completion"] = io::module_json(v.completion.value());
  if (!v.exact) {
    Json q = Json::array();
    for (const auto& m : v.canonical.stage_quotients) q.push_back(io::ints_json(m.invariants()));
    o.result["stage_quotients"] = q;
  }
  if (v.limit_note) o.result["limit"] = *v.limit_note;
  o.grade = v.centralizer.grade_name();
  o.status = !v.passed() ? Status::fail : v.flagged() ? Status::inconclusive : Status::pass;
  return o;
}

inline Outcome dispatch(const std::string& cmd, const ProblemSpec& s, const CommandFlags& f) {
  if (cmd == "koszul") return run_koszul(s, f);
  if (cmd == "wpr") return run_wpr(s, f);
  if (cmd == "rgamma") return run_rgamma(s, f);
  if (cmd == "llambda") return run_llambda(s, f);
  if (cmd == "ext") return run_ext(s, f);
  if (cmd == "dgend") return run_dgend(s, f);
  if (cmd == "centralizer") return run_centralizer(s, f);
  if (cmd == "morita") return run_morita(s, f);
  if (cmd == "mgm") return run_mgm(s, f);
  if (cmd == "gm") return run_gm(s, f);
  if (cmd == "verify") return run_verify(s, f);
  fail(ErrorCode::malformed_input, "unknown command " + cmd);
}

inline Json params_json(const CommandFlags& f) {
  return {{"depth", f.depth},         {"horizon", f.horizon}, {"stage", f.stage},
          {"precision", f.precision}, {"bar", f.bar},         {"window", {f.lo, f.hi}},
          {"assume_wpr", f.assume_wpr}, {"seed", f.seed}};
}

inline void flatten(const Json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object() && !j.empty()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path + "." + it.key(), out);
  } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(path.empty() ? "." : path.substr(1), j.is_string() ? j.get<std::string>() : j.dump());
  }
}

}  // namespace cli

/// Runs one command on a parsed problem. Mathematical inconclusiveness
/// (including insufficient-truncation) gives exit 2; other errors exit 1.
inline CommandResult run_command(const std::string& cmd, const ProblemSpec& s, const CommandFlags& f) {
  CommandResult out;
  Json rep;
  rep["tool"] = "ddc";
  rep["version"] = kToolVersion;
  rep["command"] = cmd;
  rep["problem"] = {{"digest", s.digest}, {"ring", s.ring.name()}, {"module", s.module.kind_name()}};
  rep["params"] = cli::params_json(f);
  try {
    cli::Outcome o = cli::dispatch(cmd, s, f);
    rep["result"] = o.result;
    rep["grade"] = o.grade;
    rep["status"] = cli::status_name(o.status);
    out.exit_code = cli::exit_of(o.status);
  } catch (const Error& e) {
    const bool soft = e.code() == ErrorCode::insufficient_truncation || e.code() == ErrorCode::inconclusive;
    rep["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    rep["grade"] = "undetermined";
    rep["status"] = soft ? "inconclusive" : "error";
    out.exit_code = soft ? 2 : 1;
  }
  out.report = std::move(rep);
  return out;
}

inline std::string render(const Json& report, bool text) {
  if (!text) return report.dump(2) + "\n";
  std::vector<std::pair<std::string, std::string>> rows;
  cli::flatten(report, "", rows);
  std::size_t w = 0;
  for (const auto& [k, v] : rows) w = std::max(w, k.size());
  std::ostringstream os;
  for (const auto& [k, v] : rows) os << std::left << std::setw(static_cast<int>(w) + 2) << k << v << "\n";
  return os.str();
}

}  // namespace ddc
