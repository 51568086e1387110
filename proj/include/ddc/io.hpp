#pragma once

// Problem files and JSON encodings. Rings, elements and complexes use the
// canonical encodings (residues in [0, m), coefficient vectors for
// F_p[x]/(x^n), differentials keyed by source degree). Output is always
// built from std::map-backed objects so key order is sorted.

#include "ddc/koszul.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

namespace ddc {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.3.0";

struct ModuleSpec {
  enum class Kind { koszul, koszul_power, ring, explicit_complex, augmented_koszul };
  Kind kind = Kind::koszul;
  unsigned power = 1;
  std::vector<int> shifts;
  FreeComplex complex;  ///< explicit only

  std::string kind_name() const {
    switch (kind) {
      case Kind::koszul: return "koszul";
      case Kind::koszul_power: return "koszul-power";
      case Kind::ring: return "ring";
      case Kind::explicit_complex: return "explicit";
      case Kind::augmented_koszul: return "augmented-koszul";
    }
    return "koszul";
  }
};

struct ProblemSpec {
  RingSpec ring;
  Sequence sequence;
  ModuleSpec module;
  std::string canonical;  ///< sorted, compact re-encoding of the input
  std::string digest;     ///< FNV-1a 64 of `canonical`, hex
};

namespace io {

inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Json int_json(const Int& v) {
  if (v >= Int(INT64_MIN) && v <= Int(INT64_MAX)) return static_cast<std::int64_t>(v);
  return v.str();
}

inline Json ints_json(const std::vector<Int>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(int_json(x));
  return a;
}

[[noreturn]] inline void fail_at(ErrorCode c, const std::string& path, const std::string& what) {
  fail(c, (path.empty() ? "/" : path) + ": " + what);
}

inline void only_fields(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail_at(ErrorCode::bad_json, path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) fail_at(ErrorCode::unknown_field, path + "/" + it.key(), "unknown field");
}

inline const Json& field(const Json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail_at(ErrorCode::bad_json, path + "/" + key, "missing field");
  return j.at(key);
}

inline Int to_int(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Int(j.get<std::uint64_t>());
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    bool ok = !s.empty();
    for (std::size_t i = 0; i < s.size(); ++i)
      ok = ok && (std::isdigit(static_cast<unsigned char>(s[i])) || (i == 0 && s[i] == '-' && s.size() > 1));
    if (ok) return Int(s);
  }
  fail_at(ErrorCode::bad_json, path, "expected an integer");
}

inline std::int64_t small_int(const Json& j, const std::string& path) {
  Int v = to_int(j, path);
  if (v < Int(INT32_MIN) || v > Int(INT32_MAX)) fail_at(ErrorCode::bad_json, path, "integer out of range");
  return static_cast<std::int64_t>(v);
}

// ---- rings and elements

inline RingSpec ring_from_json(const Json& j, const std::string& path = "/ring") {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    fail_at(ErrorCode::bad_ring, path, "ring needs a string \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "integers") {
      only_fields(j, path, {"kind"});
      return RingSpec::integers();
    }
    if (kind == "mod-integers") {
      only_fields(j, path, {"kind", "modulus"});
      return RingSpec::mod_integers(small_int(field(j, path, "modulus"), path + "/modulus"));
    }
    if (kind == "prime-field") {
      only_fields(j, path, {"kind", "p"});
      return RingSpec::prime_field(small_int(field(j, path, "p"), path + "/p"));
    }
    if (kind == "truncated-poly") {
      only_fields(j, path, {"kind", "p", "n"});
      auto p = small_int(field(j, path, "p"), path + "/p");
      auto n = small_int(field(j, path, "n"), path + "/n");
      if (n < 1 || n > 64) fail_at(ErrorCode::bad_ring, path + "/n", "n must be in 1..64");
      return RingSpec::truncated_poly(p, static_cast<int>(n));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::bad_ring) fail_at(ErrorCode::bad_ring, path, e.what());
    throw;
  }
  fail_at(ErrorCode::bad_ring, path + "/kind", "unknown ring kind \"" + kind + "\"");
}

inline Json ring_to_json(const RingSpec& r) {
  Json j;
  switch (r.kind) {
    case RingKind::integers: j["kind"] = "integers"; break;
    case RingKind::mod_integers: j["kind"] = "mod-integers"; j["modulus"] = r.modulus; break;
    case RingKind::prime_field: j["kind"] = "prime-field"; j["p"] = r.modulus; break;
    case RingKind::truncated_poly:
      j["kind"] = "truncated-poly";
      j["p"] = r.modulus;
      j["n"] = r.degree;
      break;
  }
  return j;
}

inline RingElem element_from_json(const RingSpec& r, const Json& j, const std::string& path) {
  RingElem e = ring::zero(r);
  if (r.kind == RingKind::truncated_poly) {
    if (!j.is_array() || j.size() != r.width())
      fail_at(ErrorCode::non_canonical, path,
              "expected " + std::to_string(r.width()) + " coefficients");
    for (std::size_t i = 0; i < j.size(); ++i) e.coeffs[i] = to_int(j[i], path + "/" + std::to_string(i));
  } else {
    e.coeffs[0] = to_int(j, path);
  }
  if (!ring::is_canonical(r, e)) fail_at(ErrorCode::non_canonical, path, "element is not a canonical residue");
  return e;
}

inline Json element_to_json(const RingSpec& r, const RingElem& e) {
  if (r.kind != RingKind::truncated_poly) return int_json(e.coeffs[0]);
  return ints_json(e.coeffs);
}

// ---- complexes

inline int degree_key(const std::string& k, const std::string& path) {
  try {
    std::size_t used = 0;
    int v = std::stoi(k, &used);
    if (used == k.size()) return v;
  } catch (const std::exception&) {
  }
  fail_at(ErrorCode::bad_json, path, "degree keys must be integers");
}

inline FreeComplex complex_from_json(const RingSpec& r, const Json& j, const std::string& path) {
  only_fields(j, path, {"kind", "ranks", "differentials"});
  std::map<int, std::size_t> ranks;
  const Json& rk = field(j, path, "ranks");
  if (!rk.is_object()) fail_at(ErrorCode::bad_json, path + "/ranks", "expected an object");
  for (auto it = rk.begin(); it != rk.end(); ++it) {
    auto v = small_int(it.value(), path + "/ranks/" + it.key());
    if (v < 0) fail_at(ErrorCode::bad_json, path + "/ranks/" + it.key(), "negative rank");
    ranks[degree_key(it.key(), path + "/ranks/" + it.key())] = static_cast<std::size_t>(v);
  }
  auto rank = [&](int k) { return ranks.count(k) ? ranks[k] : std::size_t{0}; };
  std::map<int, RMatrix> diffs;
  if (j.contains("differentials")) {
    const Json& ds = j.at("differentials");
    if (!ds.is_object()) fail_at(ErrorCode::bad_json, path + "/differentials", "expected an object");
    for (auto it = ds.begin(); it != ds.end(); ++it) {
      const std::string p = path + "/differentials/" + it.key();
      int k = degree_key(it.key(), p);
      const Json& rows = it.value();
      const std::size_t nr = rank(k + 1), nc = rank(k);
      if (!rows.is_array() || rows.size() != nr)
        fail_at(ErrorCode::malformed_input, p, "d^k needs rank(k+1) = " + std::to_string(nr) + " rows");
      RMatrix m(r, nr, nc);
      for (std::size_t a = 0; a < nr; ++a) {
        if (!rows[a].is_array() || rows[a].size() != nc)
          fail_at(ErrorCode::malformed_input, p + "/" + std::to_string(a),
                  "row needs rank(k) = " + std::to_string(nc) + " entries");
        for (std::size_t b = 0; b < nc; ++b)
          m.set(a, b, element_from_json(r, rows[a][b], p + "/" + std::to_string(a) + "/" + std::to_string(b)));
      }
      diffs[k] = std::move(m);
    }
  }
  try {
    return FreeComplex(r, ranks, std::move(diffs));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::not_a_complex) fail_at(ErrorCode::not_a_complex, path, e.what());
    throw;
  }
}

inline Json matrix_json(const RingSpec& r, const RMatrix& m) {
  Json rows = Json::array();
  for (std::size_t a = 0; a < m.rows(); ++a) {
    Json row = Json::array();
    for (std::size_t b = 0; b < m.cols(); ++b) row.push_back(element_to_json(r, m.at(a, b)));
    rows.push_back(row);
  }
  return rows;
}

inline Json complex_to_json(const FreeComplex& x) {
  Json j;
  j["ranks"] = Json::object();
  j["differentials"] = Json::object();
  for (auto [k, rk] : x.ranks()) {
    j["ranks"][std::to_string(k)] = rk;
    if (x.rank(k + 1)) j["differentials"][std::to_string(k)] = matrix_json(x.ring(), x.d(k));
  }
  return j;
}

inline Json module_json(const PresentedModule& m) {
  Json j;
  j["invariants"] = ints_json(m.invariants());
  j["description"] = m.describe();
  if (auto c = m.cardinality()) j["cardinality"] = int_json(*c);
  return j;
}

inline Json map_json(const InducedMap& f) {
  Json j;
  j["zero"] = f.is_zero;
  j["injective"] = f.is_injective;
  j["surjective"] = f.is_surjective;
  return j;
}

}  // namespace io

/// The module P described by a problem.
inline FreeComplex build_module(const ProblemSpec& s) {
  const auto& r = s.ring;
  switch (s.module.kind) {
    case ModuleSpec::Kind::koszul: return koszul(r, s.sequence);
    case ModuleSpec::Kind::koszul_power: return koszul(r, power(r, s.sequence, s.module.power));
    case ModuleSpec::Kind::ring: return FreeComplex::concentrated(r, 1);
    case ModuleSpec::Kind::explicit_complex: return s.module.complex;
    case ModuleSpec::Kind::augmented_koszul: {
      FreeComplex k = koszul(r, s.sequence);
      FreeComplex out = k;
      for (int sh : s.module.shifts) out = direct_sum(out, shift(k, sh));
      return out;
    }
  }
  return koszul(r, s.sequence);
}

inline ProblemSpec parse_problem(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::bad_json, "byte " + std::to_string(e.byte) + ": malformed JSON");
  }
  io::only_fields(j, "", {"ring", "sequence", "module"});
  ProblemSpec s;
  s.ring = io::ring_from_json(io::field(j, "", "ring"));
  const Json& seq = io::field(j, "", "sequence");
  if (!seq.is_array()) io::fail_at(ErrorCode::bad_json, "/sequence", "expected an array");
  for (std::size_t i = 0; i < seq.size(); ++i)
    s.sequence.push_back(io::element_from_json(s.ring, seq[i], "/sequence/" + std::to_string(i)));

  Json mod = j.contains("module") ? j.at("module") : Json{{"kind", "koszul"}};
  if (!mod.is_object() || !mod.contains("kind") || !mod.at("kind").is_string())
    io::fail_at(ErrorCode::bad_json, "/module", "module needs a string \"kind\"");
  const std::string kind = mod.at("kind").get<std::string>();
  if (kind == "koszul") {
    io::only_fields(mod, "/module", {"kind"});
    s.module.kind = ModuleSpec::Kind::koszul;
  } else if (kind == "koszul-power") {
    io::only_fields(mod, "/module", {"kind", "i"});
    auto i = io::small_int(io::field(mod, "/module", "i"), "/module/i");
    if (i < 1) io::fail_at(ErrorCode::bad_indices, "/module/i", "i must be >= 1");
    s.module.kind = ModuleSpec::Kind::koszul_power;
    s.module.power = static_cast<unsigned>(i);
  } else if (kind == "ring") {
    io::only_fields(mod, "/module", {"kind"});
    s.module.kind = ModuleSpec::Kind::ring;
  } else if (kind == "explicit") {
    s.module.kind = ModuleSpec::Kind::explicit_complex;
    s.module.complex = io::complex_from_json(s.ring, mod, "/module");
  } else if (kind == "augmented-koszul") {
    io::only_fields(mod, "/module", {"kind", "shifts"});
    const Json& sh = io::field(mod, "/module", "shifts");
    if (!sh.is_array()) io::fail_at(ErrorCode::bad_json, "/module/shifts", "expected an array");
    s.module.kind = ModuleSpec::Kind::augmented_koszul;
    for (std::size_t i = 0; i < sh.size(); ++i) {
      auto v = io::small_int(sh[i], "/module/shifts/" + std::to_string(i));
      if (v < -64 || v > 64) io::fail_at(ErrorCode::bad_indices, "/module/shifts", "shift out of range");
      s.module.shifts.push_back(static_cast<int>(v));
    }
  } else {
    io::fail_at(ErrorCode::bad_json, "/module/kind", "unknown module kind \"" + kind + "\"");
  }

  // canonical re-encoding for the digest
  Json c;
  c["ring"] = io::ring_to_json(s.ring);
  c["sequence"] = Json::array();
  for (const auto& a : s.sequence) c["sequence"].push_back(io::element_to_json(s.ring, a));
  Json m;
  m["kind"] = s.module.kind_name();
  if (s.module.kind == ModuleSpec::Kind::koszul_power) m["i"] = s.module.power;
  if (s.module.kind == ModuleSpec::Kind::augmented_koszul) m["shifts"] = s.module.shifts;
  if (s.module.kind == ModuleSpec::Kind::explicit_complex) {
    Json e = io::complex_to_json(s.module.complex);
    m["ranks"] = e["ranks"];
    m["differentials"] = e["differentials"];
  }
  c["module"] = m;
  s.canonical = c.dump();
  s.digest = io::fnv1a_hex(s.canonical);
  return s;
}

}  // namespace ddc
