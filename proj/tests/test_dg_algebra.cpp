#include "ddc/dg_algebra.hpp"
#include "ddc/koszul.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace ddc;

namespace {

const RingSpec ZZ = RingSpec::integers();
const RingSpec Z4 = RingSpec::mod_integers(4);

FreeComplex unit(const RingSpec& r, int deg = 0) { return FreeComplex::concentrated(r, 1, deg); }

FreeComplex a_plus_a1(const RingSpec& r) { return direct_sum(unit(r), shift(unit(r), 1)); }

FreeComplex k4() { return koszul(Z4, {ring::from_int(Z4, 2)}); }

/// Projection P + C -> P onto the first summand.
ChainMap first_projection(const FreeComplex& p, const FreeComplex& c) {
  FreeComplex s = direct_sum(p, c);
  std::map<int, RMatrix> comps;
  for (auto [k, rk] : s.ranks()) {
    RMatrix m(p.ring(), p.rank(k), rk);
    for (std::size_t a = 0; a < p.rank(k); ++a) m.set(a, a, ring::one(p.ring()));
    comps[k] = m;
  }
  return ChainMap(s, p, comps);
}

// Brute-force oracle over Z/4: enumerate Hom^i, cocycles and coboundaries
// directly from the graded maps (no hom-complex flattening).
struct BruteDegree {
  std::set<std::vector<int>> cocycles, coboundaries;
};

std::vector<std::vector<int>> all_vectors(std::size_t n) {
  std::vector<std::vector<int>> out{{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<int>> next;
    for (auto& v : out)
      for (int x = 0; x < 4; ++x) {
        auto w = v;
        w.push_back(x);
        next.push_back(w);
      }
    out = next;
  }
  return out;
}

}  // namespace

TEST(DGAlgebra, EndOfRing) {
  auto [b, m] = end_dg_algebra(unit(ZZ));
  EXPECT_EQ(b.complex().rank(0), 1u);
  EXPECT_EQ(b.complex().ranks().size(), 1u);
  auto two = Element{ring::from_int(ZZ, 2)}, three = Element{ring::from_int(ZZ, 3)};
  EXPECT_EQ(b.multiply(0, two, 0, three), Element{ring::from_int(ZZ, 6)});
  EXPECT_TRUE(m.action_checked);
}

TEST(DGAlgebra, EndOfKoszul) {
  auto [b, m] = end_dg_algebra(k4());
  EXPECT_EQ(b.complex().rank(-1), 1u);
  EXPECT_EQ(b.complex().rank(0), 2u);
  EXPECT_EQ(b.complex().rank(1), 1u);
  EXPECT_TRUE(b.check_leibniz());
  EXPECT_TRUE(b.check_associativity());
  EXPECT_TRUE(b.check_action());
}

TEST(DGAlgebra, EndOfTwoTermSum) {
  auto [b, m] = end_dg_algebra(a_plus_a1(ZZ));
  EXPECT_EQ(b.complex().rank(0), 2u);
  EXPECT_EQ(b.complex().rank(1), 1u);
  EXPECT_EQ(b.complex().rank(-1), 1u);
  EXPECT_TRUE(b.check_leibniz());
  EXPECT_TRUE(b.check_associativity());
}

TEST(ExtAlgebra, Examples) {
  auto e = ext_algebra_A(unit(ZZ));
  EXPECT_EQ(e.at(0)->invariants(), std::vector<Int>{0});
  EXPECT_EQ(e.degrees.size(), 1u);
  auto s = ext_algebra_A(a_plus_a1(ZZ));
  EXPECT_EQ(s.at(0)->invariants(), (std::vector<Int>{0, 0}));
  EXPECT_EQ(s.at(1)->invariants(), std::vector<Int>{0});
  EXPECT_EQ(s.at(-1)->invariants(), std::vector<Int>{0});
  EXPECT_TRUE(s.check_laws());
}

TEST(ExtAlgebra, AgreesWithCohomologyOfEnd) {
  for (const auto& p : {unit(ZZ), a_plus_a1(ZZ), k4(), a_plus_a1(Z4)}) {
    auto [b, m] = end_dg_algebra(p);
    auto h = cohomology_algebra(b);
    auto e = ext_algebra_A(p);
    EXPECT_TRUE(same_structure(h, e));
    EXPECT_TRUE(e.check_laws());
  }
}

TEST(ExtAlgebra, KoszulOverZ4MatchesBruteForce) {
  auto p = k4();
  auto e = ext_algebra_A(p);
  // graded maps of degree i as explicit blocks; d f = d_P f - (-1)^i f d_P
  auto d = [&](int k) { return p.d(k); };
  auto apply_d = [&](int i, const std::vector<int>& f) {
    // f in Hom^i: blocks k = -1, 0 with f(x_k) in P^{k+i}; entries in degree order
    std::map<int, int> val;
    std::size_t pos = 0;
    for (int k = -1; k <= 0; ++k)
      if (p.rank(k + i)) val[k] = f[pos++];
    std::vector<int> out;
    for (int k = -1; k <= 0; ++k) {
      if (!p.rank(k + i + 1)) continue;
      int v = 0;
      // d_P f on x_k: f(x_k) in P^{k+i}, then d^{k+i}
      if (val.count(k) && p.rank(k + i + 1) && !p.d_is_zero(k + i))
        v += static_cast<int>(d(k + i).coeff(0, 0, 0)) * val[k];
      // f d_P on x_k: d^k x_k in P^{k+1}, then f
      if (val.count(k + 1) && p.rank(k + 1) && !p.d_is_zero(k))
        v -= ((i % 2 == 0) ? 1 : -1) * val[k + 1] * static_cast<int>(d(k).coeff(0, 0, 0));
      out.push_back(((v % 4) + 4) % 4);
    }
    return out;
  };
  for (int i = -1; i <= 1; ++i) {
    std::size_t n = hom_rank(p, p, i), n_prev = hom_rank(p, p, i - 1);
    std::set<std::vector<int>> cocycles, coboundaries;
    for (auto& f : all_vectors(n)) {
      auto df = apply_d(i, f);
      if (std::all_of(df.begin(), df.end(), [](int x) { return x == 0; })) cocycles.insert(f);
    }
    for (auto& g : all_vectors(n_prev)) coboundaries.insert(apply_d(i - 1, g));
    if (n_prev == 0) coboundaries = {std::vector<int>(n, 0)};
    std::size_t order = cocycles.size() / coboundaries.size();
    EXPECT_EQ(Int(order), *e.at(i)->cardinality()) << "degree " << i;
  }
  // structure constants: Ext^0 = End of the complex up to homotopy; the unit
  // acts as identity and products of degree -1 and 1 classes land in degree 0
  EXPECT_TRUE(e.check_laws());
}

TEST(Compare, IdentityComparison) {
  auto p = k4();
  auto rep = compare_resolutions(p, p, ChainMap::identity(p));
  EXPECT_TRUE(rep.passed());
  EXPECT_TRUE(rep.b_triangular.check_leibniz());
}

TEST(Compare, AcyclicSummands) {
  for (const auto& p : {unit(ZZ), k4()}) {
    const auto& r = p.ring();
    for (int s : {0, -1}) {
      auto c = cone(ChainMap::identity(unit(r, -s)));
      auto phi = first_projection(p, c);
      auto rep = compare_resolutions(p, phi.src(), phi);
      EXPECT_TRUE(rep.projection_quasi_iso);
      EXPECT_TRUE(rep.projection_prime_quasi_iso);
      EXPECT_TRUE(rep.kernel_acyclic);
      EXPECT_TRUE(rep.kernel_prime_acyclic);
      EXPECT_TRUE(rep.projections_multiplicative);
      EXPECT_TRUE(rep.invariants_match);
    }
  }
}

TEST(Compare, RejectsNonQuasiIso) {
  auto a = unit(ZZ);
  ChainMap two(a, a, {{0, RMatrix::from_ints(ZZ, 1, 1, {2})}});
  try {
    compare_resolutions(a, a, two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_comparison);
  }
}
