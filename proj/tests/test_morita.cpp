#include "ddc/koszul.hpp"
#include "ddc/morita.hpp"

#include <gtest/gtest.h>

using namespace ddc;

namespace {

const RingSpec ZZ = RingSpec::integers();
const RingSpec Z4 = RingSpec::mod_integers(4);
const RingSpec F2X3 = RingSpec::truncated_poly(2, 3);

FreeComplex k4() { return koszul(Z4, {ring::from_int(Z4, 2)}); }

std::vector<FreeComplex> generators() {
  FreeComplex a = FreeComplex::concentrated(Z4, 1);
  return {a, direct_sum(a, shift(a, 1)), k4(), direct_sum(k4(), shift(k4(), 1)),
          koszul(F2X3, {ring::x(F2X3)}), koszul(ZZ, {ring::from_int(ZZ, 2)})};
}

}  // namespace

TEST(MoritaF, EndomorphismsOfGeneratorAreB) {
  for (const auto& p : generators()) {
    DGAlgebra b(p);
    auto f = morita_F(b, p);
    EXPECT_TRUE(f.action_checked);
    ASSERT_TRUE(f.iso_to_B);
    EXPECT_TRUE(*f.iso_to_B);
  }
}

TEST(MoritaF, ActionOnOtherTargets) {
  DGAlgebra b(k4());
  auto f = morita_F(b, FreeComplex::concentrated(Z4, 1));
  EXPECT_TRUE(f.action_checked);
  EXPECT_FALSE(f.iso_to_B);
  // Hom(K, A) = K^dual: cohomology Z/2 in degrees 0 and 1
  ASSERT_TRUE(f.cohomology.count(0));
  EXPECT_EQ(f.cohomology.at(0).invariants(), std::vector<Int>{2});
}

TEST(MoritaUnit, BijectiveOnSuite) {
  for (const auto& p : generators()) {
    DGAlgebra b(p);
    auto u = morita_unit_check(b);
    EXPECT_TRUE(u.chain_map);
    EXPECT_TRUE(u.bijective);
    EXPECT_TRUE(u.g_quasi_iso);
  }
}

TEST(MoritaG, CounitOnGenerator) {
  DGAlgebra b(k4());
  auto g = morita_G(b, k4(), 5);
  EXPECT_TRUE(g.counit_quasi_iso);
  EXPECT_TRUE(g.all_stabilized());
  // G(F(P)) has the cohomology of P
  for (const auto& [k, st] : g.stages) {
    auto hp = cohomology_at(k4(), k);
    EXPECT_EQ(st.back().invariants(), hp.invariants()) << k;
  }
}

TEST(MoritaG, ZeroGoesToZero) {
  DGAlgebra b(k4());
  auto g = morita_G(b, FreeComplex(Z4, {}, {}), 3);
  EXPECT_EQ(g.cells.back(), 0u);
  EXPECT_EQ(g.complex.total_rank(), 0u);
}

TEST(MoritaG, NeedsTwoLevels) {
  DGAlgebra b(k4());
  try {
    morita_G(b, k4(), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::insufficient_truncation);
  }
}

TEST(Duality, RegularModuleIsSelfDual) {
  auto d = duality_D(FreeComplex::concentrated(Z4, 1));
  EXPECT_TRUE(d.quasi_iso);
  ASSERT_TRUE(d.dual_cohomology.count(0));
  EXPECT_EQ(d.dual_cohomology.at(0).invariants(), std::vector<Int>{4});
}

TEST(Duality, BidualityOnKoszul) {
  for (const auto& p : {k4(), koszul(F2X3, {ring::x(F2X3)})}) {
    auto d = duality_D(p);
    EXPECT_TRUE(d.quasi_iso);
    // D negates degrees and keeps orders over a self-injective ring
    for (const auto& [k, h] : d.cohomology) {
      ASSERT_TRUE(d.dual_cohomology.count(-k));
      EXPECT_EQ(d.dual_cohomology.at(-k).cardinality(), h.cardinality());
    }
  }
}

TEST(Duality, IntegersUnsupported) {
  try {
    duality_D(koszul(ZZ, {ring::from_int(ZZ, 2)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unsupported_ring);
  }
}
