#include "ddc/module.hpp"

#include <gtest/gtest.h>

using namespace ddc;

namespace {

Matrix<Int> mat(std::size_t r, std::size_t c, std::vector<long> v) {
  Matrix<Int> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = v[i * c + j];
  return m;
}

}  // namespace

TEST(Smith, IntegerExample) {
  auto sf = snf(ScalarRing{0}, mat(2, 2, {2, 4, 6, 8}), true);
  ASSERT_EQ(sf.diagonal.size(), 2u);
  EXPECT_EQ(sf.diagonal[0], 2);
  EXPECT_EQ(sf.diagonal[1], 4);
  auto d = multiply(ScalarRing{0}, multiply(ScalarRing{0}, sf.u, mat(2, 2, {2, 4, 6, 8})), sf.v);
  EXPECT_EQ(d, mat(2, 2, {2, 0, 0, 4}));
}

TEST(Smith, ModularTransformsReproduceDiagonal) {
  ScalarRing z12{12};
  auto m = mat(3, 3, {4, 6, 3, 8, 0, 9, 2, 2, 10});
  auto sf = snf(z12, m, true);
  auto d = multiply(z12, multiply(z12, sf.u, m), sf.v);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) {
        EXPECT_TRUE(d(i, j).is_zero());
      }
    }
  for (std::size_t i = 0; i + 1 < sf.diagonal.size(); ++i) {
    Int a = sf.diagonal[i] == 0 ? Int(12) : sf.diagonal[i];
    Int b = sf.diagonal[i + 1] == 0 ? Int(12) : sf.diagonal[i + 1];
    EXPECT_TRUE((b % a).is_zero());
  }
}

TEST(Module, IntegerSubquotient) {
  auto z = RingSpec::integers();
  PresentedModule m(z, 1, mat(1, 1, {1}), mat(1, 1, {2}));
  EXPECT_EQ(m.invariants(), std::vector<Int>{2});
  EXPECT_EQ(*m.cardinality(), 2);
}

TEST(Module, ModularSpan) {
  auto r = RingSpec::mod_integers(4);
  PresentedModule m(r, 1, mat(1, 1, {2}), Matrix<Int>());
  EXPECT_EQ(m.invariants(), std::vector<Int>{2});
  PresentedModule full(r, 1, mat(1, 1, {1}), Matrix<Int>());
  EXPECT_EQ(full.invariants(), std::vector<Int>{4});
}

TEST(Module, TimesTwoOnZ4) {
  auto r = RingSpec::mod_integers(4);
  PresentedModule full(r, 1, mat(1, 1, {1}), Matrix<Int>());
  auto f = induced_map(mat(1, 1, {2}), full, full);
  EXPECT_FALSE(f.is_zero);
  EXPECT_FALSE(f.is_bijective());
  auto g = induced_map(mat(1, 1, {3}), full, full);
  EXPECT_TRUE(g.is_bijective());
}

TEST(Module, ContainmentViolation) {
  auto z = RingSpec::integers();
  try {
    PresentedModule m(z, 1, mat(1, 1, {2}), mat(1, 1, {1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::containment_violation);
  }
}

TEST(Module, TruncatedPolyGenerators) {
  auto r = RingSpec::truncated_poly(2, 3);
  auto m = quotient_module(r, 1, RMatrix(r, 1, 0));
  EXPECT_EQ(m.num_generators(), 3u);
  EXPECT_EQ(m.ring_generators().size(), 1u);
}
