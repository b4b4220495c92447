#include <gtest/gtest.h>

#include <random>

#include "kadelic/lambda.hpp"

using namespace kadelic;

namespace {

RingPtr ring_with_x(long D = 8) {
  GroundRing::Spec s;
  s.novikov_count = 2;
  s.truncation_order = D;
  s.extra_generators = {{"x", 0, AdamsRule::family}, {"e", 2, AdamsRule::fixed}};
  return GroundRing::make(s);
}

LambdaElement random_element(const RingPtr& R, std::mt19937_64& g) {
  std::uniform_int_distribution<int> c(-3, 3), e(0, 2);
  LambdaElement Q1 = LambdaElement::novikov(R, 1), Q2 = LambdaElement::novikov(R, 2);
  LambdaElement h = LambdaElement::hbar(R), x = LambdaElement::variable(R, "x");
  LambdaElement acc(R, Cyclo(c(g)));
  for (int i = 0; i < 4; ++i)
    acc += Q1.pow(e(g)) * Q2.pow(e(g)) * h.pow(e(g)) * x.pow(e(g)) * Cyclo(make_rational(c(g), 1 + e(g)));
  return acc;
}

}  // namespace

TEST(Adams, SpecExamples) {
  auto R = default_ring(6);
  LambdaElement Q = LambdaElement::novikov(R, 1), h = LambdaElement::hbar(R);
  EXPECT_EQ(Q.pow(3).adams(2), Q.pow(6));
  EXPECT_EQ(h.adams(3).adams(2), h.adams(6));
  EXPECT_EQ(h.adams(6), h.pow(6));
  std::mt19937_64 g(3);
  auto R2 = ring_with_x();
  for (int i = 0; i < 10; ++i) {
    auto x = random_element(R2, g);
    EXPECT_EQ(x.adams(1), x);
  }
}

TEST(Adams, CompositionAndHomomorphism) {
  auto R = ring_with_x(10);
  std::mt19937_64 g(11);
  for (int i = 0; i < 25; ++i) {
    auto a = random_element(R, g).truncate(3), b = random_element(R, g).truncate(3);
    for (long r = 1; r <= 3; ++r) {
      EXPECT_EQ(a.adams(r) + b.adams(r), (a + b).adams(r));
      EXPECT_EQ(a.adams(r) * b.adams(r), (a * b).adams(r));
      for (long s = 1; s <= 3; ++s) EXPECT_EQ(a.adams(s).adams(r), a.adams(r * s));
    }
  }
}

TEST(Adams, CyclotomicScalarsAreFixed) {
  auto R = default_ring(6);
  LambdaElement z(R, root_of_unity(3, 1));
  EXPECT_EQ(z.adams(2), z);
  EXPECT_EQ((z * LambdaElement::novikov(R, 1)).adams(2), z * LambdaElement::novikov(R, 1).pow(2));
}

TEST(Adams, FamilyAndFixedGenerators) {
  auto R = ring_with_x(6);
  LambdaElement x = LambdaElement::variable(R, "x"), e = LambdaElement::variable(R, "e");
  EXPECT_EQ(x.adams(2), LambdaElement::variable(R, "x_2"));
  EXPECT_EQ(x.adams(2).adams(3), LambdaElement::variable(R, "x_6"));
  EXPECT_EQ(e.adams(5), e);
  EXPECT_TRUE(e.pow(2).is_zero());
}

TEST(Truncate, SpecExamples) {
  auto R = default_ring(6);
  LambdaElement Q = LambdaElement::novikov(R, 1);
  LambdaElement one(R, Cyclo(1));
  EXPECT_EQ((one + Q + Q * Q).truncate(1), one + Q);
  auto x = one + Q * Cyclo(3) + Q.pow(4);
  EXPECT_EQ(x.truncate(6), x);
  EXPECT_TRUE(Q.adams(3).truncate(2).is_zero());
  EXPECT_TRUE(Q.adams(3).truncate(2).truncated());
}

TEST(Truncate, AdamsBeyondOrderSetsFlag) {
  auto R = default_ring(4);
  LambdaElement Q = LambdaElement::novikov(R, 1);
  auto y = Q.pow(2).adams(3);
  EXPECT_TRUE(y.is_zero());
  EXPECT_TRUE(y.truncated());
}

TEST(IdealValuation, SpecExamples) {
  auto R = default_ring(6);
  LambdaElement Q = LambdaElement::novikov(R, 1), h = LambdaElement::hbar(R);
  EXPECT_EQ(ideal_valuation(LambdaElement(R, Cyclo(1)) + Q).value(), 0);
  EXPECT_EQ(ideal_valuation(Q * h).value(), 2);
  EXPECT_FALSE(ideal_valuation(LambdaElement(R, Cyclo(0))).has_value());
}

TEST(IdealValuation, AdamsRaisesFiltration) {
  auto R = ring_with_x(12);
  std::mt19937_64 g(5);
  for (int i = 0; i < 30; ++i) {
    auto x = random_element(R, g) - random_element(R, g).constant_term();
    x = x - LambdaElement(R, x.constant_term());
    auto v = x.ideal_valuation();
    if (!v) continue;
    for (long r = 1; r <= 5; ++r) {
      auto w = x.adams(r).ideal_valuation();
      if (w) EXPECT_GE(*w, r * *v);
    }
  }
  for (long r = 1; r <= 5; ++r)
    for (auto name : {"Q1", "Q2", "x"}) {
      auto w = LambdaElement::variable(R, name).adams(r).ideal_valuation();
      if (w) EXPECT_GE(*w, r);
    }
}

TEST(GroundRing, RejectsBadSpecs) {
  GroundRing::Spec s;
  s.truncation_order = 0;
  EXPECT_THROW(GroundRing::make(s), std::invalid_argument);
  s.truncation_order = 3;
  s.extra_generators = {{"y", 0}, {"y", 0}};
  EXPECT_THROW(GroundRing::make(s), std::invalid_argument);
}

TEST(LambdaElement, UnitsInvertAndNonUnitsDoNot) {
  auto R = default_ring(6);
  LambdaElement Q = LambdaElement::novikov(R, 1);
  LambdaElement u = LambdaElement(R, Cyclo(2)) + Q;
  EXPECT_EQ(u * u.inverse(), LambdaElement(R, Cyclo(1)));
  EXPECT_THROW(Q.inverse(), std::exception);
}
