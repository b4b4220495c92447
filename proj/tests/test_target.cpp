#include <gtest/gtest.h>

#include "kadelic/target.hpp"

using namespace kadelic;

namespace {

std::vector<TargetPtr> all_targets() { return {load_target("point"), load_target("p1"), load_target("p2")}; }

// Integral of exp(a omega) * v over P^n, v an omega-polynomial; independent of the model's tables.
Rational integrate_top(const std::vector<Rational>& v, long n) { return n < static_cast<long>(v.size()) ? v[n] : 0; }

std::vector<Rational> poly_mul(const std::vector<Rational>& a, const std::vector<Rational>& b, size_t len) {
  std::vector<Rational> c(len, Rational(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size() && i + j < len; ++j) c[i + j] += a[i] * b[j];
  return c;
}

std::vector<Rational> exp_poly(const Rational& a, size_t len) {
  std::vector<Rational> e(len);
  Rational term = 1;
  for (size_t i = 0; i < len; ++i) {
    e[i] = term;
    term = term * a / Rational(static_cast<long>(i + 1));
  }
  return e;
}

}  // namespace

TEST(Target, P1AdamsOfP) {
  auto p1 = load_target("p1");
  KClass P = KClass::basis(p1, 1), one = KClass::scalar(p1, LambdaElement(1));
  EXPECT_EQ(adams_k(2, P), P * P);
  EXPECT_EQ(P * P, P * Cyclo(2) - one);
  for (long r = 1; r <= 6; ++r) EXPECT_EQ(adams_k(r, one), one);
}

TEST(Target, ChDegreeScalesUnderAdams) {
  auto p1 = load_target("p1");
  KClass P = KClass::basis(p1, 1);
  EXPECT_EQ(ch(adams_k(3, P)).c[1], ch(P).c[1] * Cyclo(3));
  auto p2 = load_target("p2");
  for (size_t i = 0; i < 3; ++i)
    for (long r = 1; r <= 4; ++r) {
      HClass h = ch(KClass::basis(p2, i)), hr = ch(adams_k(r, KClass::basis(p2, i)));
      Rational rl = 1;
      for (long l = 0; l <= 2; ++l, rl *= r) EXPECT_EQ(hr.c[l], h.c[l] * Cyclo(rl));
    }
}

TEST(Target, ChIsMultiplicative) {
  for (auto& t : all_targets())
    for (size_t i = 0; i < t->rank(); ++i)
      for (size_t j = 0; j < t->rank(); ++j) {
        KClass a = KClass::basis(t, i), b = KClass::basis(t, j);
        EXPECT_EQ(ch(a * b), ch(a) * ch(b)) << t->name() << " " << i << " " << j;
      }
}

TEST(EulerClass, SpecExamples) {
  auto p1 = load_target("p1");
  EXPECT_TRUE(euler_class(line_bundle(p1, 0)).is_zero());
  EXPECT_EQ(euler_class(line_bundle(p1, 2)), KClass::scalar(p1, LambdaElement(1)) - line_bundle(p1, -2));
  KClass E = line_bundle(p1, 1), F = line_bundle(p1, 3);
  EXPECT_EQ(euler_class(p1, {E, F}), euler_class(E) * euler_class(F));
  EXPECT_EQ(euler_class(p1, {}), KClass::scalar(p1, LambdaElement(1)));
  EXPECT_THROW(euler_class(tangent_class(load_target("p2"))), std::invalid_argument);
}

TEST(EulerRatio, SpecExamples) {
  auto pt = load_target("point"), p1 = load_target("p1");
  for (long r = 1; r <= 6; ++r) {
    EXPECT_EQ(euler_ratio_class(pt, r), HClass::constant(0, LambdaElement(r)));
    EXPECT_EQ(euler_ratio_class(p1, r), HClass::from_rational(1, {Rational(1), Rational(r - 1)}));
  }
  for (auto& t : all_targets()) EXPECT_EQ(euler_ratio_class(t, 1), HClass::constant(t->dim(), LambdaElement(1)));
}

TEST(EulerRatio, P2AgainstChernRootOracle) {
  // T - 1 = 3 O(1) - 2: two trivial summands give r^2, each root contributes (1 - e^{-w})/(1 - e^{-r w})
  auto p2 = load_target("p2");
  for (long r = 1; r <= 5; ++r) {
    std::vector<Rational> num(4), den(4);
    for (size_t k = 1; k <= 3; ++k) {
      Rational f = 1;
      for (size_t i = 1; i <= k; ++i) f *= Rational(static_cast<long>(i));
      Rational sign = k % 2 ? 1 : -1;
      num[k - 1] = sign / f;
      Rational rk = 1;
      for (size_t i = 0; i < k; ++i) rk *= r;
      den[k - 1] = sign * rk / f;
    }
    // q = num/den as power series, both start at x^1
    std::vector<Rational> q(3);
    for (size_t i = 0; i < 3; ++i) {
      Rational s = num[i];
      for (size_t j = 0; j < i; ++j) s -= q[j] * den[i - j];
      q[i] = s / den[0];
    }
    std::vector<Rational> prod = poly_mul(poly_mul(q, q, 3), q, 3);
    for (auto& x : prod) x *= Rational(r * r);
    EXPECT_EQ(euler_ratio_class(p2, r), HClass::from_rational(2, prod)) << r;
  }
}

TEST(TwistedPair, SpecExamples) {
  auto pt = load_target("point"), p1 = load_target("p1");
  KClass a = KClass::scalar(pt, LambdaElement(3)), b = KClass::scalar(pt, LambdaElement(5));
  for (long r = 1; r <= 5; ++r) EXPECT_EQ(twisted_pair(r, a, b), LambdaElement(15 * r));
  KClass one = KClass::scalar(p1, LambdaElement(1)), P = KClass::basis(p1, 1);
  for (long r = 1; r <= 5; ++r) {
    EXPECT_EQ(twisted_pair(r, adams_k(r, one), adams_k(r, one)), LambdaElement(r));
    EXPECT_EQ(twisted_pair(r, adams_k(r, P), adams_k(r, one)), LambdaElement(0));
    EXPECT_EQ(poincare_pair(P, one), LambdaElement(0));
  }
}

TEST(TwistedPair, AdamsRiemannRochAllTargets) {
  auto R = default_ring(8);
  LambdaElement Q = LambdaElement::novikov(R, 1);
  for (auto& t : all_targets())
    for (long r = 1; r <= 5; ++r)
      for (size_t i = 0; i < t->rank(); ++i)
        for (size_t j = 0; j < t->rank(); ++j) {
          KClass A = KClass::basis(t, i, Q), B = KClass::basis(t, j);
          EXPECT_EQ(twisted_pair(r, adams_k(r, A), adams_k(r, B)), poincare_pair(A, B).adams(r) * Cyclo(r));
        }
}

TEST(Pairing, SymmetricIntegralAndMatchesIntegralOracle) {
  for (auto& t : all_targets()) {
    long n = t->dim();
    size_t len = static_cast<size_t>(n + 1);
    // td(P^n) = (w/(1-e^{-w}))^{n+1}, computed here from Bernoulli-free series division
    std::vector<Rational> x(len + 1), den(len + 1);
    for (size_t k = 0; k <= len; ++k) {
      Rational f = 1;
      for (size_t i = 1; i <= k + 1; ++i) f *= Rational(static_cast<long>(i));
      den[k] = (k % 2 ? Rational(-1) : Rational(1)) / f;  // (1 - e^{-w})/w
    }
    std::vector<Rational> inv(len);
    for (size_t i = 0; i < len; ++i) {
      Rational s = i == 0 ? Rational(1) : Rational(0);
      for (size_t j = 0; j < i; ++j) s -= inv[j] * den[i - j];
      inv[i] = s / den[0];
    }
    std::vector<Rational> td(len, Rational(0));
    td[0] = 1;
    for (long k = 0; k <= n; ++k) td = poly_mul(td, inv, len);
    for (size_t i = 0; i < t->rank(); ++i)
      for (size_t j = 0; j < t->rank(); ++j) {
        LambdaElement v = poincare_pair(KClass::basis(t, i), KClass::basis(t, j));
        EXPECT_EQ(v, poincare_pair(KClass::basis(t, j), KClass::basis(t, i)));
        ASSERT_TRUE(v.is_constant());
        Rational got = v.constant_term().rational();
        EXPECT_EQ(got.get_den(), 1);
        auto e = exp_poly(Rational(-static_cast<long>(i + j)), len);
        EXPECT_EQ(got, integrate_top(poly_mul(e, td, len), n)) << t->name() << i << j;
      }
  }
}

TEST(DualBasis, PairsToDelta) {
  for (auto& t : all_targets()) {
    auto d = dual_basis(t);
    for (size_t a = 0; a < t->rank(); ++a)
      for (size_t b = 0; b < t->rank(); ++b)
        EXPECT_EQ(poincare_pair(KClass::basis(t, a), d[b]), LambdaElement(a == b ? 1 : 0));
  }
  auto pt = load_target("point");
  EXPECT_EQ(dual_basis(pt)[0], KClass::scalar(pt, LambdaElement(1)));
}

TEST(DualBasis, CasimirIsSymmetric) {
  // sum_a phi_a (x) phi^a as a matrix in the basis is G^{-1}, which is symmetric
  for (auto& t : all_targets()) {
    auto& gi = t->gram_inverse();
    for (size_t a = 0; a < t->rank(); ++a)
      for (size_t b = 0; b < t->rank(); ++b) EXPECT_EQ(gi[a][b], gi[b][a]);
  }
}

TEST(Target, FileTargetsAndErrors) {
  nlohmann::json j = {{"name", "p1copy"}, {"dim", 1}, {"tangent_roots", {"2"}}};
  auto t = TargetGeometry::from_json(j);
  EXPECT_EQ(t->rank(), 2u);
  EXPECT_EQ(poincare_pair(KClass::basis(t, 1), KClass::basis(t, 1)), LambdaElement(-1));
  EXPECT_THROW(TargetGeometry::from_json({{"dim", 1}}), ModelError);
  EXPECT_THROW(load_target("nowhere"), ModelError);
  EXPECT_THROW(load_target("file:/nonexistent/target.json"), ModelError);
}
