#include <gtest/gtest.h>

#include <random>

#include "kadelic/rr_twist.hpp"
#include "oracle_series.hpp"

using namespace kadelic;

namespace {

Rational scalar_of(const HClass& h) { return h.is_zero() ? Rational(0) : h.c[0].constant_term().rational(); }
Rational scalar_of(const KClass& k) { return k.is_zero() ? Rational(0) : k[0].constant_term().rational(); }
Rational scalar_of(const Cyclo& c) { return c.rational(); }

// Laurent coefficients (u^-1, u^0, ...) of 1/(1 - c (1+u)^a), c = +-1
oracle::Poly inverse_one_minus(int c, const Rational& a, size_t n) {
  oracle::Poly b = oracle::binom(a, n + 2);
  if (c == -1) {
    b[0] += 1;
    oracle::Poly r = oracle::inv(b, n + 1);
    r.insert(r.begin(), Rational(0));
    return r;
  }
  // 1 - (1+u)^a = -u d(u)
  oracle::Poly d(b.begin() + 1, b.end());
  oracle::Poly r = oracle::scale(oracle::inv(d, n + 1), Rational(-1));
  return r;
}

}  // namespace

TEST(Sectors, Examples) {
  Sector a = sector_of(4, 2);
  EXPECT_EQ(a.r, 2);
  EXPECT_EQ(a.m, 2);
  EXPECT_EQ(a.eta, Root(2, 1));
  Sector z = sector_of(5, 0);
  EXPECT_EQ(z.r, 5);
  EXPECT_EQ(z.m, 1);
  EXPECT_TRUE(z.eta.is_one());
  Sector b = sector_of(6, 5);
  EXPECT_EQ(b.r, 1);
  EXPECT_EQ(b.m, 6);
  EXPECT_EQ(b.eta, Root(6, 5));
  EXPECT_THROW(sector_of(0, 1), std::invalid_argument);
  EXPECT_THROW(h_of(4, Root(3, 1)), std::invalid_argument);
}

TEST(Sectors, LabelRoundTrip) {
  for (long M = 1; M <= 12; ++M)
    for (long s = 0; s < M; ++s) {
      Sector sec = sector_of(M, s);
      EXPECT_EQ(sec.r * sec.m, M);
      EXPECT_EQ(h_of(M, sec.eta), s) << M << " " << s;
    }
}

TEST(EulerMaclaurin, TrivialCases) {
  auto t = load_target("p1");
  ZSeries one = em_asymptotics(MultClass{}, KClass::basis(t, 0), 5);
  EXPECT_EQ(one, ZSeries(HClass::constant(1, LambdaElement(1)), 5));
  MultClass S;
  S.s[1] = LambdaElement(3);
  S.s[2] = LambdaElement(-1);
  ZSeries zero_e = em_asymptotics(S, KClass(t), 5);
  EXPECT_EQ(zero_e, ZSeries(HClass::constant(1, LambdaElement(1)), 5));
}

TEST(EulerMaclaurin, PointMatchesBernoulliOracle) {
  // exp(sum_m s_{2m-1} e B_{2m}/(2m)! z^{2m-1}) with B_n/n! from t/(e^t - 1)
  auto t = load_target("point");
  const size_t N = 8;
  oracle::Poly et(N + 2);
  Rational f = 1;
  for (size_t i = 0; i < et.size(); ++i) {
    f = f / Rational(static_cast<long>(i + 1));
    et[i] = f;
  }
  oracle::Poly bn = oracle::inv(et, N + 2);
  std::mt19937_64 g(3);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int rep = 0; rep < 10; ++rep) {
    MultClass S;
    for (long k = 0; k <= 6; ++k) S.s[k] = LambdaElement(c(g));
    long e = c(g);
    oracle::Poly x(N, Rational(0));
    for (size_t m = 1; 2 * m - 1 < N; ++m) x[2 * m - 1] = S.get(2 * m - 1).constant_term().rational() * e * bn[2 * m];
    // exp via n E_n = sum j x_j E_{n-j}
    oracle::Poly E(N, Rational(0));
    E[0] = 1;
    for (size_t n = 1; n < N; ++n) {
      Rational acc = 0;
      for (size_t j = 1; j <= n; ++j) acc += Rational(static_cast<long>(j)) * x[j] * E[n - j];
      E[n] = acc / Rational(static_cast<long>(n));
    }
    ZSeries got = em_asymptotics(S, KClass::scalar(t, LambdaElement(e)), static_cast<long>(N));
    for (size_t n = 0; n < N; ++n) EXPECT_EQ(scalar_of(got.coeff(static_cast<long>(n))), E[n]) << rep << " " << n;
  }
}

TEST(EulerMaclaurin, AgreesWithIndependentAssembly) {
  std::mt19937_64 g(5);
  std::uniform_int_distribution<int> c(-3, 3);
  for (auto name : {"point", "p1", "p2"}) {
    auto t = load_target(name);
    for (int rep = 0; rep < 10; ++rep) {
      MultClass S;
      for (long k = 0; k <= 6; ++k)
        if (c(g) != 0) S.s[k] = LambdaElement(c(g));
      KClass E(t);
      for (size_t a = 0; a < t->rank(); ++a) E += KClass::basis(t, a, LambdaElement(c(g)));
      EXPECT_EQ(em_asymptotics(S, E, 6), em_asymptotics_oracle(S, E, 6)) << name << " " << rep;
    }
  }
}

TEST(EulerMaclaurin, LogProduct) {
  auto rep = em_log_product(4, 8);
  EXPECT_TRUE(rep.ok) << rep.detail;
  EXPECT_GE(rep.checks, 17);
  // brute force prod_{l <= 8} (1 - Y q^l): Y^2 q^6 counts pairs {0,6}, {1,5}, {2,4}
  EXPECT_EQ(rep.product.coeff(2, 6), Cyclo(3));
  EXPECT_EQ(rep.product.coeff(1, 5), Cyclo(-1));
  EXPECT_EQ(rep.product.coeff(3, 3), Cyclo(-1));  // {0,1,2}
  EXPECT_EQ(rep.product.coeff(4, 7), Cyclo(1));  // {0,1,2,4}
  EXPECT_EQ(rep.product.coeff(4, 5), Cyclo(0));
}

TEST(Rearrange, SpecExamples) {
  auto a = rearrange_product(2, 1, 4, 6);
  EXPECT_TRUE(a.ok) << a.detail;
  for (long n = 0; n < 12; ++n) EXPECT_EQ(a.lhs.coeff(1, n), Cyclo(n % 2));
  auto b = rearrange_product(2, 2, 4, 6);
  EXPECT_TRUE(b.ok) << b.detail;
  // prod (1 + Y q^l) by brute force in integer exponents (units 1/2 in the series)
  std::map<std::pair<long, long>, long> brute{{{0, 0}, 1}};
  for (long l = 0; l < 6; ++l) {
    auto next = brute;
    for (auto& [k, v] : brute)
      if (k.first < 4 && k.second + l < 6) next[{k.first + 1, k.second + l}] += v;
    brute = next;
  }
  for (long y = 0; y <= 4; ++y)
    for (long n = 0; n < 6; ++n) {
      auto it = brute.find({y, n});
      EXPECT_EQ(b.lhs.coeff(y, 2 * n), Cyclo(it == brute.end() ? 0 : it->second));
      EXPECT_EQ(b.lhs.coeff(y, 2 * n + 1), Cyclo(0));
    }
  auto c = rearrange_product(1, 1, 4, 6);
  EXPECT_TRUE(c.ok);
  EXPECT_TRUE(c.lhs == FracQYSeries::one(1, 4, 6));
  EXPECT_THROW(rearrange_product(3, 0, 2, 2), std::invalid_argument);
}

TEST(Rearrange, AllSectorsUpToSix) {
  for (long M = 1; M <= 6; ++M)
    for (long s = 1; s <= M; ++s) {
      auto rep = rearrange_product(M, s, 6, 8);
      EXPECT_TRUE(rep.ok) << M << " " << s << ": " << rep.detail;
    }
  for (long r = 1; r <= 12; ++r) EXPECT_TRUE(roots_product_identity(r));
}

TEST(Box, IdentityAtTrivialSector) {
  for (auto name : {"point", "p1", "p2"}) {
    auto x = box_exponent(load_target(name), Root(1, 0), 1, 5, 4);
    for (auto& w : x.w) EXPECT_TRUE(w.is_zero());
  }
}

TEST(Box, PointExponentMatchesScalarOracle) {
  auto t = load_target("point");
  const long order = 4;
  auto x = box_exponent(t, Root(2, 1), 1, order, 4);
  for (long n = 1; n <= 4; ++n) {
    oracle::Poly twisted = inverse_one_minus(n % 2 ? -1 : 1, make_rational(n, 2), order + 1);
    oracle::Poly plain = inverse_one_minus(1, Rational(n), order + 1);
    for (long j = -1; j < order; ++j) {
      Rational want = (plain[j + 1] - twisted[j + 1]) / Rational(n);
      EXPECT_EQ(scalar_of(x.w[n].coeff(j)), want) << n << " " << j;
    }
  }
}

TEST(Box, PairIdentity) {
  for (auto name : {"point", "p1"}) {
    auto t = load_target(name);
    for (auto& eta : roots_up_to(4))
      for (long r = 1; r <= 3; ++r) {
        auto rep = box_pair_check(t, eta, r, 5, 5);
        EXPECT_TRUE(rep.ok) << name << " " << eta.str() << " r=" << r << ": " << rep.detail;
      }
  }
  auto rep = box_pair_check(load_target("p1"), Root(2, 1), 1, 6, 6);
  EXPECT_TRUE(rep.ok) << rep.detail;
}

TEST(Box, PointUnitRatioWhenUntwisted) {
  // r = 1 on a point: Box(eta; q^-1) Box(eta^-1; q) = 1
  auto t = load_target("point");
  for (auto& eta : roots_up_to(4)) {
    auto l = graded_exp(graded_invert_q(box_exponent(t, eta, 1, 14, 4)), 9);
    auto r = graded_exp(box_exponent(t, eta.inverse(), 1, 14, 4), 9);
    auto p = graded_product(l, r, 4);
    GradedKSeries unit(t, 4, 4);
    unit.w[0] = KSeries(KClass::scalar(t, LambdaElement(1)), 4);
    EXPECT_EQ(p, unit) << eta.str();
  }
}

TEST(Delta, CompositeEqualsBox) {
  for (auto name : {"point", "p1"}) {
    auto t = load_target(name);
    for (long M = 2; M <= 4; ++M)
      for (long s = 0; s < M; ++s) {
        auto rep = delta_composite_check(t, M, s, 4, 4);
        EXPECT_TRUE(rep.ok) << name << " M=" << M << " s=" << s << ": " << rep.detail;
      }
  }
  auto d = delta_tseng(load_target("p1"), 2, 1, 1, 4, 4);
  EXPECT_EQ(d.w[0], KSeries(KClass::scalar(load_target("p1"), LambdaElement(1)), 4));
  EXPECT_THROW(delta_exponent(load_target("p1"), 3, 3, 1, 4, 4), std::invalid_argument);
}

TEST(Qch, SpecExamples) {
  auto t = load_target("point");
  KSeries f = KSeries::monomial(KClass::scalar(t, LambdaElement(-1)), 1);  // 1 - q
  ZSeries z = qch(t, f, 6);
  Rational fact = 1;
  EXPECT_EQ(scalar_of(z.coeff(0)), 0);
  for (long j = 1; j < 6; ++j) {
    fact *= j;
    EXPECT_EQ(scalar_of(z.coeff(j)), -1 / fact) << j;
  }
  KSeries one = KSeries::monomial(KClass::scalar(t, LambdaElement(1)), 0);
  KSeries g = KSeries::monomial(KClass::scalar(t, LambdaElement(-1)), -1);
  EXPECT_EQ(omega_cohomological(qch(t, one, 6), qch(t, g, 6)), LambdaElement(-1));
  EXPECT_EQ(omega_fake(one, g), LambdaElement(-1));
}

TEST(Qch, IsSymplecticOnRandomPairs) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> c(-3, 3), lo(-3, 0);
  for (auto name : {"point", "p1", "p2"}) {
    auto t = load_target(name);
    for (int rep = 0; rep < 25; ++rep) {
      auto random_series = [&](long v) {
        std::vector<KClass> cs;
        for (long e = v; e < 4; ++e) {
          KClass k(t);
          for (size_t a = 0; a < t->rank(); ++a) k += KClass::basis(t, a, LambdaElement(c(rng)));
          cs.push_back(k);
        }
        return KSeries::from_coeffs(v, cs, 4);
      };
      KSeries f = random_series(0), g = random_series(lo(rng));
      EXPECT_EQ(omega_cohomological(qch(t, f, 8), qch(t, g, 8)), omega_fake(f, g)) << name << " " << rep;
      EXPECT_EQ(omega_cohomological(qch(t, g, 8), qch(t, f, 8)), omega_fake(g, f)) << name << " " << rep;
    }
  }
}

TEST(Qch, ProductCarriesOneSqrtToddFactor) {
  auto t = load_target("p1");
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> c(-3, 3);
  HClass std_ = HClass::from_rational(t->dim(), t->sqrt_todd());
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<KClass> a, b;
    for (int e = 0; e < 4; ++e) {
      a.push_back(KClass::basis(t, 0, LambdaElement(c(rng))) + KClass::basis(t, 1, LambdaElement(c(rng))));
      b.push_back(KClass::basis(t, 0, LambdaElement(c(rng))) + KClass::basis(t, 1, LambdaElement(c(rng))));
    }
    KSeries f = KSeries::from_coeffs(0, a, 4), g = KSeries::from_coeffs(0, b, 4);
    ZSeries lhs = (qch(t, f, 4) * qch(t, g, 4)).truncated(4);
    ZSeries rhs = qch(t, (f * g).truncated(4), 4).map([&](const HClass& h) { return std_ * h; });
    EXPECT_EQ(lhs, rhs) << rep;
  }
}
