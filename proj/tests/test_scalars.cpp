#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "kadelic/scalars.hpp"

using namespace kadelic;

namespace {

std::complex<double> numeric(const Cyclo& x) {
  std::complex<double> acc = 0;
  long N = x.level();
  for (size_t e = 0; e < x.coords().size(); ++e)
    acc += x.coords()[e].get_d() * std::polar(1.0, 2 * M_PI * static_cast<double>(e) / static_cast<double>(N));
  return acc;
}

Cyclo random_cyclo(std::mt19937_64& g, long N) {
  std::uniform_int_distribution<long> c(-4, 4), d(1, 3);
  std::vector<Rational> v(N);
  for (auto& x : v) x = make_rational(c(g), d(g));
  return Cyclo::from_exponents(N, v);
}

}  // namespace

TEST(Rational, AlwaysReduced) {
  Rational r = make_rational(6, -4);
  EXPECT_EQ(r.get_num(), -3);
  EXPECT_EQ(r.get_den(), 2);
  EXPECT_EQ(parse_rational("10/4"), make_rational(5, 2));
  EXPECT_THROW(make_rational(1, 0), DivisionByZero);
}

TEST(RootOfUnity, SpecExamples) {
  EXPECT_EQ(root_of_unity(1, 0), Cyclo(1));
  EXPECT_EQ(root_of_unity(2, 1), Cyclo(-1));
  Cyclo i = root_of_unity(4, 1);
  EXPECT_EQ(i.pow(4), Cyclo(1));
  EXPECT_EQ(i.pow(2), Cyclo(-1));
  EXPECT_THROW(root_of_unity(0, 1), std::invalid_argument);
}

TEST(RootOfUnity, OrderIsMOverGcd) {
  for (long m = 1; m <= 12; ++m)
    for (long t = 0; t < m; ++t) {
      Root z(m, t);
      EXPECT_EQ(z.order(), m / std::gcd(m, t == 0 ? m : t));
      EXPECT_EQ(root_of_unity(m, t).pow(z.order()), Cyclo(1));
    }
}

TEST(CycloInverse, SpecExamples) {
  EXPECT_EQ(cyclo_inverse(Cyclo(1)), Cyclo(1));
  EXPECT_EQ(cyclo_inverse(root_of_unity(4, 1)), root_of_unity(4, 3));
  Cyclo x = Cyclo(1) + root_of_unity(3, 1);
  EXPECT_EQ(x * cyclo_inverse(x), Cyclo(1));
  EXPECT_THROW(cyclo_inverse(Cyclo(0)), DivisionByZero);
}

TEST(Cyclo, NumericValueMatchesComplexExponential) {
  for (long m = 1; m <= 15; ++m)
    for (long t = 0; t < m; ++t) {
      auto v = numeric(root_of_unity(m, t));
      auto w = std::polar(1.0, 2 * M_PI * static_cast<double>(t) / static_cast<double>(m));
      EXPECT_NEAR(std::abs(v - w), 0.0, 1e-9) << m << " " << t;
    }
}

TEST(Cyclo, FieldAxiomsOnRandomTriples) {
  std::mt19937_64 g(7);
  for (long N : {1L, 2L, 3L, 4L, 5L, 6L, 8L, 9L, 10L, 12L, 15L, 20L, 24L}) {
    for (int rep = 0; rep < 4; ++rep) {
      Cyclo a = random_cyclo(g, N), b = random_cyclo(g, N), c = random_cyclo(g, N % 5 + 2);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ(a + b, b + a);
      if (!a.is_zero()) EXPECT_EQ(a * a.inverse(), Cyclo(1));
      EXPECT_NEAR(std::abs(numeric(a * b) - numeric(a) * numeric(b)), 0.0, 1e-8);
    }
  }
}

TEST(Cyclo, CanonicalFormIsUniqueAndIdempotent) {
  // 1 + i + i^2 + i^3 = 0 and the conductor shrinks back to 1
  Cyclo s = Cyclo(0);
  for (long t = 0; t < 4; ++t) s = s + root_of_unity(4, t);
  EXPECT_TRUE(s.is_zero());
  Cyclo w = root_of_unity(12, 4);
  EXPECT_EQ(w, root_of_unity(3, 1));
  EXPECT_EQ(w.level(), 3);
  Cyclo again = Cyclo::from_exponents(w.level(), w.coords());
  EXPECT_EQ(again.coords(), w.coords());
  // golden ratio type element lands in Q
  Cyclo c = root_of_unity(5, 1) + root_of_unity(5, 4);
  EXPECT_EQ(c * c + c, Cyclo(1));
}

TEST(Bernoulli, SpecExamplesAndRecurrenceOracle) {
  EXPECT_EQ(bernoulli(0), 1);
  EXPECT_EQ(bernoulli(1), make_rational(-1, 2));
  EXPECT_EQ(bernoulli(2), make_rational(1, 6));
  EXPECT_EQ(bernoulli(3), 0);
  EXPECT_EQ(bernoulli(4), make_rational(-1, 30));
  // recompute from the recurrence sum_{j<=n} C(n+1, j) B_j = 0 independently
  std::vector<Rational> B{Rational(1)};
  for (long n = 1; n <= 30; ++n) {
    Rational s = 0;
    for (long j = 0; j < n; ++j) s += Rational(binomial(n + 1, j)) * B[j];
    B.push_back(-s / Rational(n + 1));
  }
  for (long n = 0; n <= 30; ++n) EXPECT_EQ(bernoulli(n), B[n]) << n;
  for (long m = 1; m <= 14; ++m) EXPECT_EQ(bernoulli(2 * m + 1), 0);
  EXPECT_EQ(bernoulli(12), make_rational(-691, 2730));
}

TEST(Cyclo, ProductOverRootsIsOneMinusYr) {
  for (long r = 1; r <= 8; ++r) {
    std::vector<Cyclo> poly{Cyclo(1)};  // coefficients in Y
    for (long u = 1; u <= r; ++u) {
      std::vector<Cyclo> next(poly.size() + 1, Cyclo(0));
      Cyclo z = root_of_unity(r, u);
      for (size_t i = 0; i < poly.size(); ++i) {
        next[i] = next[i] + poly[i];
        next[i + 1] = next[i + 1] - poly[i] * z;
      }
      poly = next;
    }
    for (long i = 0; i <= r; ++i) {
      Cyclo want = i == 0 ? Cyclo(1) : i == r ? Cyclo(-1) : Cyclo(0);
      EXPECT_EQ(poly[i], want) << "r=" << r << " i=" << i;
    }
  }
}

TEST(Scalars, NumberTheoryHelpers) {
  EXPECT_EQ(mod_floor(-3, 4), 1);
  EXPECT_EQ(mod_inverse(3, 7), 5);
  EXPECT_EQ(euler_phi(12), 4);
  EXPECT_EQ(divisors(12), (std::vector<long>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(cyclotomic_polynomial(6), (std::vector<long>{1, -1, 1}));
}
