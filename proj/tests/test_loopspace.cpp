#include <gtest/gtest.h>

#include <random>

#include "kadelic/loopspace.hpp"

using namespace kadelic;

namespace {

TargetPtr pt() { return load_target("point"); }
KClass scal(const TargetPtr& t, const LambdaElement& x) { return KClass::scalar(t, x); }
KClass one(const TargetPtr& t = pt()) { return scal(t, LambdaElement(1)); }

Rational coeff(const KSeries& s, long e) {
  KClass c = s.coeff(e);
  return c.is_zero() ? Rational(0) : c[0].constant_term().rational();
}

// 1/(1 - q/z)
QRational simple_pole(const TargetPtr& t, const Root& z) { return QRational::pole(one(t), z, 1); }

QRational random_rational_function(std::mt19937_64& g, const TargetPtr& t) {
  std::vector<Root> roots = roots_up_to(3);
  std::uniform_int_distribution<int> c(-3, 3), k(-2, 2), j(0, 2), which(0, static_cast<int>(roots.size()) - 1);
  std::map<long, KClass> num;
  for (int i = 0; i < 3; ++i) num[k(g)] += KClass::basis(t, static_cast<size_t>(i) % t->rank(), LambdaElement(c(g)));
  std::map<Root, int> den;
  for (int i = 0; i < 2; ++i) den[roots[which(g)]] += j(g);
  return QRational::from_parts(t, num, den);
}

}  // namespace

TEST(Omega, SpecExamples) {
  auto t = pt();
  QRational c1 = QRational::monomial(one(t), 0);
  QRational g = simple_pole(t, Root(1, 0));
  EXPECT_EQ(omega(c1, g), LambdaElement(-1));
  EXPECT_EQ(omega(g, c1), LambdaElement(1));
  QRational lin = c1 - QRational::monomial(one(t), 1);
  EXPECT_TRUE(omega(lin, g).is_zero());
  EXPECT_TRUE(omega(g, g).is_zero());
}

TEST(Omega, AntisymmetricAndMatchesResidueTheorem) {
  std::mt19937_64 rng(101);
  for (auto t : {load_target("point"), load_target("p1")})
    for (int i = 0; i < 60; ++i) {
      QRational f = random_rational_function(rng, t), g = random_rational_function(rng, t);
      LambdaElement w = omega(f, g);
      EXPECT_EQ(w, -omega(g, f));
      EXPECT_EQ(w, omega_via_roots(f, g));
      EXPECT_TRUE(omega(f, f).is_zero());
    }
}

TEST(Omega, PolarizationIsDarboux) {
  // (1-q)^k against q^l/(1-q)^{l+1}: triangular with diagonal (-1)^{k+1}; both halves isotropic
  auto t = pt();
  QRational plus = QRational::monomial(one(t), 0) - QRational::monomial(one(t), 1);
  QRational pk = QRational::monomial(one(t), 0);
  for (int k = 0; k <= 4; ++k, pk = pk * plus)
    for (int l = 0; l <= 4; ++l) {
      QRational gl = QRational::generator(one(t), Root(1, 0), l);
      LambdaElement got = omega(pk, gl);
      if (k == l) EXPECT_EQ(got, LambdaElement(k % 2 ? 1 : -1)) << k;
      if (k > l) EXPECT_TRUE(got.is_zero()) << k << " " << l;
      EXPECT_TRUE(omega(QRational::monomial(one(t), k), QRational::monomial(one(t), l)).is_zero());
      EXPECT_TRUE(omega(QRational::generator(one(t), Root(1, 0), k), gl).is_zero());
    }
}

TEST(OmegaInf, SpecExamples) {
  auto t = pt();
  auto R = default_ring(6);
  LambdaElement Q = LambdaElement::novikov(R, 1);
  QRational c1 = QRational::monomial(one(t), 0);
  QRational g = simple_pole(t, Root(1, 0));
  EXPECT_EQ(omega_inf(LoopSequence(1, c1), LoopSequence(1, g)), omega(c1, g));
  LambdaElement w = omega_inf(LoopSequence(2, c1), LoopSequence(2, g.scaled(Q)));
  EXPECT_EQ(w, Q.pow(2) * Cyclo(make_rational(-1, 2)));
  EXPECT_TRUE(omega_inf(LoopSequence(1, c1), LoopSequence(2, g)).is_zero());
}

TEST(ResiduePairings, SpecExamples) {
  auto t = pt();
  // fake: (1, -(q-1)^{-1})
  KSeries f = KSeries::monomial(one(t), 0);
  KSeries g = KSeries::monomial(scal(t, LambdaElement(-1)), -1);
  EXPECT_EQ(omega_fake(f, g), LambdaElement(-1));
  EXPECT_EQ(omega_fake(g, f), LambdaElement(1));
  // cohomological: g = -(e^z - 1)^{-1} = -1/z + 1/2 - z/12 + ...
  HSeries hf = HSeries::monomial(HClass::constant(0, LambdaElement(1)), 0);
  HSeries hg = HSeries::from_coeffs(-1,
                                    {HClass::constant(0, LambdaElement(-1)), HClass::constant(0, LambdaElement(make_rational(1, 2))),
                                     HClass::constant(0, LambdaElement(make_rational(-1, 12)))},
                                    2);
  EXPECT_EQ(omega_cohomological(hf, hg), LambdaElement(-1));
  EXPECT_EQ(omega_cohomological(hg, hf), LambdaElement(1));
  // twisted M = 2, identity sector, g = 2/(1-q^2)
  QRational two_over = QRational::pole(scal(t, LambdaElement(2)), Root(1, 0), 1) * QRational::pole(one(t), Root(2, 1), 1);
  KSeries gs = expand_at(two_over, Root(1, 0), 1, 1, 6);
  EXPECT_EQ(omega_twisted(2, {{Root(1, 0), f}}, {{Root(1, 0), gs}}), LambdaElement(-1));
  EXPECT_THROW(omega_twisted(2, {{Root(3, 1), f}}, {{Root(3, 2), gs}}), std::invalid_argument);
}

TEST(ResiduePairings, TruncationTooLowIsReported) {
  auto t = pt();
  KSeries f = KSeries::monomial(one(t), 0, 1);
  KSeries g = KSeries::monomial(one(t), -3, 0);
  EXPECT_THROW(omega_fake(f, g), TruncationError);
}

TEST(AdelicMap, SpecExamples) {
  auto t = pt();
  QRational g = simple_pole(t, Root(1, 0));
  AdelicVector A = adelic_map(LoopSequence(1, g), 4, 6);
  const KSeries* at1 = A.find(Root(1, 0), 1);
  ASSERT_NE(at1, nullptr);
  EXPECT_EQ(*at1, KSeries::monomial(scal(t, LambdaElement(-1)), -1, 6));
  const KSeries* atm1 = A.find(Root(2, 1), 1);
  ASSERT_NE(atm1, nullptr);
  EXPECT_EQ(coeff(*atm1, 0), make_rational(1, 2));
  EXPECT_EQ(coeff(*atm1, 1), make_rational(-1, 8));
  EXPECT_EQ(coeff(*atm1, -1), 0);
  for (auto& [key, s] : A.components) EXPECT_EQ(key.r, 1);

  QRational lin = QRational::monomial(one(t), 0) - QRational::monomial(one(t), 1);
  for (long r = 1; r <= 3; ++r)
    for (auto& [key, s] : adelic_map(LoopSequence(r, lin), 4, 6).components) EXPECT_GE(s.valuation(), 0);
}

TEST(AdelicMap, RelativeLinearity) {
  auto R = default_ring(6);
  LambdaElement Q = LambdaElement::novikov(R, 1);
  for (auto t : {load_target("point"), load_target("p1")}) {
    QRational f = QRational::generator(KClass::basis(t, t->rank() - 1), Root(3, 1), 1);
    for (long r = 1; r <= 3; ++r) {
      AdelicVector plain = adelic_map(LoopSequence(r, f), 3, 6);
      AdelicVector scaled = adelic_map(LoopSequence(r, f).scaled(Q), 3, 6);
      for (auto& [key, s] : plain.components) {
        KSeries want = s.map([&](const KClass& x) { return KClass(x * Q.adams(r)); });
        EXPECT_EQ(scaled.components.at(key), want) << r;
      }
    }
  }
}

TEST(OmegaAdelic, SpecExamples) {
  auto t = pt();
  QRational c1 = QRational::monomial(one(t), 0);
  LoopSequence F(1, c1);
  LoopSequence G1(1, simple_pole(t, Root(1, 0))), G2(1, simple_pole(t, Root(2, 1)));
  EXPECT_EQ(omega_adelic(adelic_map(F, 4, 8), adelic_map(G1, 4, 8)), LambdaElement(-1));
  EXPECT_EQ(omega_adelic(adelic_map(F, 4, 8), adelic_map(G2, 4, 8)), LambdaElement(-1));
  EXPECT_EQ(omega_inf(F, G2), LambdaElement(-1));
  // only the zeta = -1 component contributes for 1/(1+q)
  AdelicVector A = adelic_map(F, 4, 8), B = adelic_map(G2, 4, 8);
  for (auto& [key, s] : B.components) {
    AdelicVector one_block;
    one_block.components[{key.zeta.inverse(), key.r}] = A.components.at({key.zeta.inverse(), key.r});
    LambdaElement part = omega_adelic(one_block, B);
    if (key.zeta == Root(2, 1)) EXPECT_EQ(part, LambdaElement(-1));
    else EXPECT_TRUE(part.is_zero());
  }
  EXPECT_TRUE(omega_adelic(B, B).is_zero());
}

TEST(OmegaAdelic, SymplecticOnGenerators) {
  for (auto t : {load_target("point"), load_target("p1")})
    for (long r = 1; r <= 2; ++r)
      for (auto& z : roots_up_to(3))
        for (int j = 1; j <= 2; ++j)
          for (long k = -2; k <= 2; ++k) {
            LoopSequence F(r, QRational::monomial(KClass::basis(t, 0), k));
            LoopSequence G(r, QRational::pole(KClass::basis(t, t->rank() - 1), z, j));
            EXPECT_EQ(omega_inf(F, G), omega_adelic(adelic_map(F, 3, 8), adelic_map(G, 3, 8)));
          }
}

TEST(OmegaAdelic, PlusSpaceIsIsotropic) {
  for (auto t : {load_target("point"), load_target("p1")})
    for (long k = -2; k <= 3; ++k)
      for (long l = -2; l <= 3; ++l) {
        AdelicVector A = adelic_map(LoopSequence(1, QRational::monomial(KClass::basis(t, 0), k)), 3, 8);
        AdelicVector B = adelic_map(LoopSequence(1, QRational::monomial(KClass::basis(t, t->rank() - 1), l)), 3, 8);
        EXPECT_TRUE(omega_adelic(A, B).is_zero());
      }
}

TEST(Darboux, SpecExamples) {
  auto t = pt();
  auto blk = darboux_basis(DarbouxSpace::adelic_block, t, Root(1, 0), 1, 0, 0, 8);
  EXPECT_EQ(blk.f, KSeries::monomial(one(t), 0, 8));
  EXPECT_EQ(blk.g, expand_at(simple_pole(t, Root(1, 0)), Root(1, 0), 1, 1, 8));
  EXPECT_EQ(block_pair(1, blk.f_sector, blk.f, blk.g_sector, blk.g), LambdaElement(-1));
  auto tw = darboux_basis(DarbouxSpace::twisted, t, Root(1, 0), 2, 0, 0, 8);
  EXPECT_EQ(omega_twisted(2, {{tw.f_sector, tw.f}}, {{tw.g_sector, tw.g}}), LambdaElement(-1));
  for (long k = 0; k <= 3; ++k)
    for (long l = 0; l <= 3; ++l) {
      auto F = darboux_basis(DarbouxSpace::adelic_block, t, Root(3, 1), 2, k, 0, 8);
      auto G = darboux_basis(DarbouxSpace::adelic_block, t, Root(3, 1), 2, l, 0, 8);
      EXPECT_EQ(block_pair(2, F.f_sector, F.f, G.g_sector, G.g), k == l ? LambdaElement(-1) : LambdaElement());
      EXPECT_TRUE(block_pair(2, F.f_sector, F.f, F.f_sector, F.f).is_zero());
    }
}

TEST(Propagator, KernelExamples) {
  auto t = pt();
  auto K = propagator_kernel(t, Root(2, 1), Root(1, 0), 1, 4);
  EXPECT_EQ(K.coefficient(0, 0), Cyclo(make_rational(1, 2)));
  EXPECT_EQ(K.tensor[0][0], LambdaElement(1));
  auto Ki = propagator_kernel(t, Root(4, 1), Root(4, 1), 1, 4);
  EXPECT_EQ(Ki.coefficient(0, 0), Cyclo(make_rational(1, 2)));
  EXPECT_THROW(propagator_kernel(t, Root(3, 1), Root(3, 2), 1, 4), BalancedNodeError);
  EXPECT_THROW(propagator_map(t, Root(1, 0), Root(1, 0), 0, 0, 4), BalancedNodeError);
}

TEST(Propagator, ExchangeSymmetry) {
  for (auto t : {load_target("point"), load_target("p1")})
    for (auto& e : roots_up_to(3))
      for (auto& z : roots_up_to(3)) {
        if ((e * z).is_one()) continue;
        for (long r = 1; r <= 2; ++r) {
          auto A = propagator_kernel(t, e, z, r, 5), B = propagator_kernel(t, z, e, r, 5);
          for (long i = 0; i < 5; ++i)
            for (long j = 0; i + j < 5; ++j) EXPECT_EQ(A.coefficient(i, j), B.coefficient(j, i));
          for (size_t a = 0; a < t->rank(); ++a)
            for (size_t b = 0; b < t->rank(); ++b) EXPECT_EQ(A.tensor[a][b], B.tensor[b][a]);
        }
      }
}

TEST(Propagator, MapExamples) {
  auto t = pt();
  KSeries s = propagator_map(t, Root(2, 1), Root(1, 0), 0, 0, 6);
  EXPECT_EQ(coeff(s, 0), make_rational(1, 2));
  EXPECT_EQ(coeff(s, 1), make_rational(-1, 8));
  // graph property: the adelic image of a generator at another root equals the closed form
  for (auto tg : {load_target("point"), load_target("p1")})
    for (long k = 0; k <= 2; ++k) {
      QRational g = QRational::generator(KClass::basis(tg, 0), Root(1, 0), static_cast<int>(k));
      EXPECT_EQ(expand_at(g, Root(2, 1), 2, 1, 6), propagator_map(tg, Root(2, 1), Root(1, 0), k, 0, 6));
    }
  EXPECT_EQ(propagator_map(t, Root(3, 1), Root(1, 0), 1, 0, 6), propagator_map_residue(t, Root(3, 1), Root(1, 0), 1, 0, 6));
}

TEST(Fourier, SpecExamples) {
  auto t = pt();
  KSeries u1 = KSeries::monomial(one(t), 0);
  SectorVector c;
  c.M = 2;
  c.character_form = true;
  c.components[0] = u1;
  c.components[1] = KSeries::zero();
  SectorVector s = fourier_sectors(c);
  EXPECT_FALSE(s.character_form);
  EXPECT_EQ(s.components.at(0), u1);
  EXPECT_EQ(s.components.at(1), u1);
  SectorVector m1;
  m1.M = 1;
  m1.components[0] = KSeries::monomial(scal(t, LambdaElement(3)), -1);
  EXPECT_EQ(fourier_sectors(m1).components.at(0), m1.components.at(0));
}

TEST(Fourier, RoundTripAgainstInverseDft) {
  auto t = load_target("p1");
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> c(-4, 4);
  for (long M = 1; M <= 12; ++M) {
    SectorVector v;
    v.M = M;
    for (long j = 0; j < M; ++j) {
      KSeries acc = KSeries::zero(5);
      for (long e = -1; e <= 2; ++e)
        acc = acc + KSeries::monomial(KClass::basis(t, static_cast<size_t>(e + 1) % 2, LambdaElement(c(rng))), e, 5);
      v.components[j] = acc;
    }
    SectorVector back = fourier_sectors(fourier_sectors(v));
    for (long j = 0; j < M; ++j) EXPECT_EQ(back.components[j], v.components[j]) << M;
  }
}
