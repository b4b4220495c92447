#pragma once

#include <map>
#include <utility>
#include <vector>

#include "kadelic/qrational.hpp"

namespace kadelic {

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using LSeries = Series<LambdaElement>;
using HSeries = Series<HClass>;  // Laurent series in z with cohomology coefficients

// Sequences (f_1, f_2, ...) indexed by r.
struct LoopSequence {
  std::map<long, QRational> entries;
  LoopSequence() = default;
  LoopSequence(long r, const QRational& f) { entries[r] = f; }
  LoopSequence scaled(const LambdaElement& nu) const {
    LoopSequence out;
    for (auto& [r, f] : entries) out.entries[r] = f.scaled(nu);
    return out;
  }
};

struct AdelicKey {
  Root zeta;
  long r = 1;
  auto operator<=>(const AdelicKey&) const = default;
};

struct AdelicVector {
  std::map<AdelicKey, KSeries> components;
  const KSeries* find(const Root& z, long r) const {
    auto it = components.find({z, r});
    return it == components.end() ? nullptr : &it->second;
  }
};

// Omega(f, g) = -[Res_0 + Res_inf] (f(q^{-1}), g(q)) dq/q
inline LambdaElement omega(const QRational& f, const QRational& g) {
  if (f.is_zero() || g.is_zero()) return LambdaElement();
  QRational h = QRational::bilinear(f.inverse_q(), g, [](const KClass& a, const KClass& b) { return poincare_pair(a, b); })
                    .times_q(-1);
  KClass s = h.residue_zero() + h.residue_infinity();
  if (s.is_zero()) return LambdaElement();
  return -s[0];
}

// Same value through the residue theorem: sum of residues at roots of unity.
inline LambdaElement omega_via_roots(const QRational& f, const QRational& g) {
  if (f.is_zero() || g.is_zero()) return LambdaElement();
  QRational h = QRational::bilinear(f.inverse_q(), g, [](const KClass& a, const KClass& b) { return poincare_pair(a, b); })
                    .times_q(-1);
  KClass s;
  for (auto& [z, e] : h.denominator()) s += h.residue_at(z);
  return s.is_zero() ? LambdaElement() : s[0];
}

inline LambdaElement omega_inf(const LoopSequence& F, const LoopSequence& G) {
  LambdaElement acc;
  for (auto& [r, f] : F.entries) {
    auto it = G.entries.find(r);
    if (it == G.entries.end()) continue;
    LambdaElement w = omega(f, it->second);
    if (!w.is_zero()) acc += w.adams(r) * Cyclo(make_rational(1, r));
  }
  return acc;
}

// f(q^{-1}) for a series in u = q - 1: u -> -u/(1+u), known below u^target.
template <class T>
Series<T> invert_q(const Series<T>& a, long target) {
  CSeries onep = binomial_series(Rational(-1), target + 2);  // 1/(1+u)
  CSeries w = CSeries::monomial(Cyclo(-1), 1) * onep;
  CSeries winv = CSeries::from_coeffs(-1, {Cyclo(-1), Cyclo(-1)});
  return a.compose(w, &winv, target);
}

// Res_{q=1} pair(a(q^{-1}), b(q)) dq/q
template <class Pair>
LambdaElement residue_one(const KSeries& a, const KSeries& b, Pair&& pair) {
  if (a.is_zero() || b.is_zero()) return LambdaElement();
  if (a.valuation() >= 0 && b.valuation() >= 0) return LambdaElement();
  long target = a.is_exact() ? std::max(1L, -b.valuation() + 2) : a.prec();
  KSeries ai = invert_q(a, target);
  LSeries prod = KSeries::multiply(ai, b, [&](const KClass& x, const KClass& y) { return pair(x, y); });
  long P = std::max(2L, -prod.valuation() + 2);
  CSeries onep = binomial_series(Rational(-1), P);
  LSeries full = LSeries::multiply(prod, onep, [](const LambdaElement& x, const Cyclo& y) { return LambdaElement(x * y); });
  if (full.prec() <= -1) throw TruncationError("residue at q=1: series truncation too low to determine the residue");
  return full.coeff(-1);
}

inline LambdaElement omega_fake(const KSeries& f, const KSeries& g) {
  return residue_one(f, g, [](const KClass& a, const KClass& b) { return poincare_pair(a, b); });
}

// Omega^H(f, g) = Res_{z=0} (f(-z), g(z)) dz with the pairing int_X a b.
inline LambdaElement omega_cohomological(const HSeries& f, const HSeries& g) {
  if (f.is_zero() || g.is_zero()) return LambdaElement();
  std::vector<HClass> c;
  long lo = f.valuation();
  for (long e = lo; e < f.top(); ++e) {
    HClass x = f.coeff(e);
    c.push_back(e % 2 ? -x : x);
  }
  HSeries fm = HSeries::from_coeffs(lo, std::move(c), f.prec());
  LSeries prod = HSeries::multiply(fm, g, [](const HClass& a, const HClass& b) { return (a * b).integrate(); });
  if (prod.prec() <= -1) throw TruncationError("cohomological residue: truncation too low");
  return prod.coeff(-1);
}

// Sum over (zeta, r) of (1/m)(1/r) Res (F^(zeta,r)(q^{-1}), G^(zeta^{-1},r)(q))^{(r)} dq/q.
// With per_block = true the 1/r weight is dropped (the normalization of a single r-block).
inline LambdaElement omega_adelic(const AdelicVector& F, const AdelicVector& G, bool per_block = false) {
  LambdaElement acc;
  for (auto& [key, a] : F.components) {
    const KSeries* b = G.find(key.zeta.inverse(), key.r);
    if (!b || a.is_zero() || b->is_zero()) continue;
    if (a.valuation() >= 0 && b->valuation() >= 0) continue;
    long r = key.r;
    LambdaElement res = residue_one(a, *b, [r](const KClass& x, const KClass& y) { return twisted_pair(r, x, y); });
    if (res.is_zero()) continue;
    Rational w(1, key.zeta.order());
    if (!per_block) w /= r;
    acc += res * Cyclo(w);
  }
  return acc;
}

inline AdelicVector adelic_map(const LoopSequence& F, long m_max, long order) {
  AdelicVector out;
  auto roots = roots_up_to(m_max);
  for (auto& [r, f] : F.entries) {
    if (f.is_zero()) continue;
    for (auto& z : roots) out.components[{z, r}] = expand_at(f, z, z.order(), r, order);
  }
  return out;
}

// Sector-indexed vector: index j in Z_M, either sector form (group element h0^j) or character form.
struct SectorVector {
  long M = 1;
  bool character_form = false;
  std::map<long, KSeries> components;
};

// (1/M) sum_zeta Res (f^(zeta)(q^{-1}), g^(zeta^{-1})(q))^{(r(zeta))} dq/q, sectors keyed by M-th roots of unity.
inline LambdaElement omega_twisted(long M, const std::map<Root, KSeries>& f, const std::map<Root, KSeries>& g) {
  LambdaElement acc;
  for (auto& [z, a] : f) {
    if (M % z.order() != 0) throw std::invalid_argument("twisted form: sector label is not an M-th root of unity");
    auto it = g.find(z.inverse());
    if (it == g.end()) continue;
    long r = M / z.order();
    acc += residue_one(a, it->second, [r](const KClass& x, const KClass& y) { return twisted_pair(r, x, y); });
  }
  return acc * Cyclo(make_rational(1, M));
}

// ((q+1)^{r/m} - 1)^k
inline CSeries root_power_minus_one(long r, long m, long k, long order) {
  CSeries y = binomial_series(make_rational(r, m), order) - CSeries(Cyclo(1));
  return y.pow(k, order);
}

// q^{kr/m} / (1 - q^{r/m})^{k+1}
inline CSeries negative_generator_series(long r, long m, long k, long order) {
  long P = order + 2 * (k + 1) + 2;
  CSeries y = binomial_series(make_rational(r, m), P);
  CSeries den = (CSeries(Cyclo(1)) - y).inverse(P).pow(k + 1, P);
  CSeries num = binomial_series(make_rational(k * r, m), P);
  return (num * den).truncated(order);
}

enum class DarbouxSpace { adelic_block, twisted };

struct DarbouxPair {
  Root f_sector;
  KSeries f;
  Root g_sector;
  KSeries g;
};

// f^{(zeta)}_{k,alpha} = Psi^r(phi^alpha (q^{1/m}-1)^k) and the dual g^{(zeta^{-1})}_{k,alpha}
// (multiplied by r in the twisted space).
inline DarbouxPair darboux_basis(DarbouxSpace space, const TargetPtr& t, const Root& zeta, long r, long k, size_t alpha,
                                 long order) {
  long m = zeta.order();
  auto duals = dual_basis(t);
  KClass fa = adams_k(r, duals.at(alpha));
  KClass ga = adams_k(r, KClass::basis(t, alpha));
  if (space == DarbouxSpace::twisted) ga = ga * Cyclo(r);
  DarbouxPair p;
  p.f_sector = zeta;
  p.f = kscale(root_power_minus_one(r, m, k, order), fa);
  p.g_sector = zeta.inverse();
  p.g = kscale(negative_generator_series(r, m, k, order), ga);
  return p;
}

// Per-block pairing of a vector supported on one sector against another: (1/m) Res(...)^{(r)} dq/q.
inline LambdaElement block_pair(long r, const Root& zf, const KSeries& f, const Root& zg, const KSeries& g) {
  if (!(zf.inverse() == zg)) return LambdaElement();
  LambdaElement res = residue_one(f, g, [r](const KClass& x, const KClass& y) { return twisted_pair(r, x, y); });
  return res * Cyclo(make_rational(1, zf.order()));
}

// Psi^r nabla_{eta,zeta} = sum Psi^r phi_a (x) Psi^r phi^a / (1 - eta^{-1} zeta^{-1} (1+X)(1+Y)),
// X = x^{r/m} - 1, Y = y^{r/n} - 1.
struct PropagatorKernel {
  Root eta, zeta;
  long r = 1;
  long order = 0;
  // tensor[i][j]: coefficient of basis_i (x) basis_j
  std::vector<std::vector<LambdaElement>> tensor;
  // scalar[(i, j)]: coefficient of X^i Y^j, i + j < order
  std::map<std::pair<long, long>, Cyclo> scalar;
  Cyclo coefficient(long i, long j) const {
    auto it = scalar.find({i, j});
    return it == scalar.end() ? Cyclo(0) : it->second;
  }
};

struct BalancedNodeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline PropagatorKernel propagator_kernel(const TargetPtr& t, const Root& eta, const Root& zeta, long r, long order) {
  if ((eta * zeta).is_one()) throw BalancedNodeError("propagator: eta * zeta = 1 (balanced node)");
  PropagatorKernel K;
  K.eta = eta;
  K.zeta = zeta;
  K.r = r;
  K.order = order;
  size_t n = t->rank();
  auto duals = dual_basis(t);
  K.tensor.assign(n, std::vector<LambdaElement>(n));
  for (size_t a = 0; a < n; ++a) {
    KClass left = adams_k(r, KClass::basis(t, a));
    KClass right = adams_k(r, duals[a]);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) K.tensor[i][j] += left[i] * right[j];
  }
  // 1/(a - c W) = sum c^n W^n / a^{n+1}, W = X + Y + XY
  Cyclo c = Cyclo::root((eta * zeta).inverse());
  Cyclo a = Cyclo(1) - c;
  Cyclo ainv = a.inverse();
  std::map<std::pair<long, long>, Cyclo> Wn{{{0, 0}, Cyclo(1)}};
  Cyclo coef = ainv;
  for (long p = 0; p < order; ++p) {
    for (auto& [ij, v] : Wn)
      if (ij.first + ij.second < order) K.scalar[ij] += v * coef;
    std::map<std::pair<long, long>, Cyclo> next;
    for (auto& [ij, v] : Wn) {
      auto [i, j] = ij;
      if (i + j + 1 < order) {
        next[{i + 1, j}] += v;
        next[{i, j + 1}] += v;
      }
      if (i + j + 2 < order) next[{i + 1, j + 1}] += v;
    }
    Wn = std::move(next);
    coef = coef * c * ainv;
  }
  for (auto it = K.scalar.begin(); it != K.scalar.end();) it = it->second.is_zero() ? K.scalar.erase(it) : std::next(it);
  return K;
}

// Closed form Psi^r(phi_a (c q^{1/m})^k / (1 - c q^{1/m})^{k+1}), c = eta^{-1} zeta^{-1}, expanded in q - 1.
inline KSeries propagator_map(const TargetPtr& t, const Root& eta, const Root& zeta, long k, size_t alpha, long order,
                              long r = 1) {
  if ((eta * zeta).is_one()) throw BalancedNodeError("propagator: eta * zeta = 1 (balanced node)");
  long m = eta.order();
  Cyclo c = Cyclo::root((eta * zeta).inverse());
  CSeries y = binomial_series(make_rational(r, m), order).scaled(c);
  CSeries den = (CSeries(Cyclo(1)) - y).inverse(order).pow(k + 1, order);
  CSeries s = (y.pow(k, order) * den).truncated(order);
  return kscale(s, adams_k(r, KClass::basis(t, alpha)));
}

// Same map through -Res_{x=1} [x^k/(1-x)^{k+1}] / (1 - c Q x^{-1}) dx/x with Q = q^{r/m},
// evaluated as a Laurent series in s = x - 1 whose coefficients are series in u = q - 1.
inline KSeries propagator_map_residue(const TargetPtr& t, const Root& eta, const Root& zeta, long k, size_t alpha,
                                      long order, long r = 1) {
  if ((eta * zeta).is_one()) throw BalancedNodeError("propagator: eta * zeta = 1 (balanced node)");
  using SS = Series<CSeries>;
  long m = eta.order();
  Cyclo c = Cyclo::root((eta * zeta).inverse());
  CSeries cQ = binomial_series(make_rational(r, m), order).scaled(c);
  CSeries unit = CSeries(Cyclo(1)) - cQ;  // 1 - cQ, invertible because c != 1
  CSeries unit_inv = unit.inverse(order);
  long S = k + 2;  // s-precision needed for the s^{-1} coefficient
  auto constant = [&](const Cyclo& v) { return CSeries(v).truncated(order); };
  // x^k (1+s)^k
  std::vector<CSeries> xk;
  for (long j = 0; j <= k && j < S; ++j) xk.push_back(constant(Cyclo(Rational(binomial(k, j)))));
  SS num = SS::from_coeffs(0, xk, S);
  // (1 - x)^{-(k+1)} = (-s)^{-(k+1)}
  SS pole = SS::monomial(constant(Cyclo((k + 1) % 2 ? -1 : 1)), -(k + 1), SS::kExact);
  // 1 / (1 - cQ/x) = x / (x - cQ) = (1+s) / (unit + s)
  std::vector<CSeries> geo;
  CSeries p = unit_inv;
  for (long j = 0; j < S + k + 2; ++j) {
    geo.push_back(j % 2 ? -p : p);
    p = (p * unit_inv).truncated(order);
  }
  SS g = SS::from_coeffs(0, geo, S + k + 2);
  SS onep = SS::from_coeffs(0, {constant(Cyclo(1)), constant(Cyclo(1))});
  // dx/x = ds/(1+s)
  std::vector<CSeries> invx;
  for (long j = 0; j < S + k + 2; ++j) invx.push_back(constant(Cyclo(j % 2 ? -1 : 1)));
  SS dx = SS::from_coeffs(0, invx, S + k + 2);
  SS integrand = num * pole * onep * g * dx;
  CSeries res = -integrand.coeff(-1);
  return kscale(res.truncated(order), adams_k(r, KClass::basis(t, alpha)));
}

// Fourier transform between sector and character forms:
//   f^{(h0^j)} = sum_a f_a e^{2 pi i a j / M},  f_a = (1/M) sum_j f^{(h0^j)} e^{-2 pi i a j / M}.
inline SectorVector fourier_sectors(const SectorVector& v) {
  SectorVector out;
  out.M = v.M;
  out.character_form = !v.character_form;
  long M = v.M;
  for (long j = 0; j < M; ++j) {
    KSeries acc;
    bool any = false;
    for (auto& [a, f] : v.components) {
      long e = v.character_form ? a * j : -a * j;
      KSeries term = f.map([&](const KClass& x) { return KClass(x * root_of_unity(M, e)); });
      acc = any ? acc + term : term;
      any = true;
    }
    if (!any) continue;
    if (!v.character_form) acc = acc.map([&](const KClass& x) { return KClass(x * Cyclo(make_rational(1, M))); });
    out.components[j] = acc;
  }
  return out;
}

}  // namespace kadelic
