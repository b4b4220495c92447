#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "loopspace.hpp"
#include "qrational.hpp"
#include "target.hpp"

namespace kadelic {

using ZSeries = HSeries;

struct CheckReport {
  bool ok = true;
  long checks = 0;
  std::string detail;
  void fail(const std::string& what) {
    if (ok) detail = what;
    ok = false;
  }
  void expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond) fail(what);
  }
};

// Sector data of h^s in Z_M: r = gcd(s, M), m = M / r, eta = e^{2 pi i t'/m} with t' s' = 1 mod m.
struct Sector {
  long M = 1, s = 0, r = 1, m = 1;
  Root eta;
};

inline Sector sector_of(long M, long s) {
  if (M < 1) throw std::invalid_argument("sector_of: M must be positive");
  Sector out;
  out.M = M;
  out.s = mod_floor(s, M);
  out.r = out.s == 0 ? M : gcd_l(out.s, M);
  out.m = M / out.r;
  long sp = out.s / out.r;
  out.eta = out.m == 1 ? Root{1, 0} : Root{out.m, mod_inverse(sp, out.m)};
  return out;
}

// Group element exponent p (mod M) of the sector labelled by zeta: zeta = e^{2 pi i t/m}, m | M, p = (M/m) t^{-1}.
inline long h_of(long M, const Root& zeta) {
  long m = zeta.order();
  if (M < 1 || M % m != 0) throw std::invalid_argument("h_of: root order does not divide M");
  if (m == 1) return 0;
  long s = mod_inverse(zeta.t, m);
  return mod_floor((M / m) * s, M);
}

// ---------------------------------------------------------------------------
// Multiplicative classes and the Euler-Maclaurin asymptotics in z.

struct MultClass {
  std::map<long, LambdaElement> s;  // s_k, k >= 0
  LambdaElement get(long k) const {
    auto it = s.find(k);
    return it == s.end() ? LambdaElement() : it->second;
  }
};

namespace detail {

inline HClass h_unit(long dim) { return HClass::constant(dim, LambdaElement(1)); }

inline HClass degree_part(const HClass& h, long l) {
  HClass out(h.dim);
  if (l >= 0 && l < static_cast<long>(h.c.size())) out.c[l] = h.c[l];
  return out;
}

// exp of an HSeries with valuation >= 1, exact below z^target.
inline HSeries hseries_exp_positive(const HSeries& x, long dim, long target) {
  HSeries acc(h_unit(dim), target);
  HSeries term(h_unit(dim), target);
  for (long n = 1; n < target; ++n) {
    term = (term * x).truncated(target).map([&](const HClass& h) { return h * Cyclo(make_rational(1, n)); });
    if (term.is_zero()) break;
    acc = acc + term;
  }
  return acc.truncated(target);
}

// exp(A/z) * exp(X) where A is nilpotent and X has valuation >= 1; result exact below z^target.
inline ZSeries split_exp(const HClass& pole, const HSeries& positive, long dim, long target) {
  long P = target + dim + 1;
  HSeries ep = hseries_exp_positive(positive.truncated(P), dim, P);
  std::vector<HClass> neg;
  HClass pw = h_unit(dim);
  Rational fact = 1;
  for (long j = 0; j <= dim; ++j) {
    if (j) {
      pw = pw * pole;
      fact *= j;
    }
    neg.push_back(pw * Cyclo(1 / fact));
  }
  std::reverse(neg.begin(), neg.end());
  HSeries ne = HSeries::from_coeffs(-dim, std::move(neg));
  return (ne * ep).truncated(target);
}

}  // namespace detail

// exp(sum_{m,l} s_{2m-1+l} B_{2m}/(2m)! ch_l(E) z^{2m-1}), without the s_{-1} term.
inline ZSeries em_asymptotics(const MultClass& S, const KClass& E, long order) {
  if (!E.target()) return ZSeries(HClass::constant(0, LambdaElement(1)), order);
  long dim = E.target()->dim();
  HClass chE = ch(E);
  HClass pole(dim);
  for (long l = 1; l <= dim; ++l) pole = pole + detail::degree_part(chE, l) * S.get(l - 1);
  long P = order + dim + 1;
  HSeries pos = HSeries::zero(P);
  for (long m = 1; 2 * m - 1 < P; ++m) {
    Cyclo b(bernoulli(2 * m) / factorial(2 * m));
    HClass coeff(dim);
    for (long l = 0; l <= dim; ++l) coeff = coeff + detail::degree_part(chE, l) * S.get(2 * m - 1 + l);
    pos = pos + HSeries::monomial(coeff * b, 2 * m - 1, P);
  }
  return detail::split_exp(pole, pos, dim, order);
}

// Independent assembly: E_k(z) = [a^k] (sum_l a^l ch_l) / (e^{az} - 1) + ch_k / 2, with 1/(e^t - 1) from series inversion.
inline ZSeries em_asymptotics_oracle(const MultClass& S, const KClass& E, long order) {
  if (!E.target()) return ZSeries(HClass::constant(0, LambdaElement(1)), order);
  long dim = E.target()->dim();
  HClass chE = ch(E);
  long kmax = S.s.empty() ? -1 : S.s.rbegin()->first;
  long P = order + dim + kmax + 4;
  // (e^t - 1)/t, then its inverse; g_j = [t^j] 1/(e^t - 1) = [t^{j+1}] t/(e^t - 1)
  std::vector<Cyclo> h;
  Rational f = 1;
  for (long j = 0; j < P + 2; ++j) {
    f = f / (j + 1);
    h.emplace_back(f);
  }
  CSeries tdt = CSeries::from_coeffs(0, h, P + 2).inverse(P + 2);
  auto g = [&](long j) { return tdt.coeff(j + 1); };
  HClass pole(dim);
  HSeries pos = HSeries::zero(P);
  for (auto& [k, sk] : S.s) {
    if (sk.is_zero()) continue;
    for (long l = 0; l <= std::min(dim, k + 1); ++l) {
      long e = k - l;
      HClass term = detail::degree_part(chE, l) * sk * g(e);
      if (e == -1) pole = pole + term;
      else pos = pos + HSeries::monomial(term, e, P);
    }
    if (k <= dim) pos = pos + HSeries::monomial(detail::degree_part(chE, k) * sk * Cyclo(make_rational(1, 2)), 0, P);
  }
  // the z^0 part must cancel
  HClass z0 = pos.coeff(0);
  if (!z0.is_zero()) throw std::logic_error("em oracle: constant term of the exponent does not cancel");
  return detail::split_exp(pole, pos, dim, order);
}

// ---------------------------------------------------------------------------
// Double series in Y and fractional powers of q (exponents in units of 1/den).

class FracQYSeries {
 public:
  FracQYSeries(long den, long max_y, long max_n) : den_(den), my_(max_y), mn_(max_n) {}
  static FracQYSeries one(long den, long max_y, long max_n) {
    FracQYSeries s(den, max_y, max_n);
    s.add(0, 0, Cyclo(1));
    return s;
  }
  long den() const { return den_; }
  long max_y() const { return my_; }
  long max_n() const { return mn_; }
  const std::map<std::pair<long, long>, Cyclo>& terms() const { return c_; }

  void add(long y, long n, const Cyclo& v) {
    if (y > my_ || n >= mn_ || v.is_zero()) return;
    auto& slot = c_[{y, n}];
    slot += v;
    if (slot.is_zero()) c_.erase({y, n});
  }
  Cyclo coeff(long y, long n) const {
    auto it = c_.find({y, n});
    return it == c_.end() ? Cyclo() : it->second;
  }
  friend FracQYSeries operator*(const FracQYSeries& a, const FracQYSeries& b) {
    FracQYSeries r(a.den_, std::min(a.my_, b.my_), std::min(a.mn_, b.mn_));
    for (auto& [ka, va] : a.c_)
      for (auto& [kb, vb] : b.c_) {
        if (ka.first + kb.first > r.my_ || ka.second + kb.second >= r.mn_) continue;
        r.add(ka.first + kb.first, ka.second + kb.second, va * vb);
      }
    return r;
  }
  friend FracQYSeries operator+(const FracQYSeries& a, const FracQYSeries& b) {
    FracQYSeries r = a;
    for (auto& [k, v] : b.c_) r.add(k.first, k.second, v);
    return r;
  }
  FracQYSeries scaled(const Cyclo& x) const {
    FracQYSeries r(den_, my_, mn_);
    for (auto& [k, v] : c_) r.add(k.first, k.second, v * x);
    return r;
  }
  // times (1 - c Y^y q^{n/den})
  void mul_factor(const Cyclo& c, long y, long n) {
    FracQYSeries f = one(den_, my_, mn_);
    f.add(y, n, -c);
    *this = *this * f;
  }
  // divided by (1 - c Y^y q^{n/den}), y >= 1
  void div_factor(const Cyclo& c, long y, long n) {
    FracQYSeries f = one(den_, my_, mn_);
    Cyclo p(1);
    for (long j = 1; j * y <= my_ && j * n < mn_; ++j) {
      p = p * c;
      f.add(j * y, j * n, p);
    }
    *this = *this * f;
  }
  // exp of a series with no Y^0 part, via n E_n = sum_j j X_j E_{n-j}
  FracQYSeries exp() const {
    std::vector<FracQYSeries> X(my_ + 1, FracQYSeries(den_, my_, mn_)), E(my_ + 1, FracQYSeries(den_, my_, mn_));
    for (auto& [k, v] : c_) {
      if (k.first == 0) throw std::invalid_argument("FracQYSeries::exp: nonzero Y^0 part");
      X[k.first].add(k.first, k.second, v);
    }
    E[0] = one(den_, my_, mn_);
    FracQYSeries out = E[0];
    for (long n = 1; n <= my_; ++n) {
      for (long j = 1; j <= n; ++j) E[n] = E[n] + (X[j] * E[n - j]).scaled(Cyclo(make_rational(j, n)));
      out = out + E[n];
    }
    return out;
  }
  friend bool operator==(const FracQYSeries& a, const FracQYSeries& b) {
    FracQYSeries d = a + b.scaled(Cyclo(-1));
    long my = std::min(a.my_, b.my_), mn = std::min(a.mn_, b.mn_);
    for (auto& [k, v] : d.c_)
      if (k.first <= my && k.second < mn) return false;
    return true;
  }
  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (auto& [k, v] : c_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << v.str() << ")*Y^" << k.first << "*q^(" << k.second << "/" << den_ << ")";
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  long den_, my_, mn_;
  std::map<std::pair<long, long>, Cyclo> c_;
};

struct EmProductReport : CheckReport {
  FracQYSeries product{1, 0, 0}, exponential{1, 0, 0};
};

// prod_{l=0}^{L} (1 - Y q^l) against exp(-sum_k Y^k / (k (1 - q^k))) below (Y^{order_y+1}, q^{order_q}).
inline EmProductReport em_log_product(long order_y, long order_q) {
  EmProductReport rep;
  rep.product = FracQYSeries::one(1, order_y, order_q);
  for (long l = 0; l <= order_q; ++l) rep.product.mul_factor(Cyclo(1), 1, l);
  FracQYSeries x(1, order_y, order_q);
  for (long k = 1; k <= order_y; ++k)
    for (long j = 0; k * j < order_q; ++j) x.add(k, k * j, Cyclo(make_rational(-1, k)));
  rep.exponential = x.exp();
  rep.expect(rep.product == rep.exponential, "product and exponential differ");
  for (long n = 0; n < order_q; ++n) {
    rep.expect(rep.exponential.coeff(1, n) == Cyclo(-1), "Y-coefficient is not -1/(1-q)");
    long pairs = 0;  // #{l < l' : l + l' = n}
    for (long l = 0; 2 * l < n; ++l) ++pairs;
    if (order_y >= 2) rep.expect(rep.exponential.coeff(2, n) == Cyclo(pairs), "Y^2-coefficient mismatch");
  }
  return rep;
}

struct RearrangeReport : CheckReport {
  Sector sector;
  FracQYSeries lhs{1, 0, 0}, rhs{1, 0, 0};
};

// Smallest exponent (units 1/M) of q in the k-th factor family. With literal = false every non-negative exponent
// congruent to -ks/M mod 1 occurs, so integral ks/M contributes a q^0 factor; literal = true starts at q^1 there.
inline long delta_start(long M, long k, long s, bool literal) {
  long n0 = mod_floor(-k * s, M);
  if (literal && n0 == 0) n0 = M;
  return n0;
}

inline FracQYSeries rearrange_lhs(long M, long s, long max_y, long max_q, bool literal = false) {
  FracQYSeries out = FracQYSeries::one(M, max_y, max_q * M);
  for (long k = 1; k < M; ++k) {
    Cyclo zk = root_of_unity(M, k);
    for (long n = delta_start(M, k, s, literal); n < max_q * M; n += M) out.mul_factor(zk, 1, n);
  }
  return out;
}

inline FracQYSeries rearrange_rhs(long M, long s, long max_y, long max_q) {
  Sector sec = sector_of(M, s);
  long r = sec.r;
  FracQYSeries out = FracQYSeries::one(M, max_y, max_q * M);
  for (long L = 0; r * r * L < max_q * M; ++L) out.mul_factor(Cyclo::root(sec.eta.pow(-L)), r, r * r * L);
  for (long l = 0; l < max_q; ++l) out.div_factor(Cyclo(1), 1, l * M);
  return out;
}

// prod_{u=1}^r (1 - Y zeta_r^u) = 1 - Y^r
inline bool roots_product_identity(long r) {
  std::vector<Cyclo> p{Cyclo(1)};
  for (long u = 1; u <= r; ++u) {
    Cyclo z = root_of_unity(r, u);
    std::vector<Cyclo> q(p.size() + 1);
    for (size_t i = 0; i < p.size(); ++i) {
      q[i] += p[i];
      q[i + 1] -= p[i] * z;
    }
    p = std::move(q);
  }
  for (long i = 0; i <= r; ++i) {
    Cyclo want = i == 0 ? Cyclo(1) : i == r ? Cyclo(-1) : Cyclo();
    if (!(p[i] == want)) return false;
  }
  return true;
}

inline RearrangeReport rearrange_product(long M, long s, long max_y, long max_q) {
  if (s < 1 || s > M) throw std::invalid_argument("rearrange_product: need 1 <= s <= M");
  RearrangeReport rep;
  rep.sector = sector_of(M, s);
  rep.lhs = rearrange_lhs(M, s, max_y, max_q);
  rep.rhs = rearrange_rhs(M, s, max_y, max_q);
  rep.expect(rep.lhs == rep.rhs, "rearranged products differ");
  rep.expect(roots_product_identity(rep.sector.r), "product over r-th roots is not 1 - Y^r");
  // the literal reading of the fractional part drops exactly (1 - Y^r)/(1 - Y)
  FracQYSeries lit = rearrange_lhs(M, s, max_y, max_q, true);
  lit.mul_factor(Cyclo(1), rep.sector.r, 0);
  lit.div_factor(Cyclo(1), 1, 0);
  rep.expect(lit == rep.rhs, "literal-fraction product is not off by (1-Y^r)/(1-Y)");
  return rep;
}

// ---------------------------------------------------------------------------
// Adams-weight graded multiplication series at q = 1 (u = q - 1).

struct GradedKSeries {
  TargetPtr target;
  long order = 0;
  std::vector<KSeries> w;  // w[n]: coefficient of Adams weight n

  GradedKSeries() = default;
  GradedKSeries(TargetPtr t, long max_weight, long ord) : target(std::move(t)), order(ord), w(max_weight + 1) {
    for (auto& x : w) x = KSeries::zero(ord);
  }
  long max_weight() const { return static_cast<long>(w.size()) - 1; }
  GradedKSeries truncated(long ord) const {
    GradedKSeries g = *this;
    g.order = ord;
    for (auto& x : g.w) x = x.truncated(ord);
    return g;
  }
  friend GradedKSeries operator+(const GradedKSeries& a, const GradedKSeries& b) {
    GradedKSeries r = a;
    for (size_t i = 0; i < r.w.size() && i < b.w.size(); ++i) r.w[i] = r.w[i] + b.w[i];
    r.order = std::min(a.order, b.order);
    return r;
  }
  friend bool operator==(const GradedKSeries& a, const GradedKSeries& b) {
    size_t n = std::min(a.w.size(), b.w.size());
    long ord = std::min(a.order, b.order);
    for (size_t i = 0; i < n; ++i)
      if (!(a.w[i].truncated(ord) - b.w[i].truncated(ord)).truncated(ord).is_zero()) return false;
    return true;
  }
  std::string str() const {
    std::ostringstream os;
    for (size_t i = 0; i < w.size(); ++i)
      if (!w[i].is_zero()) os << "[weight " << i << "] " << w[i].str() << "\n";
    return os.str();
  }
};

// exp in the graded algebra: n E_n = sum_j j X_j E_{n-j}. Weight-zero part of x must vanish. The components of
// x carry at most simple poles, so x should be known to order target + max_weight.
inline GradedKSeries graded_exp(const GradedKSeries& x, long target) {
  long W = x.max_weight();
  GradedKSeries e(x.target, W, x.order);
  e.w[0] = KSeries(KClass::scalar(x.target, LambdaElement(1)));
  for (long n = 1; n <= W; ++n) {
    KSeries acc = KSeries::zero(x.order);
    for (long j = 1; j <= n; ++j) {
      if (x.w[j].is_zero() || e.w[n - j].is_zero()) continue;
      acc = acc + kmul(x.w[j] * e.w[n - j], CSeries(Cyclo(make_rational(j, n))));
    }
    e.w[n] = acc;
    if (acc.prec() < target) throw TruncationError("graded_exp: working precision too low for the requested order");
  }
  return e.truncated(target);
}

inline GradedKSeries graded_product(const GradedKSeries& a, const GradedKSeries& b, long target) {
  long W = std::min(a.max_weight(), b.max_weight());
  GradedKSeries out(a.target, W, target);
  for (long i = 0; i <= W; ++i)
    for (long j = 0; i + j <= W; ++j) {
      if (a.w[i].is_zero() || b.w[j].is_zero()) continue;
      KSeries p = a.w[i] * b.w[j];
      if (p.prec() < target) throw TruncationError("graded_product: working precision too low");
      out.w[i + j] = out.w[i + j] + p.truncated(target);
    }
  return out.truncated(target);
}

inline KClass cotangent_minus_one(const TargetPtr& t) {
  KClass acc(t);
  for (auto& a : t->tangent_roots()) {
    auto c = t->from_ch(detail::hexp(-a, t->rank()));
    std::vector<LambdaElement> v;
    for (auto& x : c) v.emplace_back(x);
    acc += KClass(t, v);
  }
  return acc - KClass::scalar(t, LambdaElement(t->trivial_factor()));
}

namespace detail {

// 1 / (1 - c q^a) in u, exact below u^target (a simple pole when c = 1)
inline CSeries one_minus_inverse(const Cyclo& c, const Rational& a, long target) {
  long P = target + 2;
  CSeries den = CSeries(Cyclo(1)) - binomial_series(a, P) * CSeries(c);
  return den.inverse(target);
}

}  // namespace detail

// Adams-weight components of the Box exponent:
// weight n: [r | n] (r/n) Psi^n(T*-1) / (1 - eta^{-n/r} q^{n/m}) - (1/n) Psi^n(T*-1) / (1 - q^n)
inline GradedKSeries box_exponent(const TargetPtr& t, const Root& eta, long r, long order, long max_weight) {
  long m = eta.order();
  KClass A = cotangent_minus_one(t);
  long P = order + 2;
  GradedKSeries x(t, max_weight, order);
  for (long n = 1; n <= max_weight; ++n) {
    KClass An = adams_k(n, A);
    CSeries s = detail::one_minus_inverse(Cyclo(1), Rational(n), P) * CSeries(Cyclo(make_rational(-1, n)));
    if (n % r == 0) {
      Cyclo c = Cyclo::root(eta.pow(-(n / r)));
      s = s + detail::one_minus_inverse(c, make_rational(n, m), P) * CSeries(Cyclo(make_rational(r, n)));
    }
    x.w[n] = kscale(s.truncated(order), An);
  }
  return x;
}

inline GradedKSeries box_operator(const TargetPtr& t, const Root& eta, long r, long order, long max_weight) {
  return graded_exp(box_exponent(t, eta, r, order + max_weight + 1, max_weight), order);
}

inline GradedKSeries graded_invert_q(const GradedKSeries& x) {
  GradedKSeries out = x;
  for (auto& s : out.w) s = invert_q(s, x.order);
  return out;
}

// Box(eta; q^{-1}) Box(eta^{-1}; q) against exp(sum_k (Psi^{kr} - Psi^k)(T*-1)/k), weight by weight.
inline CheckReport box_pair_check(const TargetPtr& t, const Root& eta, long r, long order, long max_weight) {
  CheckReport rep;
  GradedKSeries lhs_exp =
      graded_invert_q(box_exponent(t, eta, r, order, max_weight)) + box_exponent(t, eta.inverse(), r, order, max_weight);
  KClass A = cotangent_minus_one(t);
  GradedKSeries rhs_exp(t, max_weight, order);
  for (long n = 1; n <= max_weight; ++n) {
    KClass An = adams_k(n, A);
    KClass c = An * Cyclo(make_rational(-1, n));
    if (n % r == 0) c += An * Cyclo(make_rational(r, n));
    rhs_exp.w[n] = KSeries(c, order);
  }
  rep.expect(lhs_exp == rhs_exp, "exponents differ");
  long P = order + 2 * max_weight + 2;
  GradedKSeries l = graded_exp(graded_invert_q(box_exponent(t, eta, r, P, max_weight)), order + max_weight + 1);
  GradedKSeries rr = graded_exp(box_exponent(t, eta.inverse(), r, P, max_weight), order + max_weight + 1);
  rep.expect(graded_product(l, rr, order) == graded_exp(rhs_exp, order), "exponentiated sides differ");
  return rep;
}

// Adams-weight components of log Delta_{e^{2 pi i k/M}} in sector h^s:
// weight n: zeta^{kn} q^{n e0} Psi^n(T*-1) / (n (1 - q^n)), e0 the starting exponent of the factor family.
inline GradedKSeries delta_exponent(const TargetPtr& t, long M, long k, long s, long order, long max_weight,
                                    bool literal = false) {
  if (k < 1 || k >= M) throw std::invalid_argument("delta_tseng: need 1 <= k <= M-1");
  KClass A = cotangent_minus_one(t);
  long P = order + 2;
  Rational e0(delta_start(M, k, s, literal), M);
  GradedKSeries x(t, max_weight, order);
  for (long n = 1; n <= max_weight; ++n) {
    CSeries sc = binomial_series(e0 * n, P) * detail::one_minus_inverse(Cyclo(1), Rational(n), P);
    Cyclo z = root_of_unity(M, k * n);
    x.w[n] = kscale((sc * CSeries(z * Cyclo(make_rational(1, n)))).truncated(order), adams_k(n, A));
  }
  return x;
}

inline GradedKSeries delta_tseng(const TargetPtr& t, long M, long k, long s, long order, long max_weight) {
  return graded_exp(delta_exponent(t, M, k, s, order + max_weight + 1, max_weight), order);
}

// prod_{k=1}^{M-1} Delta_k = Box at the sector of h^s.
inline CheckReport delta_composite_check(const TargetPtr& t, long M, long s, long order, long max_weight) {
  CheckReport rep;
  Sector sec = sector_of(M, s);
  long P = order + max_weight + 1;
  GradedKSeries sum(t, max_weight, P);
  for (long k = 1; k < M; ++k) sum = sum + delta_exponent(t, M, k, s, P, max_weight);
  GradedKSeries box = box_exponent(t, sec.eta, sec.r, P, max_weight);
  rep.expect(sum == box, "composite Delta exponent differs from the Box exponent");
  rep.expect(graded_exp(sum, order) == graded_exp(box, order), "composite Delta differs from Box");
  return rep;
}

// ---------------------------------------------------------------------------
// Quantum Chern character: sum f_k (q-1)^k -> sqrt(td) sum ch(f_k) (e^z - 1)^k.

inline ZSeries qch(const TargetPtr& t, const KSeries& f, long order) {
  long dim = t->dim();
  HSeries h = f.map([](const KClass& a) { return a.target() ? ch(a) : HClass(); });
  long pole = f.is_zero() ? 0 : std::max(0L, -f.valuation());
  long P = order + pole + 2;
  CSeries w = exp_series(Rational(1), P + 1) - CSeries(Cyclo(1));
  CSeries winv = w.inverse(P);
  HSeries z = h.compose(w, &winv, order);
  HClass std_ = HClass::from_rational(dim, t->sqrt_todd());
  return z.map([&](const HClass& c) { return std_ * c; });
}

}  // namespace kadelic
