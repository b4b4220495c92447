#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kadelic/series.hpp"
#include "kadelic/target.hpp"

namespace kadelic {

// K-valued truncated Laurent series in u = q - 1.
using KSeries = Series<KClass>;

inline KSeries kmul(const KSeries& a, const CSeries& b) {
  return KSeries::multiply(a, b, [](const KClass& x, const Cyclo& y) { return KClass(x * y); });
}
inline KSeries kscale(const CSeries& b, const KClass& a) {
  return b.map([&](const Cyclo& x) { return KClass(a * x); });
}

// 1 / (a + b u)
inline CSeries linear_inverse(const Cyclo& a, const Cyclo& b, long target) {
  Cyclo ainv = a.inverse();
  Cyclo ratio = -b * ainv;
  std::vector<Cyclo> c;
  Cyclo p = ainv;
  for (long n = 0; n < target; ++n) {
    c.push_back(p);
    p = p * ratio;
  }
  return CSeries::from_coeffs(0, std::move(c), target);
}

struct PartialFractionForm;

// Rational function of q with K coefficients and poles only at 0, infinity and roots of unity:
//   sum_k num[k] q^k / prod_z (1 - q/z)^{den[z]}
class QRational {
 public:
  QRational() = default;
  explicit QRational(TargetPtr t) : t_(std::move(t)) {}

  static QRational monomial(const KClass& a, long k) {
    QRational f(a.target());
    if (!a.is_zero()) f.num_[k] = a;
    return f;
  }
  // a / (1 - q/z)^j
  static QRational pole(const KClass& a, const Root& z, int j) {
    QRational f = monomial(a, 0);
    if (j > 0) f.den_[z] = j;
    f.reduce();
    return f;
  }
  // a (z^{-1} q)^k / (1 - z^{-1} q)^{k+1}
  static QRational generator(const KClass& a, const Root& z, int k) {
    QRational f = monomial(a * Cyclo::root(z.inverse()).pow(k), k);
    f.den_[z] = k + 1;
    f.reduce();
    return f;
  }
  static QRational from_parts(TargetPtr t, std::map<long, KClass> num, std::map<Root, int> den) {
    QRational f(std::move(t));
    for (auto& [k, c] : num)
      if (!c.is_zero()) f.num_[k] = c;
    for (auto& [z, e] : den) {
      if (e < 0) throw std::invalid_argument("QRational: negative denominator multiplicity");
      if (e > 0) f.den_[z] = e;
    }
    f.reduce();
    return f;
  }

  const TargetPtr& target() const { return t_; }
  const std::map<long, KClass>& numerator() const { return num_; }
  const std::map<Root, int>& denominator() const { return den_; }
  bool is_zero() const { return num_.empty(); }
  bool is_laurent_polynomial() const { return den_.empty(); }
  int pole_order(const Root& z) const {
    auto it = den_.find(z);
    return it == den_.end() ? 0 : it->second;
  }
  long total_pole_order() const {
    long s = 0;
    for (auto& [z, e] : den_) s += e;
    return s;
  }

  QRational operator-() const {
    QRational r = *this;
    for (auto& [k, c] : r.num_) c = -c;
    return r;
  }
  friend QRational operator+(const QRational& a, const QRational& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    std::map<Root, int> L = a.den_;
    for (auto& [z, e] : b.den_) L[z] = std::max(L[z], e);
    QRational r(a.t_ ? a.t_ : b.t_);
    r.den_ = L;
    auto na = mul_poly(a.num_, cofactor(L, a.den_));
    auto nb = mul_poly(b.num_, cofactor(L, b.den_));
    for (auto& [k, c] : nb) na[k] += c;
    for (auto& [k, c] : na)
      if (!c.is_zero()) r.num_[k] = c;
    r.reduce();
    return r;
  }
  friend QRational operator-(const QRational& a, const QRational& b) { return a + (-b); }
  QRational& operator+=(const QRational& o) { return *this = *this + o; }
  QRational& operator-=(const QRational& o) { return *this = *this - o; }
  friend bool operator==(const QRational& a, const QRational& b) { return (a - b).is_zero(); }
  friend bool operator!=(const QRational& a, const QRational& b) { return !(a == b); }

  QRational scaled(const LambdaElement& s) const {
    QRational r(t_);
    r.den_ = den_;
    for (auto& [k, c] : num_) {
      KClass x = c * s;
      if (!x.is_zero()) r.num_[k] = x;
    }
    r.reduce();
    return r;
  }
  QRational scaled(const Cyclo& s) const { return scaled(LambdaElement(s)); }
  QRational times_q(long k) const {
    QRational r(t_);
    r.den_ = den_;
    for (auto& [e, c] : num_) r.num_[e + k] = c;
    return r;
  }
  // Product using the ring structure of K.
  friend QRational operator*(const QRational& a, const QRational& b) {
    return combine(a, b, [](const KClass& x, const KClass& y) { return x * y; }, a.t_ ? a.t_ : b.t_);
  }
  // Lambda-valued function q -> pair(a(q), b(q)), represented over the point target.
  template <class Pair>
  static QRational bilinear(const QRational& a, const QRational& b, Pair&& pair) {
    auto pt = TargetGeometry::point();
    return combine(
        a, b, [&](const KClass& x, const KClass& y) { return KClass::scalar(pt, pair(x, y)); }, pt);
  }

  // f(q^{-1})
  QRational inverse_q() const {
    // 1/(1 - q^{-1}/z)^e = (-z q)^e / (1 - q z)^e
    std::map<long, KClass> num;
    for (auto& [k, c] : num_) num[-k] = c;
    std::map<Root, int> den;
    long shift = 0;
    Cyclo factor(1);
    for (auto& [z, e] : den_) {
      den[z.inverse()] = e;
      shift += e;
      factor = factor * (-Cyclo::root(z)).pow(e);
    }
    QRational r(t_);
    r.den_ = den;
    for (auto& [k, c] : num) r.num_[k + shift] = c * factor;
    r.reduce();
    return r;
  }

  // Psi^r: coefficients by adams_k, q -> q^r.
  QRational adams_q(long r) const {
    if (r < 1) throw std::invalid_argument("adams_q: r must be >= 1");
    if (r == 1) return *this;
    QRational out(t_);
    for (auto& [k, c] : num_) {
      KClass x = adams_k(r, c);
      if (!x.is_zero()) out.num_[k * r] = x;
    }
    // (1 - q^r/z) = prod over r-th roots xi of z of (1 - q/xi)
    for (auto& [z, e] : den_)
      for (long j = 0; j < r; ++j) out.den_[Root(z.m * r, z.t + j * z.m)] += e;
    out.reduce();
    return out;
  }

  // Coefficients of the Laurent expansion at q = 0 for degrees <= upto.
  std::map<long, KClass> expand_at_zero(long upto) const {
    std::map<long, KClass> out;
    if (num_.empty()) return out;
    long lo = num_.begin()->first;
    long len = upto - lo + 1;
    if (len <= 0) return out;
    std::vector<Cyclo> s = denominator_series_at_zero(len);
    for (auto& [k, c] : num_)
      for (long d = k; d <= upto; ++d) {
        const Cyclo& x = s[d - k];
        if (!x.is_zero()) out[d] += c * x;
      }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
  }

  // Laurent expansion in u where q = z (1 + u), known for exponents < target.
  KSeries local_expansion(const Root& z, long target) const {
    int ez = pole_order(z);
    long P = target + ez;
    if (num_.empty()) return KSeries::zero(target);
    CSeries s(Cyclo(1));
    Cyclo zc = Cyclo::root(z);
    for (auto& [zj, e] : den_) {
      if (zj == z) continue;
      // 1 - (z/zj)(1+u)
      Cyclo w = zc * Cyclo::root(zj.inverse());
      CSeries inv = linear_inverse(Cyclo(1) - w, -w, P);
      for (int i = 0; i < e; ++i) s = (s * inv).truncated(P);
    }
    KSeries n = KSeries::zero(P);
    for (auto& [k, c] : num_) {
      CSeries b = binomial_series(Rational(k), P);
      n = n + kscale(b, c * zc.pow(k));
    }
    KSeries u = kmul(n, s).truncated(P);
    u = u.shifted(-ez);
    if (ez % 2) u = -u;
    return u;
  }

  // Residues of f(q) dq.
  KClass residue_at(const Root& z) const {
    KSeries e = local_expansion(z, 0);
    return e.coeff(-1) * Cyclo::root(z);
  }
  KClass residue_zero() const {
    auto e = expand_at_zero(-1);
    auto it = e.find(-1);
    return it == e.end() ? KClass() : it->second;
  }
  KClass residue_infinity() const {
    if (num_.empty()) return KClass();
    long E = total_pole_order();
    long hi = num_.rbegin()->first;
    long need = hi + 1 - E;  // largest index into T(w) = prod (1 - w z)^{-e}
    if (need < 0) return KClass();
    Cyclo C(1);
    std::vector<Cyclo> T(need + 1, Cyclo(0));
    T[0] = Cyclo(1);
    for (auto& [z, e] : den_) {
      Cyclo zc = Cyclo::root(z);
      C = C * (-zc).pow(e);
      for (int i = 0; i < e; ++i)
        for (long n = 1; n <= need; ++n) T[n] = T[n] + zc * T[n - 1];  // multiply by 1/(1 - w z)
    }
    KClass acc;
    for (auto& [k, c] : num_) {
      long idx = k + 1 - E;
      if (idx >= 0 && idx <= need && !T[idx].is_zero()) acc += c * T[idx];
    }
    return -(acc * C);
  }

  PartialFractionForm partial_fractions() const;

  std::string str() const {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (auto& [k, c] : num_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.str() << ")*q^" << k;
    }
    if (first) os << "0";
    os << "]";
    for (auto& [z, e] : den_) os << " / (1 - q/" << z.str() << ")^" << e;
    return os.str();
  }

  // Text serialization: a target line, one numerator record per q-power, then denominator records.
  //   num <k> <c_0> ... <c_{n-1}>      each c_i is "N:a_0,...,a_{N'-1}", the power-basis coordinates at level N
  //   den <m> <t> <multiplicity>
  // Only constant ground-ring coefficients are serialized.
  std::string serialize() const {
    std::ostringstream os;
    os << "target " << (t_ ? t_->name() : "none") << "\n";
    for (auto& [k, c] : num_) {
      os << "num " << k;
      for (auto& x : c.coords()) {
        if (!x.is_constant()) throw std::invalid_argument("serialize: only constant coefficients are supported");
        Cyclo v = x.constant_term();
        os << " " << v.level() << ":";
        for (size_t i = 0; i < v.coords().size(); ++i) os << (i ? "," : "") << v.coords()[i].get_str();
      }
      os << "\n";
    }
    for (auto& [z, e] : den_) os << "den " << z.m << " " << z.t << " " << e << "\n";
    return os.str();
  }

  static QRational deserialize(const std::string& text) {
    std::istringstream in(text);
    std::string line, word;
    TargetPtr t;
    std::map<long, KClass> num;
    std::map<Root, int> den;
    long lineno = 0;
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("QRational text, line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
      ++lineno;
      std::istringstream ls(line);
      if (!(ls >> word)) continue;
      if (word == "target") {
        std::string name;
        ls >> name;
        t = load_target(name);
      } else if (word == "num") {
        if (!t) fail("num record before target");
        long k;
        if (!(ls >> k)) fail("missing q-power");
        std::vector<LambdaElement> coords;
        std::string tok;
        while (ls >> tok) {
          auto colon = tok.find(':');
          if (colon == std::string::npos) fail("coefficient without level");
          long N = std::stol(tok.substr(0, colon));
          std::vector<Rational> v;
          std::stringstream cs(tok.substr(colon + 1));
          std::string a;
          while (std::getline(cs, a, ',')) v.push_back(parse_rational(a));
          coords.push_back(LambdaElement(Cyclo::from_exponents(N, v)));
        }
        if (coords.size() != t->rank()) fail("expected " + std::to_string(t->rank()) + " coefficients");
        num[k] = KClass(t, coords);
      } else if (word == "den") {
        long m, tt;
        int e;
        if (!(ls >> m >> tt >> e) || m < 1 || e < 1) fail("malformed denominator record");
        den[Root(m, tt)] += e;
      } else {
        fail("unknown record '" + word + "'");
      }
    }
    if (!t) fail("missing target line");
    return from_parts(t, num, den);
  }

 private:
  TargetPtr t_;
  std::map<long, KClass> num_;
  std::map<Root, int> den_;

  using CPoly = std::map<long, Cyclo>;

  // prod over z of (1 - q/z)^{L_z - e_z}
  static CPoly cofactor(const std::map<Root, int>& L, const std::map<Root, int>& have) {
    CPoly p{{0, Cyclo(1)}};
    for (auto& [z, e] : L) {
      auto it = have.find(z);
      int k = e - (it == have.end() ? 0 : it->second);
      Cyclo c = -Cyclo::root(z.inverse());
      for (int i = 0; i < k; ++i) {
        CPoly q;
        for (auto& [d, x] : p) {
          q[d] += x;
          q[d + 1] += x * c;
        }
        p = q;
      }
    }
    return p;
  }
  static std::map<long, KClass> mul_poly(const std::map<long, KClass>& a, const CPoly& p) {
    std::map<long, KClass> out;
    for (auto& [k, c] : a)
      for (auto& [d, x] : p)
        if (!x.is_zero()) out[k + d] += c * x;
    return out;
  }
  template <class F>
  static QRational combine(const QRational& a, const QRational& b, F&& f, TargetPtr t) {
    QRational r(std::move(t));
    if (a.is_zero() || b.is_zero()) return r;
    r.den_ = a.den_;
    for (auto& [z, e] : b.den_) r.den_[z] += e;
    std::map<long, KClass> n;
    for (auto& [i, x] : a.num_)
      for (auto& [j, y] : b.num_) n[i + j] += f(x, y);
    for (auto& [k, c] : n)
      if (!c.is_zero()) r.num_[k] = c;
    r.reduce();
    return r;
  }

  std::vector<Cyclo> denominator_series_at_zero(long len) const {
    std::vector<Cyclo> s(len, Cyclo(0));
    s[0] = Cyclo(1);
    for (auto& [z, e] : den_) {
      Cyclo zi = Cyclo::root(z.inverse());
      for (int i = 0; i < e; ++i)
        for (long n = 1; n < len; ++n) s[n] = s[n] + zi * s[n - 1];
    }
    return s;
  }

  // Cancels common root factors so that the representation is unique.
  void reduce() {
    if (num_.empty()) {
      den_.clear();
      return;
    }
    for (auto it = den_.begin(); it != den_.end();) {
      Cyclo zc = Cyclo::root(it->first);
      Cyclo c = Cyclo::root(it->first.inverse());
      while (it->second > 0) {
        KClass val;
        for (auto& [k, x] : num_) val += x * zc.pow(k);
        if (!val.is_zero()) break;
        // divide by (1 - c q)
        long lo = num_.begin()->first, hi = num_.rbegin()->first;
        std::map<long, KClass> s;
        KClass prev;
        for (long k = lo; k < hi; ++k) {
          auto f = num_.find(k);
          KClass cur = (f == num_.end() ? KClass() : f->second) + prev * c;
          if (!cur.is_zero()) s[k] = cur;
          prev = cur;
        }
        num_ = std::move(s);
        --it->second;
        if (num_.empty()) break;
      }
      if (num_.empty()) {
        den_.clear();
        return;
      }
      it = it->second == 0 ? den_.erase(it) : std::next(it);
    }
  }
};

struct PartialFractionForm {
  TargetPtr target;
  std::map<long, KClass> poly_part;
  // parts[z][j-1] = coefficient of (1 - q/z)^{-j}
  std::map<Root, std::vector<KClass>> fraction_parts;

  QRational principal_parts() const {
    QRational acc(target);
    for (auto& [z, cs] : fraction_parts)
      for (size_t j = 0; j < cs.size(); ++j)
        if (!cs[j].is_zero()) acc += QRational::pole(cs[j], z, static_cast<int>(j + 1));
    return acc;
  }
  QRational polynomial() const { return QRational::from_parts(target, poly_part, {}); }
  QRational reassemble() const { return polynomial() + principal_parts(); }
};

inline PartialFractionForm QRational::partial_fractions() const {
  PartialFractionForm pf;
  pf.target = t_;
  for (auto& [z, e] : den_) {
    KSeries loc = local_expansion(z, 0);
    std::vector<KClass> cs(e);
    for (int j = 1; j <= e; ++j) {
      // u^{-j} = (-1)^j (1 - q/z)^{-j}
      KClass a = loc.coeff(-j);
      cs[j - 1] = (j % 2) ? -a : a;
    }
    pf.fraction_parts[z] = cs;
  }
  QRational rest = *this - pf.principal_parts();
  if (!rest.is_laurent_polynomial()) throw std::logic_error("partial fractions: remainder still has poles");
  pf.poly_part = rest.numerator();
  return pf;
}

inline PartialFractionForm partial_fractions(const QRational& f) { return f.partial_fractions(); }

// Decomposition f = plus + minus with plus a Laurent polynomial and minus the sum of principal parts.
inline std::pair<QRational, QRational> project_polarization(const QRational& f) {
  auto pf = f.partial_fractions();
  return {pf.polynomial(), pf.principal_parts()};
}

inline QRational adams_q(long r, const QRational& f) { return f.adams_q(r); }

// Psi^r(f(q^{1/m}/zeta)) expanded in u = q - 1, for coefficients below `order`.
inline KSeries expand_at(const QRational& f, const Root& zeta, long m, long r, long order) {
  if (m != zeta.order()) throw std::invalid_argument("expand_at: m must equal the order of zeta");
  if (r < 1) throw std::invalid_argument("expand_at: r must be >= 1");
  if (f.is_zero()) return KSeries::zero(order);
  long poles = 0;
  Root zi = zeta.inverse();
  for (auto& [z, e] : f.denominator())
    if ((zi * z.inverse()).is_one()) poles += e;
  long P = order + 2 * poles + 2;
  CSeries y = binomial_series(make_rational(r, m), P);
  CSeries d(Cyclo(1));
  for (auto& [z, e] : f.denominator()) {
    Root c = zi * z.inverse();
    CSeries factor = CSeries(Cyclo(1)) - y.scaled(Cyclo::root(c));
    CSeries inv = factor.inverse(P);
    for (int i = 0; i < e; ++i) d = d * inv;
  }
  KSeries n = KSeries::zero(P);
  Cyclo zic = Cyclo::root(zi);
  for (auto& [k, c] : f.numerator()) {
    CSeries b = binomial_series(make_rational(k * r, m), P);
    n = n + kscale(b, adams_k(r, c) * zic.pow(k));
  }
  KSeries out = kmul(n, d);
  if (out.prec() < order) throw std::logic_error("expand_at: insufficient working precision");
  return out.truncated(order);
}

}  // namespace kadelic
