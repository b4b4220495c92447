#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kadelic {

using Integer = mpz_class;
using Rational = mpq_class;

struct DivisionByZero : std::domain_error {
  using std::domain_error::domain_error;
};

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw DivisionByZero("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational parse_rational(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("not a rational number: " + s);
  if (r.get_den() == 0) throw DivisionByZero("zero denominator in " + s);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline long gcd_l(long a, long b) { return std::gcd(a, b); }
inline long lcm_l(long a, long b) { return a / std::gcd(a, b) * b; }

inline long mod_floor(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

// Inverse of a modulo m; requires gcd(a, m) = 1.
inline long mod_inverse(long a, long m) {
  if (m == 1) return 0;
  long g = m, x = 0, x1 = 1, b = mod_floor(a, m);
  long mm = m;
  while (b != 0) {
    long q = g / b;
    long t = g - q * b;
    g = b;
    b = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) throw std::invalid_argument("mod_inverse: arguments are not coprime");
  return mod_floor(x, mm);
}

inline std::vector<long> prime_factors(long n) {
  std::vector<long> ps;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

inline std::vector<long> divisors(long n) {
  std::vector<long> ds;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) ds.push_back(d);
  return ds;
}

inline long euler_phi(long n) {
  long r = n;
  for (long p : prime_factors(n)) r = r / p * (p - 1);
  return r;
}

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

inline Integer factorial(long n) {
  Integer r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Integer binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

// Generalized binomial coefficient C(a, k) for rational a.
inline Rational gen_binomial(const Rational& a, long k) {
  Rational r = 1;
  for (long i = 0; i < k; ++i) r = r * (a - i) / (i + 1);
  return r;
}

namespace detail {
inline std::vector<long> poly_exact_div(std::vector<long> num, const std::vector<long>& den) {
  const long dd = static_cast<long>(den.size()) - 1;
  std::vector<long> q(num.size() - dd, 0);
  for (long i = static_cast<long>(num.size()) - 1; i >= dd; --i) {
    long c = num[i];
    q[i - dd] = c;
    for (long j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
  }
  return q;
}
}  // namespace detail

// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
inline const std::vector<long>& cyclotomic_polynomial(long n) {
  static std::mutex mu;
  static std::map<long, std::vector<long>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  for (long d : divisors(n)) {
    if (cache.count(d)) continue;
    std::vector<long> num(d + 1, 0);
    num[0] = -1;
    num[d] = 1;
    for (long e : divisors(d))
      if (e < d) num = detail::poly_exact_div(num, cache.at(e));
    cache[d] = num;
  }
  return cache.at(n);
}

// A root of unity exp(2 pi i t / m), stored with gcd(t, m) = 1 and 0 <= t < m.
struct Root {
  long m = 1;
  long t = 0;

  Root() = default;
  Root(long order, long exponent) {
    if (order <= 0) throw std::invalid_argument("root of unity needs a positive order");
    long e = mod_floor(exponent, order);
    long g = std::gcd(e, order);
    if (e == 0) g = order;
    m = order / g;
    t = m == 1 ? 0 : e / g;
  }
  long order() const { return m; }
  Root inverse() const { return Root(m, -t); }
  Root operator*(const Root& o) const {
    long L = lcm_l(m, o.m);
    return Root(L, t * (L / m) + o.t * (L / o.m));
  }
  Root pow(long k) const { return Root(m, t * k); }
  bool is_one() const { return m == 1; }
  auto operator<=>(const Root&) const = default;
  std::string str() const {
    if (m == 1) return "1";
    return "E(" + std::to_string(m) + ")^" + std::to_string(t);
  }
};

// All roots of unity of exact order m.
inline std::vector<Root> primitive_roots(long m) {
  std::vector<Root> out;
  for (long t = 0; t < m; ++t)
    if (std::gcd(t, m) == 1 || m == 1) out.emplace_back(m, t);
  return out;
}

// All roots of unity with order at most max_order, ordered by (order, exponent).
inline std::vector<Root> roots_up_to(long max_order) {
  std::vector<Root> out;
  for (long m = 1; m <= max_order; ++m)
    for (auto& z : primitive_roots(m)) out.push_back(z);
  return out;
}

// Element of Q(zeta_n): power basis zeta_n^0..zeta_n^{phi(n)-1} modulo Phi_n,
// kept at its conductor so that equal values have identical representations.
class Cyclo {
 public:
  Cyclo() : n_(1), c_(1, Rational(0)) {}
  Cyclo(int v) : n_(1), c_(1, Rational(v)) {}
  Cyclo(long v) : n_(1), c_(1, Rational(v)) {}
  Cyclo(const Rational& v) : n_(1), c_(1, v) {}
  Cyclo(const Integer& v) : n_(1), c_(1, Rational(v)) {}

  // Builds sum_e coeffs[e] * zeta_N^e for arbitrary exponents (folded mod N).
  static Cyclo from_exponents(long N, const std::vector<Rational>& coeffs) {
    if (N <= 0) throw std::invalid_argument("cyclotomic level must be positive");
    Cyclo x;
    x.n_ = N;
    x.c_ = reduce(N, coeffs);
    x.normalize();
    return x;
  }

  static Cyclo root(const Root& z) {
    if (z.m == 1) return Cyclo(1);
    std::vector<Rational> v(z.m, Rational(0));
    v[z.t] = 1;
    return from_exponents(z.m, v);
  }

  long level() const { return n_; }
  const std::vector<Rational>& coords() const { return c_; }

  bool is_zero() const {
    return n_ == 1 && sgn(c_[0]) == 0;
  }
  bool is_rational() const { return n_ == 1; }
  const Rational& rational() const {
    if (n_ != 1) throw std::logic_error("cyclotomic number is not rational");
    return c_[0];
  }

  // Coordinates in the reduced power basis at level N (a multiple of the conductor).
  std::vector<Rational> lift(long N) const {
    if (N % n_ != 0) throw std::invalid_argument("lift target level is not a multiple");
    if (N == n_) return c_;
    long step = N / n_;
    std::vector<Rational> v(N, Rational(0));
    for (size_t j = 0; j < c_.size(); ++j)
      if (sgn(c_[j]) != 0) v[(j * step) % N] += c_[j];
    return reduce(N, v);
  }

  Cyclo operator-() const {
    Cyclo r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  friend Cyclo operator+(const Cyclo& a, const Cyclo& b) {
    if (a.n_ == 1 && b.n_ == 1) return Cyclo(a.c_[0] + b.c_[0]);
    long L = lcm_l(a.n_, b.n_);
    auto x = a.lift(L);
    auto y = b.lift(L);
    for (size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    Cyclo r;
    r.n_ = L;
    r.c_ = std::move(x);
    r.normalize();
    return r;
  }
  friend Cyclo operator-(const Cyclo& a, const Cyclo& b) { return a + (-b); }
  friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
    if (a.n_ == 1 && b.n_ == 1) return Cyclo(a.c_[0] * b.c_[0]);
    if (a.n_ == 1 || b.n_ == 1) {
      const Cyclo& s = a.n_ == 1 ? a : b;
      const Cyclo& v = a.n_ == 1 ? b : a;
      if (sgn(s.c_[0]) == 0) return Cyclo();
      Cyclo r = v;
      for (auto& c : r.c_) c *= s.c_[0];
      return r;
    }
    long L = lcm_l(a.n_, b.n_);
    auto x = a.lift(L);
    auto y = b.lift(L);
    std::vector<Rational> p(x.size() + y.size() - 1, Rational(0));
    for (size_t i = 0; i < x.size(); ++i) {
      if (sgn(x[i]) == 0) continue;
      for (size_t j = 0; j < y.size(); ++j)
        if (sgn(y[j]) != 0) p[i + j] += x[i] * y[j];
    }
    Cyclo r;
    r.n_ = L;
    r.c_ = reduce_phi(L, std::move(p));
    r.normalize();
    return r;
  }
  friend Cyclo operator/(const Cyclo& a, const Cyclo& b) { return a * b.inverse(); }
  Cyclo& operator+=(const Cyclo& o) { return *this = *this + o; }
  Cyclo& operator-=(const Cyclo& o) { return *this = *this - o; }
  Cyclo& operator*=(const Cyclo& o) { return *this = *this * o; }
  Cyclo& operator/=(const Cyclo& o) { return *this = *this / o; }

  friend bool operator==(const Cyclo& a, const Cyclo& b) { return a.n_ == b.n_ && a.c_ == b.c_; }
  friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }
  friend bool operator<(const Cyclo& a, const Cyclo& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return a.c_ < b.c_;
  }

  // Multiplicative inverse by solving (x * y = 1) in the power basis.
  Cyclo inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero cyclotomic number");
    if (n_ == 1) return Cyclo(Rational(1) / c_[0]);
    const size_t d = c_.size();
    // column j of the multiplication matrix is x * zeta^j
    std::vector<std::vector<Rational>> A(d, std::vector<Rational>(d + 1, Rational(0)));
    for (size_t j = 0; j < d; ++j) {
      std::vector<Rational> p(d + j, Rational(0));
      for (size_t i = 0; i < d; ++i) p[i + j] = c_[i];
      auto col = reduce_phi(n_, std::move(p));
      for (size_t i = 0; i < d; ++i) A[i][j] = col[i];
    }
    A[0][d] = 1;
    for (size_t col = 0; col < d; ++col) {
      size_t piv = col;
      while (piv < d && sgn(A[piv][col]) == 0) ++piv;
      if (piv == d) throw DivisionByZero("singular multiplication matrix");
      std::swap(A[piv], A[col]);
      Rational inv = Rational(1) / A[col][col];
      for (size_t k = col; k <= d; ++k) A[col][k] *= inv;
      for (size_t r = 0; r < d; ++r) {
        if (r == col || sgn(A[r][col]) == 0) continue;
        Rational f = A[r][col];
        for (size_t k = col; k <= d; ++k) A[r][k] -= f * A[col][k];
      }
    }
    Cyclo y;
    y.n_ = n_;
    y.c_.assign(d, Rational(0));
    for (size_t i = 0; i < d; ++i) y.c_[i] = A[i][d];
    y.normalize();
    return y;
  }

  Cyclo pow(long k) const {
    if (k < 0) return inverse().pow(-k);
    Cyclo r(1), b = *this;
    while (k) {
      if (k & 1) r *= b;
      b *= b;
      k >>= 1;
    }
    return r;
  }

  // Galois conjugate zeta -> zeta^a, gcd(a, level) = 1.
  Cyclo galois(long a) const {
    if (n_ == 1) return *this;
    std::vector<Rational> v(n_, Rational(0));
    for (size_t j = 0; j < c_.size(); ++j) v[mod_floor(static_cast<long>(j) * a, n_)] += c_[j];
    return from_exponents(n_, v);
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t j = 0; j < c_.size(); ++j) {
      if (sgn(c_[j]) == 0) continue;
      if (!first) os << (sgn(c_[j]) > 0 ? " + " : " - ");
      else if (sgn(c_[j]) < 0) os << "-";
      Rational a = abs(c_[j]);
      if (j == 0) os << a.get_str();
      else {
        if (a != 1) os << a.get_str() << "*";
        os << "E(" << n_ << ")";
        if (j != 1) os << "^" << j;
      }
      first = false;
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  long n_;
  std::vector<Rational> c_;

  static std::vector<Rational> reduce(long N, const std::vector<Rational>& coeffs) {
    std::vector<Rational> folded(N, Rational(0));
    for (size_t e = 0; e < coeffs.size(); ++e)
      if (sgn(coeffs[e]) != 0) folded[e % N] += coeffs[e];
    return reduce_phi(N, std::move(folded));
  }

  // Reduces a polynomial in zeta_N modulo Phi_N, returning phi(N) coordinates.
  static std::vector<Rational> reduce_phi(long N, std::vector<Rational> p) {
    const auto& phi = cyclotomic_polynomial(N);
    const long d = static_cast<long>(phi.size()) - 1;
    for (long i = static_cast<long>(p.size()) - 1; i >= d; --i) {
      if (sgn(p[i]) == 0) continue;
      Rational c = p[i];
      for (long j = 0; j <= d; ++j)
        if (phi[j] != 0) p[i - d + j] -= c * phi[j];
    }
    p.resize(d, Rational(0));
    if (d == 0) p.assign(1, Rational(0));
    return p;
  }

  // Moves the representation down to the conductor of the value.
  void normalize() {
    bool changed = true;
    while (changed && n_ > 1) {
      changed = false;
      bool rest_zero = true;
      for (size_t j = 1; j < c_.size(); ++j)
        if (sgn(c_[j]) != 0) rest_zero = false;
      if (rest_zero) {
        Rational v = c_[0];
        n_ = 1;
        c_.assign(1, v);
        break;
      }
      if (n_ % 4 == 2) {
        long h = n_ / 2;
        long e = (h + 1) / 2;  // zeta_n = -zeta_h^e
        std::vector<Rational> v(h, Rational(0));
        for (size_t j = 0; j < c_.size(); ++j)
          if (sgn(c_[j]) != 0) v[(j * e) % h] += (j % 2 ? -c_[j] : c_[j]);
        c_ = reduce(h, v);
        n_ = h;
        changed = true;
        continue;
      }
      for (long p : prime_factors(n_)) {
        long sub = n_ / p;
        if (sub % p == 0) {
          bool ok = true;
          for (size_t j = 0; j < c_.size(); ++j)
            if (sgn(c_[j]) != 0 && j % p != 0) ok = false;
          if (!ok) continue;
          std::vector<Rational> v(c_.size() / p + 1, Rational(0));
          for (size_t j = 0; j < c_.size(); j += p) v[j / p] = c_[j];
          c_ = reduce(sub, v);
          n_ = sub;
          changed = true;
          break;
        }
        // p divides n exactly once: average over Gal(Q(zeta_n)/Q(zeta_sub)) and test
        long alpha = mod_inverse(p, sub);
        long beta = mod_inverse(sub, p);
        std::vector<Rational> v(sub, Rational(0));
        Rational off = make_rational(-1, p - 1);
        for (size_t j = 0; j < c_.size(); ++j) {
          if (sgn(c_[j]) == 0) continue;
          long jj = static_cast<long>(j);
          Rational w = (mod_floor(jj * beta, p) == 0) ? Rational(1) : off;
          v[mod_floor(jj * alpha, sub)] += c_[j] * w;
        }
        Cyclo cand;
        cand.n_ = sub;
        cand.c_ = reduce(sub, v);
        if (cand.lift(n_) == c_) {
          n_ = sub;
          c_ = std::move(cand.c_);
          changed = true;
          break;
        }
      }
    }
  }
};

inline Cyclo root_of_unity(long m, long t) {
  if (m <= 0) throw std::invalid_argument("root_of_unity: order must be positive");
  return Cyclo::root(Root(m, t));
}

inline Cyclo cyclo_inverse(const Cyclo& x) { return x.inverse(); }

inline std::string to_string(const Cyclo& x) { return x.str(); }

// Bernoulli numbers with B_1 = -1/2 from sum_{j<=n} C(n+1, j) B_j = 0.
inline Rational bernoulli(long n) {
  static std::mutex mu;
  static std::vector<Rational> table{Rational(1)};
  if (n < 0) throw std::invalid_argument("bernoulli: negative index");
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<long>(table.size()) <= n) {
    long k = static_cast<long>(table.size());
    Rational s = 0;
    for (long j = 0; j < k; ++j) s += Rational(binomial(k + 1, j)) * table[j];
    table.push_back(-s / Rational(k + 1));
  }
  return table[n];
}

}  // namespace kadelic
