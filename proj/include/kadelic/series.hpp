#pragma once

#include <algorithm>
#include <climits>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kadelic/scalars.hpp"

namespace kadelic {

inline bool is_zero_value(const Rational& x) { return sgn(x) == 0; }
template <class T>
bool is_zero_value(const T& x) {
  return x.is_zero();
}

// Truncated Laurent series sum_{e} c_e u^e + O(u^prec) with coefficients in T.
// A default-constructed T must be the zero element.
template <class T>
class Series {
 public:
  static constexpr long kExact = LONG_MAX / 8;

  Series() : lo_(0), prec_(kExact) {}
  explicit Series(const T& c, long prec = kExact) : lo_(0), prec_(prec) {
    if (prec_ > 0) c_.push_back(c);
    trim();
  }
  static Series monomial(const T& c, long e, long prec = kExact) {
    Series s;
    s.prec_ = prec;
    s.lo_ = e;
    if (e < prec) s.c_.push_back(c);
    s.trim();
    return s;
  }
  static Series zero(long prec = kExact) {
    Series s;
    s.prec_ = prec;
    return s;
  }
  // Coefficients listed from exponent lo upward.
  static Series from_coeffs(long lo, std::vector<T> coeffs, long prec = kExact) {
    Series s;
    s.lo_ = lo;
    s.prec_ = prec;
    s.c_ = std::move(coeffs);
    if (static_cast<long>(s.c_.size()) + lo > prec) s.c_.resize(std::max(0L, prec - lo));
    s.trim();
    return s;
  }

  bool is_zero() const { return c_.empty(); }
  bool is_exact() const { return prec_ >= kExact; }
  long prec() const { return prec_; }
  long valuation() const { return c_.empty() ? prec_ : lo_; }
  long top() const { return c_.empty() ? lo_ : lo_ + static_cast<long>(c_.size()); }
  const T& leading() const {
    if (c_.empty()) throw std::logic_error("leading coefficient of a zero series");
    return c_.front();
  }

  T coeff(long e) const {
    if (e >= prec_) throw std::out_of_range("coefficient beyond series precision");
    if (e < lo_ || e >= lo_ + static_cast<long>(c_.size())) return T{};
    return c_[e - lo_];
  }
  // Iterates over the stored (possibly zero) coefficients.
  template <class F>
  void for_each(F&& f) const {
    for (size_t i = 0; i < c_.size(); ++i)
      if (!is_zero_value(c_[i])) f(lo_ + static_cast<long>(i), c_[i]);
  }

  Series truncated(long p) const {
    Series s = *this;
    s.prec_ = std::min(prec_, p);
    long keep = s.prec_ - s.lo_;
    if (keep < 0) keep = 0;
    if (static_cast<long>(s.c_.size()) > keep) s.c_.resize(keep);
    s.trim();
    return s;
  }
  Series shifted(long k) const {
    Series s = *this;
    s.lo_ += k;
    s.prec_ = sat_add(prec_, k);
    return s;
  }

  Series operator-() const {
    Series s = *this;
    for (auto& x : s.c_) x = -x;
    return s;
  }
  friend Series operator+(const Series& a, const Series& b) {
    Series s;
    s.prec_ = std::min(a.prec_, b.prec_);
    if (a.c_.empty() && b.c_.empty()) return s;
    long lo = std::min(a.c_.empty() ? b.lo_ : a.lo_, b.c_.empty() ? a.lo_ : b.lo_);
    long hi = std::max(a.top(), b.top());
    hi = std::min(hi, s.prec_);
    if (hi <= lo) return s;
    s.lo_ = lo;
    s.c_.assign(hi - lo, T{});
    for (size_t i = 0; i < a.c_.size(); ++i) {
      long e = a.lo_ + static_cast<long>(i);
      if (e < hi) s.c_[e - lo] = a.c_[i];
    }
    for (size_t i = 0; i < b.c_.size(); ++i) {
      long e = b.lo_ + static_cast<long>(i);
      if (e < hi) s.c_[e - lo] = s.c_[e - lo] + b.c_[i];
    }
    s.trim();
    return s;
  }
  friend Series operator-(const Series& a, const Series& b) { return a + (-b); }
  Series& operator+=(const Series& o) { return *this = *this + o; }
  Series& operator-=(const Series& o) { return *this = *this - o; }

  friend Series operator*(const Series& a, const Series& b) { return multiply(a, b, [](const T& x, const T& y) { return x * y; }); }
  Series& operator*=(const Series& o) { return *this = *this * o; }

  // Coefficient-wise product with another coefficient type, result coefficients of type R.
  template <class U, class F>
  static auto multiply(const Series& a, const Series<U>& b, F&& f) {
    using R = decltype(f(std::declval<T>(), std::declval<U>()));
    long p = std::min(sat_add(a.prec(), b.valuation()), sat_add(b.prec(), a.valuation()));
    std::vector<R> out;
    long lo = a.valuation() + b.valuation();
    if (!a.is_zero() && !b.is_zero() && lo < p) {
      long hi = std::min(p, a.top() + b.top() - 1);
      out.assign(std::max(0L, hi - lo), R{});
      a.for_each([&](long i, const T& x) {
        b.for_each([&](long j, const U& y) {
          long e = i + j;
          if (e < hi) out[e - lo] = out[e - lo] + f(x, y);
        });
      });
    }
    if (a.is_zero() || b.is_zero()) lo = 0;
    return Series<R>::from_coeffs(lo, std::move(out), p);
  }

  template <class S>
  Series scaled(const S& s) const {
    Series r = *this;
    for (auto& x : r.c_) x = x * s;
    r.trim();
    return r;
  }
  template <class F>
  auto map(F&& f) const {
    using R = decltype(f(std::declval<T>()));
    std::vector<R> out;
    out.reserve(c_.size());
    for (auto& x : c_) out.push_back(f(x));
    return Series<R>::from_coeffs(lo_, std::move(out), prec_);
  }

  // Multiplicative inverse; the result is known up to u^min(prec - 2v, target).
  Series inverse(long target) const {
    if (c_.empty()) throw DivisionByZero("inverse of a series with no known nonzero term");
    long v = lo_;
    long p = std::min(sat_add(prec_, -2 * v), target);
    long n = p + v;  // number of coefficients of the unit part needed
    T c0inv = invert(c_[0]);
    std::vector<T> inv;
    if (n > 0) inv.assign(n, T{});
    for (long k = 0; k < n; ++k) {
      T s = (k == 0) ? T(1) : T{};
      for (long j = 1; j <= k && j < static_cast<long>(c_.size()); ++j) s = s - c_[j] * inv[k - j];
      inv[k] = s * c0inv;
    }
    return from_coeffs(-v, std::move(inv), p);
  }

  Series pow(long k, long target) const {
    long v = valuation();
    if (k < 0) return inverse(target + (std::labs(v) + 1) * (-k)).pow(-k, target);
    long work = target + std::max(0L, -v) * k;
    Series b = truncated(work);
    Series r(T(1));
    for (long i = 0; i < k; ++i) r = (r * b).truncated(work);
    return r.truncated(target);
  }

  // exp of a series with positive valuation (or nilpotent coefficients handled by the caller).
  Series exp(long target, long max_terms = -1) const {
    if (!c_.empty() && lo_ <= 0 && max_terms < 0)
      throw std::domain_error("exp needs positive valuation or an explicit term bound");
    long nterms = max_terms >= 0 ? max_terms : target;
    Series term(T(1));
    Series sum(T(1));
    for (long n = 1; n <= nterms; ++n) {
      term = (term * *this).truncated(target).scaled(make_rational(1, n));
      if (term.is_zero() && term.prec() >= target) break;
      sum = (sum + term).truncated(target);
    }
    return sum.truncated(target);
  }

  // f(w(u)) for w with valuation >= 1; winv = 1/w must be supplied when f has negative terms.
  // The substituted series may have a different (scalar) coefficient type W.
  template <class W>
  Series compose(const Series<W>& w, const Series<W>* winv, long target) const {
    long v = w.valuation();
    if (v < 1) throw std::invalid_argument("compose: substituted series must have positive valuation");
    long p = target;
    if (!is_exact()) p = std::min(p, prec_ > 0 ? prec_ * v : prec_);
    Series r = zero(p);
    for (size_t i = 0; i < c_.size(); ++i) {
      if (is_zero_value(c_[i])) continue;
      long e = lo_ + static_cast<long>(i);
      if (e >= p) break;
      Series<W> piece;
      if (e >= 0) piece = w.pow(e, p);
      else {
        if (!winv) throw std::invalid_argument("compose: negative powers need the inverse substitution");
        piece = winv->pow(-e, p);
      }
      const T& c = c_[i];
      r = (r + piece.map([&](const W& x) { return T(c * x); })).truncated(p);
    }
    return r;
  }

  friend bool operator==(const Series& a, const Series& b) {
    long p = std::min(a.prec_, b.prec_);
    Series d = (a - b).truncated(p);
    return d.is_zero();
  }

  std::string str(const std::string& var = "u") const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (is_zero_value(c_[i])) continue;
      if (!first) os << " + ";
      os << "(" << coeff_str(c_[i]) << ")*" << var << "^" << (lo_ + static_cast<long>(i));
      first = false;
    }
    if (first) os << "0";
    if (!is_exact()) os << " + O(" << var << "^" << prec_ << ")";
    return os.str();
  }

  static long sat_add(long a, long b) {
    if (a >= kExact || b >= kExact) return kExact;
    long r = a + b;
    return r >= kExact ? kExact : r;
  }

 private:
  long lo_;
  long prec_;
  std::vector<T> c_;

  template <class U>
  friend class Series;

  void trim() {
    size_t a = 0;
    while (a < c_.size() && is_zero_value(c_[a])) ++a;
    if (a == c_.size()) {
      c_.clear();
      lo_ = 0;
      return;
    }
    if (a) {
      c_.erase(c_.begin(), c_.begin() + a);
      lo_ += static_cast<long>(a);
    }
    while (!c_.empty() && is_zero_value(c_.back())) c_.pop_back();
  }

  static T invert(const T& x) {
    if constexpr (requires { x.inverse(); }) return x.inverse();
    else if constexpr (requires { x.inverse(0L); }) return x.inverse(0L);
    else return T(1) / x;
  }
  static std::string coeff_str(const T& x) {
    if constexpr (requires { x.str(); }) return x.str();
    else if constexpr (requires { x.get_str(); }) return x.get_str();
    else return "?";
  }
};

using CSeries = Series<Cyclo>;

// (1 + u)^a as a power series in u, exact to u^target.
inline CSeries binomial_series(const Rational& a, long target) {
  std::vector<Cyclo> c;
  for (long k = 0; k < target; ++k) c.emplace_back(gen_binomial(a, k));
  return CSeries::from_coeffs(0, std::move(c), target);
}

// exp(a u) truncated at u^target.
inline CSeries exp_series(const Rational& a, long target) {
  std::vector<Cyclo> c;
  Rational t = 1;
  for (long k = 0; k < target; ++k) {
    c.emplace_back(t);
    t = t * a / (k + 1);
  }
  return CSeries::from_coeffs(0, std::move(c), target);
}

}  // namespace kadelic
