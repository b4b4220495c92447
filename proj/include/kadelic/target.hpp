#pragma once

#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kadelic/lambda.hpp"

namespace kadelic {

struct ModelError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

using RMatrix = std::vector<std::vector<Rational>>;

inline RMatrix identity_matrix(size_t n) {
  RMatrix m(n, std::vector<Rational>(n, Rational(0)));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// Gauss-Jordan inverse; nullopt if singular.
inline std::optional<RMatrix> invert(RMatrix a) {
  size_t n = a.size();
  RMatrix b = identity_matrix(n);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    Rational inv = 1 / a[c][c];
    for (size_t j = 0; j < n; ++j) {
      a[c][j] *= inv;
      b[c][j] *= inv;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == c || sgn(a[i][c]) == 0) continue;
      Rational f = a[i][c];
      for (size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[c][j];
        b[i][j] -= f * b[c][j];
      }
    }
  }
  return b;
}

// Truncated polynomial arithmetic in omega with omega^(dim+1) = 0.
inline std::vector<Rational> hmul(const std::vector<Rational>& a, const std::vector<Rational>& b, size_t len) {
  std::vector<Rational> c(len, Rational(0));
  for (size_t i = 0; i < a.size() && i < len; ++i)
    for (size_t j = 0; j < b.size() && i + j < len; ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline std::vector<Rational> hexp(const Rational& a, size_t len) {  // e^{a omega}
  std::vector<Rational> c(len);
  Rational t = 1;
  for (size_t k = 0; k < len; ++k) {
    c[k] = t;
    t = t * a / Rational(static_cast<long>(k + 1));
  }
  return c;
}

inline std::vector<Rational> hinv(const std::vector<Rational>& a, size_t len) {
  if (a.empty() || sgn(a[0]) == 0) throw DivisionByZero("cohomology class is not invertible");
  std::vector<Rational> b(len, Rational(0));
  for (size_t k = 0; k < len; ++k) {
    Rational s = k == 0 ? Rational(1) : Rational(0);
    for (size_t j = 1; j <= k && j < a.size(); ++j) s -= a[j] * b[k - j];
    b[k] = s / a[0];
  }
  return b;
}

// x / (1 - e^{-x}) at x = a omega: power series sum (-1)^n B_n (a omega)^n / n!
inline std::vector<Rational> htodd_root(const Rational& a, size_t len) {
  std::vector<Rational> c(len);
  Rational ap = 1;
  for (size_t n = 0; n < len; ++n) {
    Rational b = bernoulli(static_cast<long>(n));
    if (n % 2 == 1) b = -b;
    c[n] = b * ap / Rational(factorial(static_cast<long>(n)));
    ap *= a;
  }
  return c;
}

// (1 - e^{-x}) / x at x = a omega.
inline std::vector<Rational> heuler_over_root(const Rational& a, size_t len) {
  std::vector<Rational> c(len);
  Rational ap = 1;
  for (size_t n = 0; n < len; ++n) {
    Rational v = ap / Rational(factorial(static_cast<long>(n + 1)));
    c[n] = n % 2 == 0 ? v : Rational(-v);
    ap *= a;
  }
  return c;
}

}  // namespace detail

class TargetGeometry;
using TargetPtr = std::shared_ptr<const TargetGeometry>;

// Cohomology class: polynomial in omega with ground-ring coefficients, omega^(dim+1) = 0.
struct HClass {
  long dim = 0;
  std::vector<LambdaElement> c;  // c[l] = coefficient of omega^l

  HClass() = default;
  HClass(long d) : dim(d), c(d + 1) {}
  static HClass from_rational(long d, const std::vector<Rational>& v) {
    HClass h(d);
    for (size_t i = 0; i < v.size() && i <= static_cast<size_t>(d); ++i) h.c[i] = LambdaElement(v[i]);
    return h;
  }
  static HClass constant(long d, const LambdaElement& x) {
    HClass h(d);
    h.c[0] = x;
    return h;
  }
  bool is_zero() const {
    for (auto& x : c)
      if (!x.is_zero()) return false;
    return true;
  }
  friend HClass operator+(const HClass& a, const HClass& b) {
    HClass r(std::max(a.dim, b.dim));
    for (size_t i = 0; i < r.c.size(); ++i) {
      if (i < a.c.size()) r.c[i] += a.c[i];
      if (i < b.c.size()) r.c[i] += b.c[i];
    }
    return r;
  }
  HClass operator-() const {
    HClass r = *this;
    for (auto& x : r.c) x = -x;
    return r;
  }
  friend HClass operator-(const HClass& a, const HClass& b) { return a + (-b); }
  friend HClass operator*(const HClass& a, const HClass& b) {
    HClass r(std::max(a.dim, b.dim));
    for (size_t i = 0; i < a.c.size(); ++i) {
      if (a.c[i].is_zero()) continue;
      for (size_t j = 0; j < b.c.size() && i + j < r.c.size(); ++j)
        if (!b.c[j].is_zero()) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
  }
  friend HClass operator*(const HClass& a, const LambdaElement& s) {
    HClass r = a;
    for (auto& x : r.c) x = x * s;
    return r;
  }
  friend HClass operator*(const HClass& a, const Cyclo& s) {
    HClass r = a;
    for (auto& x : r.c) x = x * s;
    return r;
  }
  friend bool operator==(const HClass& a, const HClass& b) { return (a - b).is_zero(); }
  // top-degree coefficient
  LambdaElement integrate() const { return c.empty() ? LambdaElement() : c.back(); }
  HClass adams(long r) const {
    HClass h = *this;
    for (auto& x : h.c) x = x.adams(r);
    return h;
  }
  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c.size(); ++i) {
      if (c[i].is_zero()) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << c[i].str() << ")";
      if (i) os << "*w^" << i;
    }
    if (first) os << "0";
    return os.str();
  }
};

// Element of K^0(X) (x) Lambda in the basis of the target model.
class KClass {
 public:
  KClass() = default;
  KClass(TargetPtr t);
  KClass(TargetPtr t, std::vector<LambdaElement> coords);
  static KClass basis(TargetPtr t, size_t i, const LambdaElement& coeff = LambdaElement(1));
  static KClass scalar(TargetPtr t, const LambdaElement& x) { return basis(t, 0, x); }

  const TargetPtr& target() const { return t_; }
  const std::vector<LambdaElement>& coords() const { return c_; }
  size_t rank() const { return c_.size(); }
  const LambdaElement& operator[](size_t i) const { return c_.at(i); }
  bool is_zero() const {
    for (auto& x : c_)
      if (!x.is_zero()) return false;
    return true;
  }

  KClass operator-() const {
    KClass r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend KClass operator+(const KClass& a, const KClass& b) {
    if (!a.t_) return b;
    if (!b.t_) return a;
    check_same(a, b);
    KClass r = a;
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
    return r;
  }
  friend KClass operator-(const KClass& a, const KClass& b) { return a + (-b); }
  KClass& operator+=(const KClass& o) { return *this = *this + o; }
  KClass& operator-=(const KClass& o) { return *this = *this - o; }
  friend KClass operator*(const KClass& a, const LambdaElement& s) {
    KClass r = a;
    for (auto& x : r.c_) x = x * s;
    return r;
  }
  friend KClass operator*(const LambdaElement& s, const KClass& a) { return a * s; }
  friend KClass operator*(const KClass& a, const Cyclo& s) {
    if (s.is_zero()) return KClass();
    KClass r = a;
    for (auto& x : r.c_) x = x * s;
    return r;
  }
  friend KClass operator*(const Cyclo& s, const KClass& a) { return a * s; }
  friend KClass operator*(const KClass& a, const KClass& b);
  friend bool operator==(const KClass& a, const KClass& b) { return (a - b).is_zero(); }
  friend bool operator!=(const KClass& a, const KClass& b) { return !(a == b); }

  // Adams operation on ground-ring coefficients only.
  KClass adams_coefficients(long r) const {
    KClass out = *this;
    for (auto& x : out.c_) x = x.adams(r);
    return out;
  }
  std::string str() const;

 private:
  TargetPtr t_;
  std::vector<LambdaElement> c_;
  static void check_same(const KClass& a, const KClass& b) {
    if (a.t_ != b.t_) throw std::invalid_argument("K-classes live on different targets");
  }
};

// Finite model of K^0(X): basis P^0..P^dim with ch(P^j) = e^{-j omega}, H = Q[omega]/omega^(dim+1).
class TargetGeometry : public std::enable_shared_from_this<TargetGeometry> {
 public:
  struct Spec {
    std::string name;
    long dim = 0;
    std::vector<Rational> tangent_roots;  // Chern roots a_i omega of T_X (as a sum of line bundles minus trivial ones)
    std::vector<std::vector<Rational>> basis_ch;  // ch of basis classes as omega-polynomials; default e^{-j omega}
    std::vector<std::string> basis_names;
  };

  static TargetPtr make(Spec spec) {
    if (spec.dim < 0) throw ModelError("target: dim must be non-negative");
    size_t n = static_cast<size_t>(spec.dim + 1);
    if (spec.basis_ch.empty()) {
      for (size_t j = 0; j < n; ++j) spec.basis_ch.push_back(detail::hexp(Rational(-static_cast<long>(j)), n));
    }
    if (spec.basis_ch.size() != n)
      throw ModelError("target: rank must equal dim + 1 for a cohomology ring Q[w]/w^(dim+1)");
    for (auto& v : spec.basis_ch) {
      if (v.size() > n) {
        for (size_t i = n; i < v.size(); ++i)
          if (sgn(v[i]) != 0) throw ModelError("target: ch entry exceeds cohomological dimension");
      }
      v.resize(n, Rational(0));
    }
    if (spec.tangent_roots.size() < static_cast<size_t>(spec.dim))
      throw ModelError("target: tangent bundle needs at least dim Chern roots");
    if (spec.basis_names.empty()) {
      for (size_t j = 0; j < n; ++j) spec.basis_names.push_back(j == 0 ? "1" : (j == 1 ? "P" : "P^" + std::to_string(j)));
    }
    auto t = std::shared_ptr<TargetGeometry>(new TargetGeometry());
    t->spec_ = spec;
    t->n_ = n;
    t->build();
    return t;
  }

  static TargetPtr point() {
    static TargetPtr p = make({"point", 0, {}, {}, {}});
    return p;
  }
  static TargetPtr p1() {
    static TargetPtr p = make({"p1", 1, {Rational(2)}, {}, {}});
    return p;
  }
  static TargetPtr p2() {
    static TargetPtr p = make({"p2", 2, {Rational(1), Rational(1), Rational(1)}, {}, {}});
    return p;
  }

  // Inline JSON: {"name":..,"dim":n,"tangent_roots":["2"],"basis_ch":[["1","0"],["1","-1"]]}
  static TargetPtr from_json(const nlohmann::json& j) {
    Spec s;
    auto need = [&](const char* k) {
      if (!j.contains(k)) throw ModelError(std::string("target spec: missing field '") + k + "'");
      return j.at(k);
    };
    s.name = j.value("name", std::string("custom"));
    auto dim = need("dim");
    if (!dim.is_number_integer()) throw ModelError("target spec: field 'dim' must be an integer");
    s.dim = dim.get<long>();
    auto rat = [](const nlohmann::json& v) {
      if (v.is_number_integer()) return Rational(v.get<long>());
      if (v.is_string()) return parse_rational(v.get<std::string>());
      throw ModelError("target spec: numbers must be integers or rational strings");
    };
    for (auto& v : need("tangent_roots")) s.tangent_roots.push_back(rat(v));
    if (j.contains("basis_ch"))
      for (auto& row : j.at("basis_ch")) {
        std::vector<Rational> r;
        for (auto& v : row) r.push_back(rat(v));
        s.basis_ch.push_back(r);
      }
    return make(s);
  }

  static TargetPtr load(const std::string& name) {
    if (name == "point") return point();
    if (name == "p1") return p1();
    if (name == "p2") return p2();
    if (name.rfind("file:", 0) == 0) {
      std::ifstream in(name.substr(5));
      if (!in) throw ModelError("target: cannot open " + name.substr(5));
      nlohmann::json j;
      try {
        in >> j;
      } catch (const std::exception& e) {
        throw ModelError(std::string("target: malformed JSON: ") + e.what());
      }
      return from_json(j);
    }
    throw ModelError("unknown target: " + name);
  }

  const std::string& name() const { return spec_.name; }
  size_t rank() const { return n_; }
  long dim() const { return spec_.dim; }
  const std::vector<Rational>& tangent_roots() const { return spec_.tangent_roots; }
  const std::vector<std::string>& basis_names() const { return spec_.basis_names; }
  // number of trivial summands removed from the sum of line bundles to get T_X, plus one
  long trivial_factor() const { return 1 + static_cast<long>(spec_.tangent_roots.size()) - spec_.dim; }

  const std::vector<Rational>& ch_basis(size_t i) const { return spec_.basis_ch.at(i); }
  const detail::RMatrix& gram() const { return gram_; }
  const detail::RMatrix& gram_inverse() const { return gram_inv_; }
  const std::vector<Rational>& todd() const { return todd_; }
  const std::vector<Rational>& sqrt_todd() const { return sqrt_todd_; }
  // product structure constants: basis_i * basis_j = sum_k mult(i,j)[k] basis_k
  const std::vector<Rational>& mult(size_t i, size_t j) const { return mult_[i][j]; }

  // omega-polynomial -> K coordinates (inverse of ch)
  std::vector<Rational> from_ch(const std::vector<Rational>& h) const {
    std::vector<Rational> out(n_, Rational(0));
    for (size_t l = 0; l < n_ && l < h.size(); ++l)
      for (size_t k = 0; k < n_; ++k) out[k] += ch_inv_[l][k] * h[l];
    return out;
  }
  HClass from_ch_lambda(const HClass& h) const;

  // Matrix of Psi^r on K^0(X): column i is Psi^r(basis_i).
  detail::RMatrix adams_matrix(long r) const {
    detail::RMatrix m(n_, std::vector<Rational>(n_, Rational(0)));
    for (size_t i = 0; i < n_; ++i) {
      std::vector<Rational> h = spec_.basis_ch[i];
      Rational p = 1;
      for (size_t l = 0; l < n_; ++l) {
        h[l] *= p;
        p *= r;
      }
      auto col = from_ch(h);
      for (size_t k = 0; k < n_; ++k) m[k][i] = col[k];
    }
    return m;
  }

  // Eu(T_X - 1) / Eu(Psi^r (T_X - 1)) through Chern roots with the trivial-summand limit factor.
  std::vector<Rational> euler_ratio(long r) const {
    if (r < 1) throw std::invalid_argument("euler_ratio: r must be >= 1");
    std::vector<Rational> acc(n_, Rational(0));
    acc[0] = Rational(1);
    Rational rr(r);
    for (auto& a : spec_.tangent_roots) {
      // (1 - e^{-x}) / (1 - e^{-r x}) = (1/r) * [(1-e^{-x})/x] / [(1-e^{-rx})/(rx)]
      auto num = detail::heuler_over_root(a, n_);
      auto den = detail::heuler_over_root(a * rr, n_);
      acc = detail::hmul(acc, detail::hmul(num, detail::hinv(den, n_), n_), n_);
      for (auto& x : acc) x /= rr;
    }
    Rational f = 1;
    long c = trivial_factor();
    for (long i = 0; i < c; ++i) f *= rr;
    for (long i = 0; i > c; --i) f /= rr;
    for (auto& x : acc) x *= f;
    return acc;
  }

  // ch Psi^k(T^*_X - 1) = sum_i e^{-k x_i} - trivial_factor
  std::vector<Rational> ch_adams_cotangent_minus_one(long k) const {
    std::vector<Rational> acc(n_, Rational(0));
    for (auto& a : spec_.tangent_roots) {
      auto e = detail::hexp(-a * Rational(k), n_);
      for (size_t l = 0; l < n_; ++l) acc[l] += e[l];
    }
    acc[0] -= Rational(trivial_factor());
    return acc;
  }

  const detail::RMatrix& twisted_gram(long r) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = twisted_cache_.find(r);
    if (it != twisted_cache_.end()) return it->second;
    auto er = euler_ratio(r);
    auto w = detail::hmul(er, todd_, n_);
    detail::RMatrix g(n_, std::vector<Rational>(n_));
    for (size_t i = 0; i < n_; ++i)
      for (size_t j = 0; j < n_; ++j) g[i][j] = detail::hmul(detail::hmul(spec_.basis_ch[i], spec_.basis_ch[j], n_), w, n_)[n_ - 1];
    return twisted_cache_.emplace(r, std::move(g)).first->second;
  }

  const detail::RMatrix& adams_matrix_cached(long r) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = adams_cache_.find(r);
    if (it != adams_cache_.end()) return it->second;
    return adams_cache_.emplace(r, adams_matrix(r)).first->second;
  }

  TargetPtr self() const { return shared_from_this(); }

 private:
  TargetGeometry() = default;
  Spec spec_;
  size_t n_ = 1;
  detail::RMatrix ch_inv_;  // ch_inv_[l][k]: coordinate k of the class with ch = omega^l
  detail::RMatrix gram_, gram_inv_;
  std::vector<Rational> todd_, sqrt_todd_;
  std::vector<std::vector<std::vector<Rational>>> mult_;
  mutable std::mutex mu_;
  mutable std::map<long, detail::RMatrix> twisted_cache_, adams_cache_;

  void build() {
    detail::RMatrix chm(n_, std::vector<Rational>(n_));  // chm[l][k] = ch_l(basis_k)
    for (size_t k = 0; k < n_; ++k)
      for (size_t l = 0; l < n_; ++l) chm[l][k] = spec_.basis_ch[k][l];
    auto inv = detail::invert(chm);
    if (!inv) throw ModelError("target: Chern character of the basis is not invertible");
    // inv maps ch-coordinates to K coordinates: K = inv * h
    ch_inv_.assign(n_, std::vector<Rational>(n_));
    for (size_t l = 0; l < n_; ++l)
      for (size_t k = 0; k < n_; ++k) ch_inv_[l][k] = (*inv)[k][l];

    todd_.assign(n_, Rational(0));
    todd_[0] = 1;
    for (auto& a : spec_.tangent_roots) todd_ = detail::hmul(todd_, detail::htodd_root(a, n_), n_);
    // square root of a unipotent series: s = sum binom(1/2, k) (td - 1)^k
    {
      std::vector<Rational> u = todd_;
      u[0] -= 1;
      std::vector<Rational> s(n_, Rational(0)), p(n_, Rational(0));
      p[0] = 1;
      for (size_t k = 0; k < n_; ++k) {
        Rational b = gen_binomial(make_rational(1, 2), static_cast<long>(k));
        for (size_t l = 0; l < n_; ++l) s[l] += b * p[l];
        p = detail::hmul(p, u, n_);
      }
      sqrt_todd_ = s;
    }

    gram_.assign(n_, std::vector<Rational>(n_));
    for (size_t i = 0; i < n_; ++i)
      for (size_t j = 0; j < n_; ++j)
        gram_[i][j] = detail::hmul(detail::hmul(spec_.basis_ch[i], spec_.basis_ch[j], n_), todd_, n_)[n_ - 1];
    auto gi = detail::invert(gram_);
    if (!gi) throw ModelError("target: Poincare pairing is degenerate");
    gram_inv_ = *gi;

    mult_.assign(n_, std::vector<std::vector<Rational>>(n_));
    for (size_t i = 0; i < n_; ++i)
      for (size_t j = 0; j < n_; ++j) mult_[i][j] = from_ch(detail::hmul(spec_.basis_ch[i], spec_.basis_ch[j], n_));
  }
};

inline KClass::KClass(TargetPtr t) : t_(std::move(t)) {
  if (t_) c_.assign(t_->rank(), LambdaElement());
}
inline KClass::KClass(TargetPtr t, std::vector<LambdaElement> coords) : t_(std::move(t)), c_(std::move(coords)) {
  if (!t_) throw std::invalid_argument("KClass: missing target");
  if (c_.size() != t_->rank()) throw std::invalid_argument("KClass: coordinate count does not match target rank");
}
inline KClass KClass::basis(TargetPtr t, size_t i, const LambdaElement& coeff) {
  KClass k(t);
  k.c_.at(i) = coeff;
  return k;
}
inline KClass operator*(const KClass& a, const KClass& b) {
  if (!a.t_ || !b.t_) return KClass();
  KClass::check_same(a, b);
  KClass r(a.t_);
  size_t n = a.c_.size();
  for (size_t i = 0; i < n; ++i) {
    if (a.c_[i].is_zero()) continue;
    for (size_t j = 0; j < n; ++j) {
      if (b.c_[j].is_zero()) continue;
      LambdaElement p = a.c_[i] * b.c_[j];
      const auto& m = a.t_->mult(i, j);
      for (size_t k = 0; k < n; ++k)
        if (sgn(m[k]) != 0) r.c_[k] += p * m[k];
    }
  }
  return r;
}
inline std::string KClass::str() const {
  if (!t_) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c_[i].str() << ")*" << t_->basis_names()[i];
  }
  if (first) os << "0";
  return os.str();
}

inline HClass TargetGeometry::from_ch_lambda(const HClass& h) const {
  HClass out(static_cast<long>(n_) - 1);
  for (size_t l = 0; l < n_ && l < h.c.size(); ++l)
    for (size_t k = 0; k < n_; ++k)
      if (sgn(ch_inv_[l][k]) != 0) out.c[k] += h.c[l] * Cyclo(ch_inv_[l][k]);
  return out;  // coordinates in the K basis, stored in an HClass-shaped vector
}

inline TargetPtr load_target(const std::string& name) { return TargetGeometry::load(name); }

// Chern character as an omega-polynomial with ground-ring coefficients.
inline HClass ch(const KClass& a) {
  if (!a.target()) return HClass(0);
  const auto& t = *a.target();
  HClass h(t.dim());
  for (size_t k = 0; k < t.rank(); ++k) {
    if (a[k].is_zero()) continue;
    const auto& v = t.ch_basis(k);
    for (size_t l = 0; l < v.size(); ++l)
      if (sgn(v[l]) != 0) h.c[l] += a[k] * Cyclo(v[l]);
  }
  return h;
}

inline KClass k_from_ch(const TargetPtr& t, const HClass& h) {
  HClass coords = t->from_ch_lambda(h);
  std::vector<LambdaElement> c(coords.c.begin(), coords.c.end());
  c.resize(t->rank());
  return KClass(t, c);
}

inline LambdaElement bilinear(const detail::RMatrix& g, const KClass& a, const KClass& b) {
  if (!a.target() || !b.target()) return LambdaElement();
  if (a.target() != b.target()) throw std::invalid_argument("pairing: mismatched targets");
  LambdaElement s;
  size_t n = a.rank();
  for (size_t i = 0; i < n; ++i) {
    if (a[i].is_zero()) continue;
    LambdaElement row;
    for (size_t j = 0; j < n; ++j)
      if (sgn(g[i][j]) != 0 && !b[j].is_zero()) row += b[j] * g[i][j];
    if (!row.is_zero()) s += a[i] * row;
  }
  return s;
}

inline LambdaElement poincare_pair(const KClass& a, const KClass& b) {
  if (!a.target() || !b.target()) return LambdaElement();
  return bilinear(a.target()->gram(), a, b);
}

inline LambdaElement twisted_pair(long r, const KClass& a, const KClass& b) {
  if (!a.target() || !b.target()) return LambdaElement();
  return bilinear(a.target()->twisted_gram(r), a, b);
}

// Psi^r on K = K^0(X) (x) Lambda: lines L -> L^r, coefficients by the ground-ring action.
inline KClass adams_k(long r, const KClass& a) {
  if (r < 1) throw std::invalid_argument("adams_k: r must be >= 1");
  if (!a.target() || r == 1) return a;
  const auto& t = *a.target();
  const auto& m = t.adams_matrix_cached(r);
  KClass out(a.target());
  std::vector<LambdaElement> c(t.rank());
  for (size_t i = 0; i < t.rank(); ++i) {
    if (a[i].is_zero()) continue;
    LambdaElement x = a[i].adams(r);
    for (size_t k = 0; k < t.rank(); ++k)
      if (sgn(m[k][i]) != 0) c[k] += x * m[k][i];
  }
  return KClass(a.target(), c);
}

inline HClass euler_ratio_class(const TargetPtr& t, long r) { return HClass::from_rational(t->dim(), t->euler_ratio(r)); }

inline HClass todd_class(const TargetPtr& t) { return HClass::from_rational(t->dim(), t->todd()); }

// Eu(L) = 1 - L^{-1}, extended multiplicatively over a list of line bundles.
inline KClass euler_class(const TargetPtr& t, const std::vector<KClass>& lines) {
  KClass acc = KClass::scalar(t, LambdaElement(1));
  size_t n = t->rank();
  for (auto& L : lines) {
    HClass h = ch(L);
    // a line bundle has ch = e^{x} with x of pure degree one and constant coefficients
    bool ok = h.c[0] == LambdaElement(1);
    Rational x1 = 0;
    if (ok && n > 1) {
      ok = h.c[1].is_constant() && h.c[1].constant_term().is_rational();
      if (ok) x1 = h.c[1].constant_term().rational();
    }
    if (ok) {
      auto e = detail::hexp(x1, n);
      for (size_t l = 0; l < n && ok; ++l) ok = h.c[l] == LambdaElement(e[l]);
    }
    if (!ok)
      throw std::invalid_argument(
          "euler_class: argument is not a sum of line bundles; virtual classes with trivial summands need "
          "euler_ratio_class");
    auto inv = t->from_ch(detail::hexp(-x1, n));
    std::vector<LambdaElement> c(n);
    for (size_t k = 0; k < n; ++k) c[k] = LambdaElement(Rational(k == 0 ? 1 : 0) - inv[k]);
    acc = acc * KClass(t, c);
  }
  return acc;
}

inline KClass euler_class(const KClass& line) { return euler_class(line.target(), std::vector<KClass>{line}); }

// Classes dual to the basis under the Poincare pairing.
inline std::vector<KClass> dual_basis(const TargetPtr& t) {
  std::vector<KClass> out;
  const auto& gi = t->gram_inverse();
  for (size_t a = 0; a < t->rank(); ++a) {
    std::vector<LambdaElement> c(t->rank());
    for (size_t k = 0; k < t->rank(); ++k) c[k] = LambdaElement(gi[k][a]);
    out.emplace_back(t, c);
  }
  return out;
}

// Class of O(d) in the model (ch = e^{d omega}).
inline KClass line_bundle(const TargetPtr& t, long d) {
  auto c = t->from_ch(detail::hexp(Rational(d), t->rank()));
  std::vector<LambdaElement> v;
  for (auto& x : c) v.emplace_back(x);
  return KClass(t, v);
}

inline KClass tangent_class(const TargetPtr& t) {
  KClass acc(t);
  for (auto& a : t->tangent_roots()) {
    auto c = t->from_ch(detail::hexp(a, t->rank()));
    std::vector<LambdaElement> v;
    for (auto& x : c) v.emplace_back(x);
    acc += KClass(t, v);
  }
  long triv = static_cast<long>(t->tangent_roots().size()) - t->dim();
  if (triv) acc -= KClass::scalar(t, LambdaElement(triv));
  return acc;
}

}  // namespace kadelic
