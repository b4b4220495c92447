#pragma once

#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kadelic/scalars.hpp"

namespace kadelic {

// How an Adams operation acts on a generator.
//   power : x -> x^r           (Novikov variables, the Planck constant)
//   family: x_s -> x_{rs}      (fresh degree-rs symbol family, default for user nilpotents)
//   fixed : x -> x             (bookkeeping symbols such as input slots)
enum class AdamsRule { power, family, fixed };

struct Variable {
  std::string name;
  int weight2 = 2;  // filtration weight in half units
  AdamsRule rule = AdamsRule::power;
  long nilpotency = 0;  // x^nilpotency = 0 when positive
  bool laurent = false; // negative exponents allowed
  int family = -1;      // family id for AdamsRule::family
  long family_index = 1;
};

// Variable table plus truncation order for the ground ring.
class GroundRing {
 public:
  struct Generator {
    std::string name;
    long nilpotency = 0;  // 0 means not nilpotent
    AdamsRule rule = AdamsRule::family;
  };
  struct Spec {
    long novikov_count = 1;
    std::vector<Generator> extra_generators;
    long truncation_order = 6;
    bool include_planck = true;
    int planck_weight2 = 2;  // weight of hbar in half units
  };

  static std::shared_ptr<const GroundRing> make(const Spec& spec) {
    if (spec.truncation_order < 1) throw std::invalid_argument("ground ring: truncation order D must be >= 1");
    if (spec.novikov_count < 0) throw std::invalid_argument("ground ring: negative Novikov count");
    auto g = std::shared_ptr<GroundRing>(new GroundRing());
    g->spec_ = spec;
    g->D_ = spec.truncation_order;
    std::set<std::string> names;
    for (long i = 1; i <= spec.novikov_count; ++i) {
      std::string nm = spec.novikov_count == 1 ? "Q" : "Q" + std::to_string(i);
      g->add({nm, 2, AdamsRule::power, 0, false});
    }
    if (spec.include_planck) {
      // stored as the exponent of sqrt(hbar); hbar = sqrt(hbar)^2
      if (spec.planck_weight2 % 2 != 0) throw std::invalid_argument("ground ring: planck weight must be integral");
      g->add({"sqrt_hbar", spec.planck_weight2 / 2, AdamsRule::power, 0, true});
    }
    int fam = 0;
    for (auto& gen : spec.extra_generators) {
      if (gen.name.empty()) throw std::invalid_argument("ground ring: empty generator name");
      if (g->index_.count(gen.name)) throw std::invalid_argument("ground ring: duplicate generator name " + gen.name);
      if (gen.rule == AdamsRule::family) {
        for (long s = 1; s <= g->D_; ++s) {
          Variable v{s == 1 ? gen.name : gen.name + "_" + std::to_string(s), static_cast<int>(2 * s), AdamsRule::family,
                     gen.nilpotency, false, fam, s};
          if (s > 1 && g->index_.count(v.name)) throw std::invalid_argument("ground ring: generator family clash " + v.name);
          g->add(v);
        }
        ++fam;
      } else {
        g->add({gen.name, 2, gen.rule, gen.nilpotency, false});
      }
    }
    return g;
  }

  // A ring with the same variables plus extra ones (used for functional series).
  std::shared_ptr<const GroundRing> extended(const std::vector<Variable>& extra, long new_order) const {
    auto g = std::shared_ptr<GroundRing>(new GroundRing(*this));
    g->D_ = new_order;
    for (auto& v : extra) {
      if (g->index_.count(v.name)) throw std::invalid_argument("ground ring: duplicate variable " + v.name);
      g->add(v);
    }
    return g;
  }

  long order() const { return D_; }
  size_t size() const { return vars_.size(); }
  const Variable& var(size_t i) const { return vars_.at(i); }
  const Spec& spec() const { return spec_; }
  std::optional<size_t> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  size_t index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::invalid_argument("unknown ground ring variable: " + name);
    return it->second;
  }
  bool has_planck() const { return index_.count("sqrt_hbar") > 0; }
  size_t planck_index() const { return index("sqrt_hbar"); }
  std::optional<size_t> family_member(int fam, long s) const {
    auto it = family_.find({fam, s});
    if (it == family_.end()) return std::nullopt;
    return it->second;
  }

  // Filtration weight of a monomial in half units.
  long weight2(const std::vector<int>& e) const {
    long w = 0;
    for (size_t i = 0; i < e.size(); ++i) w += static_cast<long>(vars_[i].weight2) * e[i];
    return w;
  }

 private:
  GroundRing() = default;
  void add(const Variable& v) {
    index_[v.name] = vars_.size();
    if (v.family >= 0) family_[{v.family, v.family_index}] = vars_.size();
    vars_.push_back(v);
  }
  Spec spec_;
  long D_ = 6;
  std::vector<Variable> vars_;
  std::map<std::string, size_t> index_;
  std::map<std::pair<int, long>, size_t> family_;
};

using RingPtr = std::shared_ptr<const GroundRing>;

inline RingPtr default_ring(long D = 6) {
  GroundRing::Spec s;
  s.truncation_order = D;
  return GroundRing::make(s);
}

// Element of the truncated ground ring: finitely many monomials with cyclotomic coefficients.
class LambdaElement {
 public:
  using Key = std::vector<int>;

  LambdaElement() = default;
  LambdaElement(int c) : LambdaElement(Cyclo(c)) {}
  LambdaElement(long c) : LambdaElement(Cyclo(c)) {}
  LambdaElement(const Rational& c) : LambdaElement(Cyclo(c)) {}
  LambdaElement(const Cyclo& c) {
    if (!c.is_zero()) terms_[Key{}] = c;
  }
  LambdaElement(RingPtr ring, const Cyclo& c) : ring_(std::move(ring)) {
    if (!c.is_zero()) terms_[zero_key()] = c;
  }

  static LambdaElement variable(RingPtr ring, const std::string& name, int power = 1) {
    LambdaElement x(ring, Cyclo(0));
    Key k = x.zero_key();
    k[ring->index(name)] = power;
    x.add_term(k, Cyclo(1));
    return x;
  }
  static LambdaElement monomial(RingPtr ring, const Key& key, const Cyclo& c) {
    LambdaElement x(ring, Cyclo(0));
    x.add_term(key, c);
    return x;
  }
  // Q_i^d (i counted from 1)
  static LambdaElement novikov(RingPtr ring, long i, int d = 1) {
    std::string nm = ring->spec().novikov_count == 1 ? "Q" : "Q" + std::to_string(i);
    return variable(ring, nm, d);
  }
  // hbar^(k/2)
  static LambdaElement sqrt_hbar_power(RingPtr ring, int k) { return variable(ring, "sqrt_hbar", k); }
  static LambdaElement hbar(RingPtr ring, int k = 1) { return variable(ring, "sqrt_hbar", 2 * k); }

  const RingPtr& ring() const { return ring_; }
  const std::map<Key, Cyclo>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool truncated() const { return truncated_; }
  void clear_truncation_flag() { truncated_ = false; }

  Cyclo constant_term() const {
    for (auto& [k, c] : terms_)
      if (is_zero_key(k)) return c;
    return Cyclo(0);
  }
  Cyclo coefficient(const Key& k) const {
    Key kk = k;
    if (ring_ && kk.size() < ring_->size()) kk.resize(ring_->size(), 0);
    auto it = terms_.find(kk);
    return it == terms_.end() ? Cyclo(0) : it->second;
  }
  bool is_constant() const {
    for (auto& [k, c] : terms_)
      if (!is_zero_key(k)) return false;
    return true;
  }

  LambdaElement operator-() const {
    LambdaElement r = *this;
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
  }
  friend LambdaElement operator+(const LambdaElement& a, const LambdaElement& b) {
    LambdaElement r = a;
    r.adopt(b.ring_);
    r.truncated_ = a.truncated_ || b.truncated_;
    for (auto& [k, c] : b.terms_) r.add_term(r.conv(k), c);
    return r;
  }
  friend LambdaElement operator-(const LambdaElement& a, const LambdaElement& b) { return a + (-b); }
  friend LambdaElement operator*(const LambdaElement& a, const LambdaElement& b) {
    LambdaElement r;
    r.ring_ = a.ring_ ? a.ring_ : b.ring_;
    if (a.ring_ && b.ring_ && a.ring_ != b.ring_ && a.ring_->size() != b.ring_->size())
      throw std::invalid_argument("ground ring mismatch");
    r.truncated_ = a.truncated_ || b.truncated_;
    if (a.terms_.empty() || b.terms_.empty()) return r;
    if (a.terms_.size() == 1 && b.terms_.size() == 1 && a.is_constant() && b.is_constant()) {
      Cyclo c = a.terms_.begin()->second * b.terms_.begin()->second;
      if (!c.is_zero()) r.terms_[r.zero_key()] = c;
      return r;
    }
    for (auto& [ka, ca] : a.terms_) {
      Key xa = r.conv(ka);
      for (auto& [kb, cb] : b.terms_) {
        Key xb = r.conv(kb);
        Key k(xa.size());
        bool dead = false;
        for (size_t i = 0; i < k.size(); ++i) {
          k[i] = xa[i] + xb[i];
          if (r.ring_) {
            long nil = r.ring_->var(i).nilpotency;
            if (nil > 0 && k[i] >= nil) dead = true;
          }
        }
        if (dead) continue;
        if (r.ring_ && r.ring_->weight2(k) > 2 * r.ring_->order()) {
          r.truncated_ = true;
          continue;
        }
        r.add_term(k, ca * cb);
      }
    }
    return r;
  }
  friend LambdaElement operator*(const LambdaElement& a, const Cyclo& s) {
    if (s.is_zero()) {
      LambdaElement r;
      r.ring_ = a.ring_;
      r.truncated_ = a.truncated_;
      return r;
    }
    LambdaElement r = a;
    for (auto& [k, c] : r.terms_) c = c * s;
    return r;
  }
  friend LambdaElement operator*(const Cyclo& s, const LambdaElement& a) { return a * s; }
  friend LambdaElement operator*(const LambdaElement& a, const Rational& s) { return a * Cyclo(s); }
  LambdaElement& operator+=(const LambdaElement& o) { return *this = *this + o; }
  LambdaElement& operator-=(const LambdaElement& o) { return *this = *this - o; }
  LambdaElement& operator*=(const LambdaElement& o) { return *this = *this * o; }

  friend bool operator==(const LambdaElement& a, const LambdaElement& b) { return (a - b).terms_.empty(); }
  friend bool operator!=(const LambdaElement& a, const LambdaElement& b) { return !(a == b); }

  // Psi^r: Q^d -> Q^{rd}, hbar -> hbar^r, family x_s -> x_{rs}; scalars are left fixed.
  LambdaElement adams(long r) const {
    if (r < 1) throw std::invalid_argument("adams: r must be >= 1");
    if (r == 1) return *this;
    LambdaElement out;
    out.ring_ = ring_;
    out.truncated_ = truncated_;
    for (auto& [k, c] : terms_) {
      if (is_zero_key(k)) {
        out.add_term(out.conv(k), c);
        continue;
      }
      Key nk(k.size(), 0);
      bool dead = false, dropped = false;
      for (size_t i = 0; i < k.size() && !dead; ++i) {
        if (k[i] == 0) continue;
        const Variable& v = ring_->var(i);
        switch (v.rule) {
          case AdamsRule::power: nk[i] += static_cast<int>(k[i] * r); break;
          case AdamsRule::fixed: nk[i] += k[i]; break;
          case AdamsRule::family: {
            auto j = ring_->family_member(v.family, v.family_index * r);
            if (!j) dropped = true;
            else nk[*j] += k[i];
            break;
          }
        }
      }
      for (size_t i = 0; i < nk.size(); ++i) {
        long nil = ring_->var(i).nilpotency;
        if (nil > 0 && nk[i] >= nil) dead = true;
      }
      if (dead) continue;
      if (dropped || ring_->weight2(nk) > 2 * ring_->order()) {
        out.truncated_ = true;
        continue;
      }
      out.add_term(nk, c);
    }
    return out;
  }

  // Drops all terms of filtration degree > d.
  LambdaElement truncate(long d) const {
    if (ring_ && d > ring_->order()) throw std::invalid_argument("truncate: d exceeds the ring's truncation order");
    LambdaElement out;
    out.ring_ = ring_;
    out.truncated_ = truncated_;
    for (auto& [k, c] : terms_) {
      if (ring_ && ring_->weight2(k) > 2 * d) {
        out.truncated_ = true;
        continue;
      }
      out.terms_[k] = c;
    }
    return out;
  }

  // Largest k with x in (Lambda_+)^k; nullopt encodes infinity (x = 0).
  std::optional<long> ideal_valuation() const {
    if (terms_.empty()) return std::nullopt;
    long best = std::numeric_limits<long>::max();
    for (auto& [k, c] : terms_) {
      long w = ring_ ? ring_->weight2(k) : 0;
      long fl = w >= 0 ? w / 2 : -((-w + 1) / 2);
      best = std::min(best, fl);
    }
    return best;
  }

  // Inverse of a unit (nonzero constant term), exact up to the truncation order.
  LambdaElement inverse() const {
    Cyclo c0 = constant_term();
    if (c0.is_zero()) throw DivisionByZero("ground ring element is not a unit");
    LambdaElement n = *this - LambdaElement(ring_, c0);
    LambdaElement x = n * c0.inverse();  // this = c0 (1 + x)
    LambdaElement sum(ring_, Cyclo(1)), p(ring_, Cyclo(1));
    long D = ring_ ? ring_->order() : 0;
    for (long i = 1; i <= 2 * D + 1 && !x.is_zero(); ++i) {
      p = p * (-x);
      if (p.is_zero()) break;
      sum += p;
    }
    return sum * c0.inverse();
  }

  // exp of an element with positive filtration degree.
  LambdaElement exp() const {
    if (!constant_term().is_zero()) throw std::domain_error("exp needs an element of the maximal ideal");
    LambdaElement sum(ring_, Cyclo(1)), p(ring_, Cyclo(1));
    long D = ring_ ? ring_->order() : 0;
    for (long i = 1; i <= 2 * D + 1; ++i) {
      p = (p * *this) * Cyclo(make_rational(1, i));
      if (p.is_zero()) break;
      sum += p;
    }
    return sum;
  }

  LambdaElement pow(long k) const {
    if (k < 0) return inverse().pow(-k);
    LambdaElement r(ring_, Cyclo(1));
    for (long i = 0; i < k; ++i) r *= *this;
    return r;
  }

  // Replaces variable i by the given element (variable must appear with non-negative powers).
  LambdaElement substitute(size_t var, const LambdaElement& value) const {
    LambdaElement out;
    out.ring_ = ring_;
    out.truncated_ = truncated_;
    for (auto& [k, c] : terms_) {
      Key kk = out.conv(k);
      int e = kk.empty() ? 0 : kk[var];
      if (e == 0) {
        out.add_term(kk, c);
        continue;
      }
      if (e < 0) throw std::invalid_argument("substitute: negative power");
      kk[var] = 0;
      out += monomial(ring_, kk, c) * value.pow(e);
    }
    return out;
  }

  // Total exponent of a variable across the monomial (used for grading checks).
  static int exponent(const Key& k, size_t i) { return i < k.size() ? k[i] : 0; }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [k, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      std::string mon = monomial_str(k);
      if (mon.empty()) os << c.str();
      else if (c == Cyclo(1)) os << mon;
      else os << "(" << c.str() << ")*" << mon;
    }
    return os.str();
  }

  std::string monomial_str(const Key& k) const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < k.size(); ++i) {
      if (k[i] == 0) continue;
      if (!first) os << "*";
      first = false;
      const auto& v = ring_->var(i);
      if (v.name == "sqrt_hbar") {
        if (k[i] % 2 == 0) {
          os << "hbar";
          if (k[i] != 2) os << "^" << k[i] / 2;
        } else {
          os << "hbar^(" << k[i] << "/2)";
        }
      } else {
        os << v.name;
        if (k[i] != 1) os << "^" << k[i];
      }
    }
    return os.str();
  }

  void adopt(const RingPtr& r) {
    if (!r || ring_ == r) return;
    if (ring_ && ring_->size() != r->size()) throw std::invalid_argument("ground ring mismatch");
    if (!ring_) {
      std::map<Key, Cyclo> t;
      for (auto& [k, c] : terms_) t[Key(r->size(), 0)] = c;
      terms_ = std::move(t);
      ring_ = r;
    }
  }

 private:
  RingPtr ring_;
  std::map<Key, Cyclo> terms_;
  bool truncated_ = false;

  Key zero_key() const { return ring_ ? Key(ring_->size(), 0) : Key{}; }
  static bool is_zero_key(const Key& k) {
    for (int e : k)
      if (e) return false;
    return true;
  }
  Key conv(const Key& k) const {
    if (!ring_ || k.size() == ring_->size()) return k;
    if (!is_zero_key(k)) throw std::invalid_argument("ground ring mismatch");
    return zero_key();
  }
  void add_term(const Key& k, const Cyclo& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) terms_.emplace(k, c);
    else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
};

inline LambdaElement adams(long r, const LambdaElement& x) { return x.adams(r); }
inline LambdaElement truncate(const LambdaElement& x, long d) { return x.truncate(d); }
inline std::optional<long> ideal_valuation(const LambdaElement& x) { return x.ideal_valuation(); }

}  // namespace kadelic
