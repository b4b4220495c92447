#pragma once

#include <functional>
#include <map>
#include <vector>

#include "kadelic/lambda.hpp"

namespace kadelic {

// Polynomial in position coordinates q_1..q_N with ground-ring coefficients (hbar^{+-1} allowed).
class FockState {
 public:
  using Mono = std::vector<int>;

  FockState() = default;
  FockState(RingPtr ring, size_t nvars, long max_degree = 64) : ring_(std::move(ring)), n_(nvars), max_degree_(max_degree) {}

  static FockState constant(RingPtr ring, size_t nvars, const LambdaElement& c, long max_degree = 64) {
    FockState s(ring, nvars, max_degree);
    s.add(Mono(nvars, 0), c);
    return s;
  }
  static FockState monomial(RingPtr ring, const Mono& e, const LambdaElement& c = LambdaElement(1), long max_degree = 64) {
    FockState s(ring, e.size(), max_degree);
    s.add(e, c);
    return s;
  }
  static FockState variable(RingPtr ring, size_t nvars, size_t i, long max_degree = 64) {
    Mono e(nvars, 0);
    e.at(i) = 1;
    return monomial(ring, e, LambdaElement(1), max_degree);
  }

  const RingPtr& ring() const { return ring_; }
  size_t nvars() const { return n_; }
  long max_degree() const { return max_degree_; }
  bool truncated() const { return truncated_; }
  const std::map<Mono, LambdaElement>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  long degree() const {
    long d = -1;
    for (auto& [e, c] : terms_) d = std::max(d, mono_degree(e));
    return d;
  }
  static long mono_degree(const Mono& e) {
    long d = 0;
    for (int x : e) d += x;
    return d;
  }

  void add(const Mono& e, const LambdaElement& c) {
    if (c.is_zero()) return;
    if (e.size() != n_) throw std::invalid_argument("Fock state: monomial has the wrong number of variables");
    if (mono_degree(e) > max_degree_) {
      truncated_ = true;
      return;
    }
    auto it = terms_.find(e);
    if (it == terms_.end()) terms_.emplace(e, c);
    else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend FockState operator+(const FockState& a, const FockState& b) {
    FockState r = a.n_ ? a : FockState(b.ring_, b.n_, b.max_degree_);
    r.truncated_ = a.truncated_ || b.truncated_;
    for (auto& [e, c] : b.terms_) r.add(e, c);
    return r;
  }
  FockState operator-() const {
    FockState r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  friend FockState operator-(const FockState& a, const FockState& b) { return a + (-b); }
  FockState& operator+=(const FockState& o) { return *this = *this + o; }
  friend FockState operator*(const FockState& a, const LambdaElement& s) {
    FockState r(a.ring_, a.n_, a.max_degree_);
    r.truncated_ = a.truncated_;
    for (auto& [e, c] : a.terms_) r.add(e, c * s);
    return r;
  }
  friend FockState operator*(const FockState& a, const FockState& b) {
    FockState r(a.ring_ ? a.ring_ : b.ring_, a.n_, std::min(a.max_degree_, b.max_degree_));
    if (a.n_ != b.n_) throw std::invalid_argument("Fock states over different variables");
    r.truncated_ = a.truncated_ || b.truncated_;
    for (auto& [ea, ca] : a.terms_)
      for (auto& [eb, cb] : b.terms_) {
        Mono e(a.n_);
        for (size_t i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
        r.add(e, ca * cb);
      }
    return r;
  }
  friend bool operator==(const FockState& a, const FockState& b) { return (a - b).is_zero(); }
  friend bool operator!=(const FockState& a, const FockState& b) { return !(a == b); }

  // Substitutes q_i -> sum_j lin[i][j] q_j + shift[i].
  FockState substitute_affine(const std::vector<std::vector<LambdaElement>>& lin, const std::vector<LambdaElement>& shift) const {
    std::vector<FockState> images;
    for (size_t i = 0; i < n_; ++i) {
      FockState v = constant(ring_, n_, shift.at(i), max_degree_);
      for (size_t j = 0; j < n_; ++j)
        if (!lin[i][j].is_zero()) v += variable(ring_, n_, j, max_degree_) * lin[i][j];
      images.push_back(v);
    }
    FockState out(ring_, n_, max_degree_);
    for (auto& [e, c] : terms_) {
      FockState p = constant(ring_, n_, c, max_degree_);
      for (size_t i = 0; i < n_; ++i)
        for (int k = 0; k < e[i]; ++k) p = p * images[i];
      out += p;
    }
    return out;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.str() << ")";
      for (size_t i = 0; i < n_; ++i)
        if (e[i]) os << "*q" << i + 1 << (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
    }
    return os.str();
  }

 private:
  RingPtr ring_;
  size_t n_ = 0;
  long max_degree_ = 64;
  bool truncated_ = false;
  std::map<Mono, LambdaElement> terms_;
};

// Finite sum of c * q^mult * d^diff (derivatives act first).
struct LinearOperator {
  struct Term {
    LambdaElement coeff;
    std::vector<int> mult, diff;
  };
  size_t nvars = 0;
  std::vector<Term> terms;

  static LinearOperator identity(size_t n) {
    LinearOperator op;
    op.nvars = n;
    op.terms.push_back({LambdaElement(1), std::vector<int>(n, 0), std::vector<int>(n, 0)});
    return op;
  }
  LinearOperator scaled(const LambdaElement& s) const {
    LinearOperator op = *this;
    for (auto& t : op.terms) t.coeff = t.coeff * s;
    return op;
  }
  friend LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
    LinearOperator op = a;
    op.nvars = std::max(a.nvars, b.nvars);
    op.terms.insert(op.terms.end(), b.terms.begin(), b.terms.end());
    return op;
  }
};

inline FockState apply_operator(const LinearOperator& op, const FockState& s) {
  if (op.nvars != s.nvars()) throw std::invalid_argument("operator and state have different variables");
  FockState out(s.ring(), s.nvars(), s.max_degree());
  if (s.truncated()) out.add(FockState::Mono(s.nvars(), static_cast<int>(s.max_degree() + 1)), LambdaElement(1));
  for (auto& t : op.terms) {
    if (t.coeff.is_zero()) continue;
    for (auto& [e, c] : s.terms()) {
      FockState::Mono ne = e;
      Integer f = 1;
      bool dead = false;
      for (size_t i = 0; i < ne.size() && !dead; ++i) {
        if (t.diff[i] > ne[i]) dead = true;
        for (int k = 0; k < t.diff[i] && !dead; ++k) f *= ne[i] - k;
        if (!dead) ne[i] = ne[i] - t.diff[i] + t.mult[i];
      }
      if (dead) continue;
      out.add(ne, c * t.coeff * Cyclo(Rational(f)));
    }
  }
  return out;
}

// Quadratic hamiltonian sum_{a<=b} qq[a][b] q_a q_b + sum_{a,b} qp[a][b] q_a p_b + sum_{a<=b} pp[a][b] p_a p_b.
// Only entries with a <= b of the symmetric tables are read.
struct QuadHamiltonian {
  size_t n = 0;
  std::vector<std::vector<LambdaElement>> qq, qp, pp;
  explicit QuadHamiltonian(size_t nvars = 0)
      : n(nvars),
        qq(nvars, std::vector<LambdaElement>(nvars)),
        qp(nvars, std::vector<LambdaElement>(nvars)),
        pp(nvars, std::vector<LambdaElement>(nvars)) {}
  bool pure_pp() const {
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b)
        if (!qq[a][b].is_zero() || !qp[a][b].is_zero()) return false;
    return true;
  }
  // pp block of (p, S p) = sum_{a,b} S_ab p_a p_b
  static QuadHamiltonian from_symmetric_pp(const std::vector<std::vector<LambdaElement>>& S) {
    QuadHamiltonian H(S.size());
    for (size_t a = 0; a < H.n; ++a)
      for (size_t b = a; b < H.n; ++b) H.pp[a][b] = a == b ? S[a][a] : S[a][b] * Cyclo(2);
    return H;
  }
};

// q_a q_b -> hbar^{-1} q_a q_b,  q_a p_b -> q_a d_b,  p_a p_b -> hbar d_a d_b
inline LinearOperator quantize_quadratic(const RingPtr& ring, const QuadHamiltonian& H) {
  LinearOperator op;
  op.nvars = H.n;
  LambdaElement hb = LambdaElement::hbar(ring, 1), hinv = LambdaElement::hbar(ring, -1);
  for (size_t a = 0; a < H.n; ++a)
    for (size_t b = 0; b < H.n; ++b) {
      std::vector<int> z(H.n, 0);
      if (b >= a && !H.qq[a][b].is_zero()) {
        auto m = z;
        m[a]++, m[b]++;
        op.terms.push_back({H.qq[a][b] * hinv, m, z});
      }
      if (!H.qp[a][b].is_zero()) {
        auto m = z, d = z;
        m[a]++, d[b]++;
        op.terms.push_back({H.qp[a][b], m, d});
      }
      if (b >= a && !H.pp[a][b].is_zero()) {
        auto d = z;
        d[a]++, d[b]++;
        op.terms.push_back({H.pp[a][b] * hb, z, d});
      }
    }
  return op;
}

// sqrt(hbar) exponent of a coefficient monomial, in half units; all monomials must agree.
inline std::optional<long> planck_half_exponent(const LambdaElement& c) {
  if (c.is_zero() || !c.ring() || !c.ring()->has_planck()) return c.is_zero() ? std::nullopt : std::optional<long>(0);
  size_t i = c.ring()->planck_index();
  std::optional<long> e;
  for (auto& [k, x] : c.terms()) {
    long v = LambdaElement::exponent(k, i);
    if (e && *e != v) return std::nullopt;
    e = v;
  }
  return e;
}

// Each term: hbar-weight + (multiplication degree - differentiation degree)/2 = 0.
inline bool homogeneous_of_degree_zero(const LinearOperator& op) {
  for (auto& t : op.terms) {
    auto e = planck_half_exponent(t.coeff);
    if (!e) return false;
    long md = 0, dd = 0;
    for (int x : t.mult) md += x;
    for (int x : t.diff) dd += x;
    if (*e + (md - dd) != 0) return false;  // half units: 2*(e/2) + (md - dd) = 0
  }
  return true;
}

// exp(H^/2) s for a hamiltonian with only a pp block; terminates on polynomials.
inline FockState exp_apply(const RingPtr& ring, const QuadHamiltonian& H, const FockState& s) {
  if (!H.pure_pp()) throw std::invalid_argument("exp_apply: only pure pp hamiltonians give terminating exponentials");
  LinearOperator op = quantize_quadratic(ring, H).scaled(LambdaElement(make_rational(1, 2)));
  FockState sum = s, term = s;
  for (long k = 1; !term.is_zero(); ++k) {
    term = apply_operator(op, term) * LambdaElement(make_rational(1, k));
    sum += term;
  }
  return sum;
}

// Transport to the polarization q = S p: exp(hbar/2 sum S_ab d_a d_b).
inline FockState polarization_transport(const RingPtr& ring, const std::vector<std::vector<LambdaElement>>& S,
                                        const FockState& s) {
  return exp_apply(ring, QuadHamiltonian::from_symmetric_pp(S), s);
}

// <D>(x) = D(x - v)
inline FockState dilaton_shift(const FockState& D, const std::vector<LambdaElement>& v) {
  size_t n = D.nvars();
  std::vector<std::vector<LambdaElement>> lin(n, std::vector<LambdaElement>(n));
  for (size_t i = 0; i < n; ++i) lin[i][i] = LambdaElement(1);
  std::vector<LambdaElement> shift;
  for (auto& x : v) shift.push_back(-x);
  return D.substitute_affine(lin, shift);
}

// Classical quadratic hamiltonians as polynomials in (q, p) with Poisson bracket
// {F, G} = sum_a dF/dq_a dG/dp_a - dF/dp_a dG/dq_a.
struct PhasePoly {
  size_t n = 0;
  std::map<std::pair<std::vector<int>, std::vector<int>>, LambdaElement> terms;  // (q-exponents, p-exponents)

  static PhasePoly from(const QuadHamiltonian& H) {
    PhasePoly P;
    P.n = H.n;
    for (size_t a = 0; a < H.n; ++a)
      for (size_t b = 0; b < H.n; ++b) {
        std::vector<int> z(H.n, 0);
        if (b >= a && !H.qq[a][b].is_zero()) {
          auto m = z;
          m[a]++, m[b]++;
          P.terms[{m, z}] += H.qq[a][b];
        }
        if (!H.qp[a][b].is_zero()) {
          auto m = z, d = z;
          m[a]++, d[b]++;
          P.terms[{m, d}] += H.qp[a][b];
        }
        if (b >= a && !H.pp[a][b].is_zero()) {
          auto d = z;
          d[a]++, d[b]++;
          P.terms[{z, d}] += H.pp[a][b];
        }
      }
    return P;
  }
  QuadHamiltonian to_hamiltonian() const {
    QuadHamiltonian H(n);
    for (auto& [k, c] : terms) {
      auto& [qe, pe] = k;
      std::vector<size_t> qs, ps;
      for (size_t i = 0; i < n; ++i) {
        for (int j = 0; j < qe[i]; ++j) qs.push_back(i);
        for (int j = 0; j < pe[i]; ++j) ps.push_back(i);
      }
      if (qs.size() == 2) H.qq[qs[0]][qs[1]] += c;
      else if (ps.size() == 2) H.pp[ps[0]][ps[1]] += c;
      else if (qs.size() == 1 && ps.size() == 1) H.qp[qs[0]][ps[0]] += c;
      else if (!c.is_zero()) throw std::logic_error("phase polynomial is not quadratic");
    }
    return H;
  }
  friend PhasePoly poisson(const PhasePoly& F, const PhasePoly& G) {
    PhasePoly R;
    R.n = F.n;
    for (auto& [kf, cf] : F.terms)
      for (auto& [kg, cg] : G.terms)
        for (size_t a = 0; a < F.n; ++a) {
          // dF/dq_a dG/dp_a
          if (kf.first[a] > 0 && kg.second[a] > 0) {
            auto q = kf.first, p = kf.second;
            q[a]--;
            auto q2 = kg.first, p2 = kg.second;
            p2[a]--;
            for (size_t i = 0; i < F.n; ++i) q[i] += q2[i], p[i] += p2[i];
            R.terms[{q, p}] += cf * cg * Cyclo(kf.first[a] * kg.second[a]);
          }
          if (kf.second[a] > 0 && kg.first[a] > 0) {
            auto q = kf.first, p = kf.second;
            p[a]--;
            auto q2 = kg.first, p2 = kg.second;
            q2[a]--;
            for (size_t i = 0; i < F.n; ++i) q[i] += q2[i], p[i] += p2[i];
            R.terms[{q, p}] -= cf * cg * Cyclo(kf.second[a] * kg.first[a]);
          }
        }
    for (auto it = R.terms.begin(); it != R.terms.end();) it = it->second.is_zero() ? R.terms.erase(it) : std::next(it);
    return R;
  }
};

// Sign in [F^, G^] = kCommutatorSign {F, G}^ (up to a central term), fixed by [q d, hbar d^2] = -2 hbar d^2.
inline constexpr int kCommutatorSign = -1;

// Product of vertex states living on disjoint variable groups; group[i] is the group of variable i.
// Operator method: exp(hbar sum_{a<b, different groups} S_ab d_a d_b), truncated at max_edges contractions.
inline FockState wick_operator(const RingPtr& ring, const std::vector<FockState>& vertices, const std::vector<int>& group,
                               const std::vector<std::vector<LambdaElement>>& S, long max_edges) {
  size_t n = group.size();
  FockState prod = FockState::constant(ring, n, LambdaElement(1));
  for (auto& v : vertices) prod = prod * v;
  LinearOperator op;
  op.nvars = n;
  LambdaElement hb = LambdaElement::hbar(ring, 1);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b)
      if (group[a] != group[b] && !S[a][b].is_zero()) {
        std::vector<int> z(n, 0), d(n, 0);
        d[a]++, d[b]++;
        op.terms.push_back({S[a][b] * hb, z, d});
      }
  FockState sum = prod, term = prod;
  for (long k = 1; k <= max_edges && !term.is_zero(); ++k) {
    term = apply_operator(op, term) * LambdaElement(make_rational(1, k));
    sum += term;
  }
  return sum;
}

// Graph method: every monomial is a vertex with labelled half-edges; sum over matchings of half-edges
// from different groups, each edge weighted by hbar S_ab.
inline FockState wick_matchings(const RingPtr& ring, const std::vector<FockState>& vertices, const std::vector<int>& group,
                                const std::vector<std::vector<LambdaElement>>& S, long max_edges) {
  size_t n = group.size();
  FockState prod = FockState::constant(ring, n, LambdaElement(1));
  for (auto& v : vertices) prod = prod * v;
  FockState out(ring, n);
  LambdaElement hb = LambdaElement::hbar(ring, 1);
  for (auto& [e, c] : prod.terms()) {
    std::vector<size_t> half;  // variable of each half-edge
    for (size_t i = 0; i < n; ++i)
      for (int k = 0; k < e[i]; ++k) half.push_back(i);
    std::vector<char> used(half.size(), 0);
    std::function<void(size_t, long, LambdaElement)> rec = [&](size_t pos, long edges, LambdaElement w) {
      while (pos < half.size() && used[pos]) ++pos;
      if (pos == half.size()) {
        // unmatched half-edges were marked with value 2
        FockState::Mono left(n, 0);
        for (size_t h = 0; h < half.size(); ++h)
          if (used[h] == 2) left[half[h]]++;
        out.add(left, c * w);
        return;
      }
      used[pos] = 2;  // leave unmatched
      rec(pos + 1, edges, w);
      used[pos] = 0;
      if (edges >= max_edges) return;
      for (size_t j = pos + 1; j < half.size(); ++j) {
        if (used[j] || group[half[pos]] == group[half[j]]) continue;
        size_t a = std::min(half[pos], half[j]), b = std::max(half[pos], half[j]);
        if (S[a][b].is_zero()) continue;
        used[pos] = used[j] = 1;
        rec(pos + 1, edges + 1, w * S[a][b] * hb);
        used[pos] = used[j] = 0;
      }
    };
    rec(0, 0, LambdaElement(1));
  }
  return out;
}

}  // namespace kadelic
