#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lambda.hpp"
#include "rr_twist.hpp"
#include "target.hpp"

namespace kadelic {

using FunctionalSeries = LambdaElement;

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Cycle type: l[k] = number of cycles of length k.
struct Partition {
  std::map<long, long> l;

  long n() const {
    long s = 0;
    for (auto& [k, m] : l) s += k * m;
    return s;
  }
  long parts() const {
    long s = 0;
    for (auto& [k, m] : l) s += m;
    return s;
  }
  long get(long k) const {
    auto it = l.find(k);
    return it == l.end() ? 0 : it->second;
  }
  bool operator==(const Partition& o) const { return normalized().l == o.normalized().l; }
  Partition normalized() const {
    Partition p;
    for (auto& [k, m] : l)
      if (m) p.l[k] = m;
    return p;
  }
  std::string str() const {
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (auto& [k, m] : l) {
      if (!m) continue;
      if (!first) os << ",";
      first = false;
      os << k << "^" << m;
    }
    os << ")";
    return os.str();
  }
};

// All partitions of n with parts of size <= max_part.
inline std::vector<Partition> partitions_of(long n, long max_part) {
  std::vector<Partition> out;
  std::function<void(long, long, Partition&)> rec = [&](long rest, long largest, Partition& cur) {
    if (rest == 0) {
      out.push_back(cur.normalized());
      return;
    }
    for (long k = std::min(rest, largest); k >= 1; --k) {
      ++cur.l[k];
      rec(rest - k, k, cur);
      if (--cur.l[k] == 0) cur.l.erase(k);
    }
  };
  Partition p;
  rec(n, max_part, p);
  return out;
}

// n! / prod_r r^{l_r} l_r!
inline Rational cycle_weight(const Partition& l) {
  Rational w(factorial(l.n()));
  for (auto& [r, m] : l.l) {
    Integer rp;
    mpz_ui_pow_ui(rp.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(m));
    w /= Rational(rp) * Rational(factorial(m));
  }
  return w;
}

inline Rational inverse_multiplicity_factorials(const Partition& l) {
  Rational w = 1;
  for (auto& [r, m] : l.l) w /= Rational(factorial(m));
  return w;
}

inline Partition cycle_type(const std::vector<int>& perm) {
  Partition p;
  std::vector<char> seen(perm.size(), 0);
  for (size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    long len = 0;
    for (size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = 1;
      ++len;
    }
    ++p.l[len];
  }
  return p;
}

// ---------------------------------------------------------------------------
// Slot symbols: t_r = sum_{k, a} t[r,k,a] phi_a q^k with Psi-fixed bookkeeping symbols of weight r.

struct SlotSpace {
  RingPtr ring;
  long max_r = 1;
  std::vector<long> q_exponents;
  size_t rank = 1;

  static std::string name(long r, long k, size_t a) {
    return "t" + std::to_string(r) + "_" + std::to_string(k) + "_" + std::to_string(a);
  }
  static SlotSpace make(const GroundRing::Spec& base, long max_r, std::vector<long> q_exponents, size_t rank) {
    GroundRing::Spec s = base;
    s.planck_weight2 = 0;
    SlotSpace sp;
    sp.max_r = max_r;
    sp.q_exponents = std::move(q_exponents);
    sp.rank = rank;
    std::vector<Variable> extra;
    for (long r = 1; r <= max_r; ++r)
      for (long k : sp.q_exponents)
        for (size_t a = 0; a < rank; ++a) extra.push_back({name(r, k, a), static_cast<int>(2 * r), AdamsRule::fixed});
    sp.ring = GroundRing::make(s)->extended(extra, s.truncation_order);
    return sp;
  }
  LambdaElement slot(long r, long k, size_t a) const { return LambdaElement::variable(ring, name(r, k, a)); }
  std::optional<size_t> slot_index(long r, long k, size_t a) const { return ring->find(name(r, k, a)); }
  // (r, k, a) of a ring variable, if it is a slot symbol
  std::optional<std::array<long, 3>> decode(size_t var) const {
    const std::string& n = ring->var(var).name;
    if (n.size() < 2 || n[0] != 't' || !std::isdigit(static_cast<unsigned char>(n[1]))) return std::nullopt;
    std::array<long, 3> out{};
    std::istringstream is(n.substr(1));
    char sep;
    is >> out[0] >> sep >> out[1] >> sep >> out[2];
    return out;
  }
  LambdaElement planck(int k = 1) const { return LambdaElement::hbar(ring, k); }
  LambdaElement Q(int d = 1) const { return LambdaElement::novikov(ring, 1, d); }
};

// One input of the correlator: coordinates (q-exponent k, basis index a) -> coefficient.
using SlotInput = std::map<std::pair<long, size_t>, LambdaElement>;

inline SlotInput symbolic_input(const SlotSpace& sp, long r) {
  SlotInput in;
  for (long k : sp.q_exponents)
    for (size_t a = 0; a < sp.rank; ++a) in[{k, a}] = sp.slot(r, k, a);
  return in;
}

// Correlator values on basis inputs, extended poly-additively and Psi^r-linearly on slots of length r.
struct CorrelatorTable {
  // value on basis inputs; choices[r] lists the (k, a) picked for each of the l_r slots of length r
  using Base = std::function<LambdaElement(long g, const Partition& l, long d,
                                           const std::map<long, std::vector<std::pair<long, size_t>>>& choices)>;
  Base base;
  long max_genus = 0;
  long max_degree = 0;

  LambdaElement evaluate(long g, const Partition& l, long d, const std::map<long, std::vector<SlotInput>>& inputs) const {
    struct Seat {
      long r;
      const SlotInput* in;
    };
    std::vector<Seat> seats;
    for (auto& [r, m] : l.l) {
      auto it = inputs.find(r);
      if (m && (it == inputs.end() || static_cast<long>(it->second.size()) != m))
        throw std::invalid_argument("correlator: inputs do not match the partition");
      for (long i = 0; i < m; ++i) seats.push_back({r, &it->second[i]});
    }
    LambdaElement total;
    std::map<long, std::vector<std::pair<long, size_t>>> choices;
    std::function<void(size_t, LambdaElement)> rec = [&](size_t s, LambdaElement coeff) {
      if (coeff.is_zero()) return;
      if (s == seats.size()) {
        total += coeff * base(g, l, d, choices);
        return;
      }
      for (auto& [key, c] : *seats[s].in) {
        if (c.is_zero()) continue;
        choices[seats[s].r].push_back(key);
        rec(s + 1, coeff * c.adams(seats[s].r));
        choices[seats[s].r].pop_back();
      }
    };
    rec(0, LambdaElement(1));
    return total;
  }

  // Sample toy table: value = c(g, l, d) * prod over seats of 1/(1 + k^2 + a).
  static CorrelatorTable toy(std::function<LambdaElement(long, const Partition&, long)> coeff, long max_genus,
                             long max_degree) {
    CorrelatorTable t;
    t.max_genus = max_genus;
    t.max_degree = max_degree;
    t.base = [coeff](long g, const Partition& l, long d, const std::map<long, std::vector<std::pair<long, size_t>>>& ch) {
      LambdaElement v = coeff(g, l, d);
      if (v.is_zero()) return v;
      Rational w = 1;
      for (auto& [r, list] : ch)
        for (auto& [k, a] : list) w /= Rational(1 + k * k + static_cast<long>(a));
      return v * w;
    };
    return t;
  }
};

struct PotentialTruncation {
  long max_points = 4;  // n = sum r l_r
  long max_degree = 0;
};

// F_g = sum_d Q^d sum_l (1/prod l_r!) < t_1 ...; t_2 ...; ... >_{g,l,d}
inline FunctionalSeries assemble_genus_potential(const CorrelatorTable& T, const SlotSpace& sp, long g,
                                                 const PotentialTruncation& tr) {
  FunctionalSeries F(sp.ring, Cyclo(0));
  for (long d = 0; d <= std::min(tr.max_degree, T.max_degree); ++d) {
    LambdaElement Qd = sp.Q(static_cast<int>(d));
    for (long n = 0; n <= tr.max_points; ++n)
      for (auto& l : partitions_of(n, sp.max_r)) {
        std::map<long, std::vector<SlotInput>> inputs;
        for (auto& [r, m] : l.l) inputs[r] = std::vector<SlotInput>(m, symbolic_input(sp, r));
        LambdaElement v = T.evaluate(g, l, d, inputs);
        if (v.is_zero()) continue;
        F += Qd * v * Cyclo(inverse_multiplicity_factorials(l));
      }
  }
  return F;
}

// (R_k F)(t_1, t_2, ...) = F(t_k, t_2k, ...): slot index r -> r k. Slots beyond the space are out of the truncation.
inline FunctionalSeries rescale_slots(const SlotSpace& sp, const FunctionalSeries& f, long k) {
  if (k == 1) return f;
  FunctionalSeries out(sp.ring, Cyclo(0));
  for (auto& [key, c] : f.terms()) {
    LambdaElement::Key nk(sp.ring->size(), 0);
    bool lost = false;
    for (size_t i = 0; i < key.size(); ++i) {
      if (!key[i]) continue;
      auto code = sp.decode(i);
      if (!code) {
        nk[i] += key[i];
        continue;
      }
      auto j = sp.slot_index((*code)[0] * k, (*code)[1], static_cast<size_t>((*code)[2]));
      if (!j) {
        lost = true;
        break;
      }
      nk[*j] += key[i];
    }
    if (lost) continue;
    if (sp.ring->weight2(nk) > 2 * sp.ring->order()) continue;
    out += LambdaElement::monomial(sp.ring, nk, c);
  }
  return out;
}

// x_k := Psi^k R_k
inline FunctionalSeries adams_rescale(const SlotSpace& sp, const FunctionalSeries& f, long k) {
  return rescale_slots(sp, f, k).adams(k);
}

// log D = sum_g sum_k hbar^{k(g-1)} Psi^k(R_k F_g) / k, with hbar^{k(g-1)} produced as Psi^k(hbar^{g-1}).
inline FunctionalSeries descendant_log(const SlotSpace& sp, const std::vector<FunctionalSeries>& Fs) {
  FunctionalSeries G(sp.ring, Cyclo(0));
  long K = sp.ring->order();
  for (size_t g = 0; g < Fs.size(); ++g) {
    if (!Fs[g].constant_term().is_zero())
      throw std::invalid_argument("descendant potential: F_g must lie in the maximal ideal (no constant term)");
    LambdaElement h = sp.planck(static_cast<int>(g) - 1);
    for (long k = 1; k <= K; ++k) {
      LambdaElement hk = h.adams(k);
      if (hk != sp.planck(static_cast<int>(k * (static_cast<long>(g) - 1))))
        throw ContractViolation("Psi^k(hbar^{g-1}) differs from hbar^{k(g-1)}");
      G += hk * adams_rescale(sp, Fs[g], k) * Cyclo(make_rational(1, k));
    }
  }
  return G;
}

inline FunctionalSeries assemble_descendant(const SlotSpace& sp, const std::vector<FunctionalSeries>& Fs) {
  return descendant_log(sp, Fs).exp();
}

// prod over primes p <= prime_bound of (1 - Psi^p R_p / p) applied to G.
inline FunctionalSeries mobius_recover(const SlotSpace& sp, const FunctionalSeries& G, long prime_bound) {
  FunctionalSeries out = G;
  for (long p = 2; p <= prime_bound; ++p) {
    if (!is_prime(p)) continue;
    out = out - adams_rescale(sp, out, p) * Cyclo(make_rational(1, p));
  }
  return out;
}

// Formal operator algebra with x_a x_b = x_ab: coefficients of prod_p (1 - x_p/p) sum_{k<=N} x_k/k.
inline std::map<long, Rational> mobius_operator_coefficients(long prime_bound, long N) {
  std::map<long, Rational> cur;
  for (long k = 1; k <= N; ++k) cur[k] = make_rational(1, k);
  for (long p = 2; p <= prime_bound; ++p) {
    if (!is_prime(p)) continue;
    std::map<long, Rational> next = cur;
    for (auto& [k, c] : cur)
      if (k * p <= N) next[k * p] -= c / p;
    cur = std::move(next);
  }
  return cur;
}

// sum_l prod_k (Psi^k(nu)/k)^{l_k}/l_k!  against  exp(sum_k Psi^k(nu)/k), to the ring's truncation.
inline CheckReport disconnected_exp_check(const LambdaElement& nu, long degree) {
  CheckReport rep;
  RingPtr ring = nu.ring();
  if (nu.ideal_valuation() && *nu.ideal_valuation() < 1)
    throw std::invalid_argument("disconnected_exp_check: nu must lie in the maximal ideal");
  LambdaElement sum(ring, Cyclo(0));
  std::vector<LambdaElement> eps(degree + 1);
  for (long k = 1; k <= degree; ++k) {
    eps[k] = nu.adams(k) * Cyclo(make_rational(1, k));
    sum += eps[k];
  }
  LambdaElement rhs = sum.exp();
  LambdaElement lhs(ring, Cyclo(0));
  for (long n = 0; n <= degree; ++n)
    for (auto& l : partitions_of(n, degree)) {
      LambdaElement term(ring, Cyclo(1));
      for (auto& [k, m] : l.l) term = term * eps[k].pow(m) * Cyclo(1 / Rational(factorial(m)));
      lhs += term;
    }
  // permutation form for small n: (1/n!) sum_h prod_k Psi^k(nu)^{l_k(h)}
  LambdaElement perm(ring, Cyclo(1));
  for (long n = 1; n <= std::min(degree, 6L); ++n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    LambdaElement acc(ring, Cyclo(0));
    do {
      LambdaElement term(ring, Cyclo(1));
      for (auto& [k, m] : cycle_type(p).l) term = term * nu.adams(k).pow(m);
      acc += term;
    } while (std::next_permutation(p.begin(), p.end()));
    perm += acc * Cyclo(1 / Rational(factorial(n)));
  }
  long D = ring ? ring->order() : degree;
  auto cut = [&](const LambdaElement& x) { return ring ? x.truncate(std::min(D, degree)) : x; };
  rep.expect(cut(lhs) == cut(rhs), "partition sum differs from the exponential");
  if (degree <= 6) rep.expect(cut(perm) == cut(rhs), "permutation sum differs from the exponential");
  return rep;
}

// (1/n!) sum_{h in S_n} str_h  =  sum_{l |- n} (1/prod l_r!) prod_r r^{-l_r} str_l
inline CheckReport sn_resum_check(const std::function<LambdaElement(const Partition&)>& class_value, long n) {
  if (n > 8) throw std::invalid_argument("sn_resum_check: n > 8 refused");
  if (n < 0) throw std::invalid_argument("sn_resum_check: n must be non-negative");
  CheckReport rep;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  LambdaElement avg;
  std::map<std::string, long> class_sizes;
  do {
    Partition ct = cycle_type(p);
    avg += class_value(ct);
    ++class_sizes[ct.str()];
  } while (std::next_permutation(p.begin(), p.end()));
  avg = avg * Cyclo(1 / Rational(factorial(n)));
  LambdaElement resum;
  for (auto& l : partitions_of(n, std::max(1L, n))) {
    Rational w = inverse_multiplicity_factorials(l);
    for (auto& [r, m] : l.l)
      for (long i = 0; i < m; ++i) w /= r;
    resum += class_value(l) * Cyclo(w);
    rep.expect(n == 0 || Rational(class_sizes[l.str()]) == cycle_weight(l), "class size differs from cycle_weight");
  }
  rep.expect(avg == resum, "S_n average differs from the partition resummation");
  return rep;
}

// ---------------------------------------------------------------------------
// Adelic tensor product bookkeeping.

// Sector-slot ring: factor slots S{M}.{p}_{k}_{a} (sector h^p of X/Z_M) and adelic slots T{m}.{t}_{r}_{k}_{a}
// (t_r^{(zeta)} with zeta = e^{2 pi i t/m}); both of weight r(zeta).
struct AdelicSlotSpace {
  RingPtr ring;
  long max_M = 1;
  std::vector<long> q_exponents;
  size_t rank = 1;

  static std::string factor_name(long M, long p, long k, size_t a) {
    return "S" + std::to_string(M) + "." + std::to_string(p) + "_" + std::to_string(k) + "_" + std::to_string(a);
  }
  static std::string adelic_name(const Root& z, long r, long k, size_t a) {
    return "T" + std::to_string(z.order()) + "." + std::to_string(z.t) + "_" + std::to_string(r) + "_" +
           std::to_string(k) + "_" + std::to_string(a);
  }
  static AdelicSlotSpace make(const GroundRing::Spec& base, long max_M, std::vector<long> q_exponents, size_t rank) {
    GroundRing::Spec s = base;
    s.planck_weight2 = 0;
    AdelicSlotSpace sp;
    sp.max_M = max_M;
    sp.q_exponents = std::move(q_exponents);
    sp.rank = rank;
    std::vector<Variable> extra;
    for (long M = 1; M <= max_M; ++M)
      for (long p = 0; p < M; ++p) {
        Sector sec = sector_of(M, p);
        for (long k : sp.q_exponents)
          for (size_t a = 0; a < rank; ++a) {
            extra.push_back({factor_name(M, p, k, a), static_cast<int>(2 * sec.r), AdamsRule::fixed});
            extra.push_back({adelic_name(sec.eta, sec.r, k, a), static_cast<int>(2 * sec.r), AdamsRule::fixed});
          }
      }
    sp.ring = GroundRing::make(s)->extended(extra, s.truncation_order);
    return sp;
  }
  LambdaElement factor_slot(long M, long p, long k, size_t a) const {
    return LambdaElement::variable(ring, factor_name(M, mod_floor(p, M), k, a));
  }
  LambdaElement adelic_slot(const Root& z, long r, long k, size_t a) const {
    return LambdaElement::variable(ring, adelic_name(z, r, k, a));
  }
};

struct SectorRouting {
  long M, p;
  Root zeta;
  long r;
};

// Sectors of all M <= bound routed to adelic labels (zeta, r) with m r = M; throws unless this is a bijection.
inline std::vector<SectorRouting> adelic_reindexing(long bound) {
  std::vector<SectorRouting> out;
  std::set<std::pair<Root, long>> labels;
  for (long M = 1; M <= bound; ++M)
    for (long p = 0; p < M; ++p) {
      Sector s = sector_of(M, p);
      out.push_back({M, p, s.eta, s.r});
      if (!labels.insert({s.eta, s.r}).second) throw ContractViolation("sector re-indexing is not injective");
      if (h_of(M, s.eta) != p) throw ContractViolation("sector re-indexing does not invert");
    }
  long expected = 0;
  for (long m = 1; m <= bound; ++m) expected += euler_phi(m) * (bound / m);
  if (static_cast<long>(labels.size()) != expected) throw ContractViolation("sector re-indexing is not surjective");
  return out;
}

// Every monomial must satisfy slot degree + 2 e_hbar = 0; the scalar (g = 1) part is exempt.
inline void check_homogeneity(const AdelicSlotSpace& sp, const FunctionalSeries& f, long M) {
  size_t h = sp.ring->planck_index();
  for (auto& [key, c] : f.terms()) {
    long slots = 0;
    for (size_t i = 0; i < key.size(); ++i)
      if (i != h && sp.ring->var(i).rule == AdamsRule::fixed) slots += key[i];
    long eh = LambdaElement::exponent(key, h);  // exponent of sqrt(hbar)
    if (slots == 0 && eh == 0) continue;
    if (slots + eh != 0)
      throw ContractViolation("adelic_tensor: factor M=" + std::to_string(M) + " is not homogeneous at " +
                              f.monomial_str(key));
  }
}

// prod_M D_M( sum_zeta t^{(zeta)}_{r(zeta)} / sqrt(hbar)^{r(zeta)} h_(zeta), 1, Q^M )
inline FunctionalSeries adelic_tensor(const AdelicSlotSpace& sp, const std::map<long, FunctionalSeries>& factors) {
  FunctionalSeries out(sp.ring, Cyclo(1));
  size_t h = sp.ring->planck_index();
  auto q_index = sp.ring->find("Q");
  for (auto& [M, f] : factors) {
    if (M < 1 || M > sp.max_M) throw std::invalid_argument("adelic_tensor: factor index out of range");
    check_homogeneity(sp, f, M);
    FunctionalSeries g(sp.ring, Cyclo(0));
    for (auto& [key, c] : f.terms()) {
      LambdaElement::Key nk(sp.ring->size(), 0);
      int half = 0;  // resulting power of sqrt(hbar)
      for (size_t i = 0; i < key.size(); ++i) {
        if (!key[i]) continue;
        if (i == h) continue;  // hbar -> 1
        if (q_index && i == *q_index) {
          nk[i] += key[i] * static_cast<int>(M);
          continue;
        }
        const std::string& nm = sp.ring->var(i).name;
        if (nm[0] == 'S') {
          long MM, p, k, a;
          char dot, u1, u2;
          std::istringstream is(nm.substr(1));
          is >> MM >> dot >> p >> u1 >> k >> u2 >> a;
          if (MM != M) throw ContractViolation("adelic_tensor: factor M=" + std::to_string(M) + " uses slots of M=" +
                                               std::to_string(MM));
          Sector s = sector_of(M, p);
          nk[sp.ring->index(AdelicSlotSpace::adelic_name(s.eta, s.r, k, static_cast<size_t>(a)))] += key[i];
          half -= static_cast<int>(s.r) * key[i];
          continue;
        }
        nk[i] += key[i];
      }
      nk[h] += half;
      if (sp.ring->weight2(nk) > 2 * sp.ring->order()) continue;
      g += LambdaElement::monomial(sp.ring, nk, c);
    }
    out = out * g;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Correlator tables from JSON: {"max_genus":..,"max_degree":..,"support":[{"g":0,"l":{"1":3},"d":0,"coeff":"1/2"}]}
// Coefficients are products of rationals and ring symbols, e.g. "3/2*x^2*Q".

inline LambdaElement parse_coefficient(const RingPtr& ring, const std::string& text) {
  LambdaElement v(ring, Cyclo(1));
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw std::invalid_argument("coefficient: empty expression");
  std::istringstream is(s);
  std::string factor;
  while (std::getline(is, factor, '*')) {
    if (factor.empty()) throw std::invalid_argument("coefficient: malformed product '" + text + "'");
    if (std::isdigit(static_cast<unsigned char>(factor[0])) || factor[0] == '-') {
      v = v * Cyclo(parse_rational(factor));
      continue;
    }
    int e = 1;
    auto caret = factor.find('^');
    std::string name = factor.substr(0, caret);
    if (caret != std::string::npos) e = std::stoi(factor.substr(caret + 1));
    if (!ring || !ring->find(name)) throw std::invalid_argument("coefficient: unknown symbol '" + name + "'");
    v = v * LambdaElement::variable(ring, name, e);
  }
  return v;
}

inline CorrelatorTable table_from_json(const RingPtr& ring, const nlohmann::json& j) {
  struct Entry {
    long g, d;
    Partition l;
    LambdaElement c;
  };
  std::vector<Entry> entries;
  try {
    for (auto& e : j.at("support")) {
      Entry en;
      en.g = e.at("g").get<long>();
      en.d = e.value("d", 0L);
      for (auto& [k, m] : e.at("l").items()) en.l.l[std::stol(k)] = m.get<long>();
      en.l = en.l.normalized();
      en.c = parse_coefficient(ring, e.at("coeff").get<std::string>());
      entries.push_back(en);
    }
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("correlator table json: ") + ex.what());
  }
  long mg = j.value("max_genus", 0L), md = j.value("max_degree", 0L);
  return CorrelatorTable::toy(
      [entries](long g, const Partition& l, long d) {
        LambdaElement v;
        for (auto& e : entries)
          if (e.g == g && e.d == d && e.l == l) v += e.c;
        return v;
      },
      mg, md);
}

}  // namespace kadelic
