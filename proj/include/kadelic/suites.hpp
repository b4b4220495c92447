#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "kadelic/fock.hpp"
#include "kadelic/graphs.hpp"
#include "kadelic/loopspace.hpp"
#include "kadelic/potentials.hpp"
#include "kadelic/rr_twist.hpp"

namespace kadelic {

using nlohmann::json;

struct SuiteConfig {
  std::string target = "point";
  long max_r = 3;
  long max_m = 4;
  long max_M = 4;
  long series_order = 8;
  long lambda_degree = 6;
  std::uint64_t seed = 1;

  json to_json() const {
    return {{"target", target},       {"max-r", max_r},
            {"max-m", max_m},         {"max-M", max_M},
            {"series-order", series_order}, {"lambda-degree", lambda_degree},
            {"seed", seed}};
  }
  static SuiteConfig from_json(const json& j) {
    SuiteConfig c;
    c.target = j.value("target", c.target);
    c.max_r = j.value("max-r", c.max_r);
    c.max_m = j.value("max-m", c.max_m);
    c.max_M = j.value("max-M", c.max_M);
    c.series_order = j.value("series-order", c.series_order);
    c.lambda_degree = j.value("lambda-degree", c.lambda_degree);
    c.seed = j.value("seed", c.seed);
    return c;
  }
  void validate() const {
    auto positive = [](long v, const char* field) {
      if (v < 1) throw std::invalid_argument(std::string("config field '") + field + "' must be a positive integer");
    };
    positive(max_r, "max-r");
    positive(max_m, "max-m");
    positive(max_M, "max-M");
    positive(series_order, "series-order");
    positive(lambda_degree, "lambda-degree");
  }
};

enum class SuiteStatus { pass, fail, skipped };

inline const char* status_name(SuiteStatus s) {
  switch (s) {
    case SuiteStatus::pass:
      return "pass";
    case SuiteStatus::fail:
      return "fail";
    default:
      return "skipped";
  }
}

struct CaseOutcome {
  bool ok = true;
  long checks = 0;
  std::string detail;
  static CaseOutcome from(const CheckReport& r) { return {r.ok, r.checks, r.detail}; }
};

struct SuiteResult {
  std::string suite;
  SuiteStatus status = SuiteStatus::pass;
  long checks = 0;
  long cases = 0;
  double duration_ms = 0;
  std::string reason;
  bool timed_out = false;
  std::optional<json> counterexample;

  json to_json() const {
    json j{{"suite", suite}, {"status", status_name(status)}, {"checks", checks}, {"duration_ms", duration_ms}};
    if (!reason.empty()) j["reason"] = reason;
    if (counterexample) j["counterexample"] = *counterexample;
    return j;
  }
};

// Everything a case needs besides its own parameters.
struct SuiteContext {
  SuiteConfig cfg;
  TargetPtr target;
  RingPtr ring;
  explicit SuiteContext(SuiteConfig c) : cfg(std::move(c)) {
    target = load_target(cfg.target);
    ring = default_ring(cfg.lambda_degree);
  }
};

struct Suite {
  std::string name;
  std::string summary;
  std::function<std::optional<std::string>(const SuiteConfig&)> skip_reason;
  std::function<std::vector<json>(const SuiteContext&)> cases;
  std::function<CaseOutcome(const SuiteContext&, const json&)> check;
};

namespace suite_detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

// Independent stream per suite so adding a suite does not perturb the others.
inline std::mt19937_64 rng_for(const SuiteConfig& cfg, const std::string& suite) {
  return std::mt19937_64(cfg.seed ^ fnv1a(suite));
}

inline std::string random_rational(std::mt19937_64& g, long num = 5, long den = 4) {
  std::uniform_int_distribution<long> n(-num, num), d(1, den);
  return to_string(make_rational(n(g), d(g)));
}

inline Rational rat(const json& j) { return parse_rational(j.get<std::string>()); }

inline Root root_at(const json& j) { return parse_root(j.get<std::string>()); }

// A K-class from [[basis index, "coefficient", novikov power], ...].
inline KClass kclass_from(const SuiteContext& ctx, const json& terms) {
  KClass acc(ctx.target);
  for (auto& t : terms) {
    LambdaElement c(ctx.ring, Cyclo(rat(t[1])));
    long d = t[2].get<long>();
    if (d > 0) c = c * LambdaElement::novikov(ctx.ring, 1, static_cast<int>(d));
    acc += KClass::basis(ctx.target, t[0].get<size_t>(), c);
  }
  return acc;
}

inline json random_kclass(std::mt19937_64& g, size_t rank, long max_q = 1) {
  json out = json::array();
  std::uniform_int_distribution<long> qd(0, max_q);
  for (size_t a = 0; a < rank; ++a) out.push_back({a, random_rational(g), qd(g)});
  return out;
}

inline std::vector<Root> roots_of_order_dividing(long M) {
  std::vector<Root> out;
  for (long m : divisors(M))
    for (auto& z : primitive_roots(m)) out.push_back(z);
  return out;
}

inline std::string pair_detail(const LambdaElement& a, const LambdaElement& b) { return a.str() + " vs " + b.str(); }

// ---------------------------------------------------------------------------

inline Suite adelic_symplecticity() {
  Suite s;
  s.name = "adelic-symplecticity";
  s.summary = "Omega^inf(F, G) equals the adelic form of the images, F in K_+ monomials, G in K_- partial fractions";
  s.skip_reason = [](const SuiteConfig& c) -> std::optional<std::string> {
    if (c.series_order < 6) return "needs series-order >= 6 to resolve pole order 3 residues";
    return std::nullopt;
  };
  s.cases = [](const SuiteContext& ctx) {
    std::vector<json> out;
    for (long r = 1; r <= ctx.cfg.max_r; ++r)
      for (long k = -3; k <= 3; ++k)
        for (size_t a = 0; a < ctx.target->rank(); ++a)
          for (auto& z : roots_up_to(ctx.cfg.max_m))
            for (int j = 1; j <= 3; ++j)
              for (size_t b = 0; b < ctx.target->rank(); ++b)
                out.push_back({{"r", r}, {"k", k}, {"a", a}, {"zeta", root_str(z)}, {"j", j}, {"b", b},
                               {"novikov", (k + j) % 2 == 0 ? 1 : 0}});
    return out;
  };
  s.check = [](const SuiteContext& ctx, const json& p) {
    long r = p["r"];
    QRational f = QRational::monomial(KClass::basis(ctx.target, p["a"].get<size_t>()), p["k"].get<long>());
    LambdaElement c(ctx.ring, Cyclo(1));
    if (p["novikov"].get<int>()) c = LambdaElement::novikov(ctx.ring, 1);
    QRational g = QRational::pole(KClass::basis(ctx.target, p["b"].get<size_t>(), c), root_at(p["zeta"]), p["j"].get<int>());
    LoopSequence F(r, f), G(r, g);
    long m = ctx.cfg.max_m, order = ctx.cfg.series_order;
    LambdaElement lhs = omega_inf(F, G);
    LambdaElement rhs = omega_adelic(adelic_map(F, m, order), adelic_map(G, m, order));
    CaseOutcome o;
    o.checks = 1;
    if (lhs != rhs) o = {false, 1, "Omega^inf " + pair_detail(lhs, rhs)};
    return o;
  };
  return s;
}

inline Suite darboux() {
  Suite s;
  s.name = "darboux";
  s.summary = "adelic-block and twisted Darboux bases pair to -delta";
  s.skip_reason = [](const SuiteConfig& c) -> std::optional<std::string> {
    if (c.series_order < 6) return "needs series-order >= 6 for generators of index 4";
    return std::nullopt;
  };
  s.cases = [](const SuiteContext& ctx) {
    std::vector<json> out;
    for (auto& z : roots_up_to(ctx.cfg.max_m))
      for (long r = 1; r <= ctx.cfg.max_r; ++r) out.push_back({{"space", "adelic"}, {"zeta", root_str(z)}, {"r", r}});
    for (long M = 1; M <= ctx.cfg.max_M; ++M)
      for (long p = 0; p < M; ++p) out.push_back({{"space", "twisted"}, {"M", M}, {"p", p}});
    return out;
  };
  s.check = [](const SuiteContext& ctx, const json& p) {
    CheckReport rep;
    long order = ctx.cfg.series_order;
    size_t n = ctx.target->rank();
    bool twisted = p["space"] == "twisted";
    Root z;
    long r, M = 0;
    if (twisted) {
      M = p["M"];
      Sector sec = sector_of(M, p["p"].get<long>());
      z = sec.eta;
      r = sec.r;
    } else {
      z = root_at(p["zeta"]);
      r = p["r"];
    }
    auto space = twisted ? DarbouxSpace::twisted : DarbouxSpace::adelic_block;
    for (long k = 0; k <= 4; ++k)
      for (long l = 0; l <= 4; ++l)
        for (size_t a = 0; a < n; ++a)
          for (size_t b = 0; b < n; ++b) {
            auto F = darboux_basis(space, ctx.target, z, r, k, a, order);
            auto G = darboux_basis(space, ctx.target, z, r, l, b, order);
            LambdaElement v = twisted ? omega_twisted(M, {{F.f_sector, F.f}}, {{G.g_sector, G.g}})
                                      : block_pair(r, F.f_sector, F.f, G.g_sector, G.g);
            LambdaElement want = (k == l && a == b) ? LambdaElement(-1) : LambdaElement();
            rep.expect(v == want, "pairing (k=" + std::to_string(k) + ", l=" + std::to_string(l) + ", a=" +
                                      std::to_string(a) + ", b=" + std::to_string(b) + ") = " + v.str());
          }
    return CaseOutcome::from(rep);
  };
  return s;
}

inline Suite box_pair() {
  Suite s;
  s.name = "box-pair";
  s.summary = "Box(eta, q^-1) Box(eta^-1, q) collapses to the exponential of the Adams-weight residue terms";
  s.skip_reason = [](const SuiteConfig& c) -> std::optional<std::string> {
    if (c.series_order < 2) return "needs series-order >= 2";
    return std::nullopt;
  };
  s.cases = [](const SuiteContext& ctx) {
    std::vector<json> out;
    for (auto& z : roots_up_to(ctx.cfg.max_m))
      for (long r = 1; r <= ctx.cfg.max_r; ++r) out.push_back({{"eta", root_str(z)}, {"r", r}});
    return out;
  };
  s.check = [](const SuiteContext& ctx, const json& p) {
    long order = ctx.cfg.series_order;
    return CaseOutcome::from(box_pair_check(ctx.target, root_at(p["eta"]), p["r"].get<long>(), order, order));
  };
  return s;
}

inline Suite rearrange() {
  Suite s;
  s.name = "rearrange";
  s.summary = "sector product rearrangement, the 1 - Y^r identity, and composite Delta = Box";
  s.skip_reason = [](const SuiteConfig& c) -> std::optional<std::string> {
    if (c.series_order < 2) return "needs series-order >= 2";
    return std::nullopt;
  };
  s.cases = [](const SuiteContext& ctx) {
    std::vector<json> out;
    for (long M = 1; M <= ctx.cfg.max_M; ++M)
      for (long p = 1; p <= M; ++p) out.push_back({{"M", M}, {"s", p}});
    return out;
  };
  s.check = [](const SuiteContext& ctx, const json& p) {
    long M = p["M"], sp = p["s"];
    CheckReport rep = rearrange_product(M, sp, ctx.cfg.lambda_degree, ctx.cfg.series_order);
    if (!rep.ok) return CaseOutcome::from(rep);
    long order = std::min(ctx.cfg.series_order, 6L);
    CheckReport d = delta_composite_check(ctx.target, M, sp % M, order, order);
    rep.checks += d.checks;
    if (!d.ok) rep.fail(d.detail);
    return CaseOutcome::from(rep);
  };
  return s;
}

inline Suite euler_maclaurin() {
  Suite s;
  s.name = "euler-maclaurin";
  s.summary = "near-q=1 asymptotics against the Bernoulli oracle; prod (1 - Y q^l) against its exponential form";
  s.skip_reason = [](const SuiteConfig& c) -> std::optional<std::string> {
    if (c.series_order < 2) return "needs series-order >= 2";
    return std::nullopt;
  };
  s.cases = [](const SuiteContext& ctx) {
    auto g = rng_for(ctx.cfg, "euler-maclaurin");
    std::vector<json> out;
    for (long support = 0; support <= ctx.cfg.lambda_degree; ++support) {
      json sv = json::array();
      for (long k = 0; k <= support; ++k) sv.push_back(random_rational(g));
      std::uniform_int_distribution<long> deg(-2, 2);
      out.push_back({{"kind", "asymptotics"}, {"s", sv}, {"line", deg(g)}, {"mult", random_rational(g)}});
    }
    out.push_back({{"kind", "product"}});
    return out;
  };
  s.check = [](const SuiteContext& ctx, const json& p) {
    CaseOutcome o;
    if (p["kind"] == "product") {
      return CaseOutcome::from(em_log_product(std::min(4L, ctx.cfg.lambda_degree), ctx.cfg.series_order));
    }
    MultClass S;
    long k = 0;
    for (auto& x : p["s"]) S.s[k++] = LambdaElement(Cyclo(rat(x)));
    KClass E = line_bundle(ctx.target, p["line"].get<long>()) * Cyclo(rat(p["mult"]));
    ZSeries a = em_asymptotics(S, E, ctx.cfg.series_order), b = em_asymptotics_oracle(S, E, ctx.cfg.series_order);
    o.checks = 1;
    if (!(a == b)) o = {false, 1, "asymptotics " + a.str("z") + " vs oracle " + b.str("z")};
    return o;
  };
  return s;
}

inline Suite qch_symplectic() {
  Suite s;
  s.name = "qch-symplectic";
  s.summary = "the quantum Chern character carries Omega^fake to the cohomological form; 1 - q maps to -z + ...";
  s.skip_reason = [](const SuiteConfig& c) -> std::optional<std::string> {
    if (c.series_order < 4) return "needs series-order >= 4 for Laurent pairs with poles of order 3";
    return std::nullopt;
  };
  s.cases = [](const SuiteContext& ctx) {
    auto g = rng_for(ctx.cfg, "qch-symplectic");
    std::vector<json> out;
    for (int i = 0; i < 50; ++i) {
      json f = json::array(), h = json::array();
      for (long e = -3; e <= 3; ++e) {
        f.push_back({e, random_kclass(g, ctx.target->rank(), 0)});
        h.push_back({e, random_kclass(g, ctx.target->rank(), 0)});
      }
      out.push_back({{"kind", "pair"}, {"f", f}, {"g", h}});
    }
    out.push_back({{"kind", "dilaton"}});
    return out;
  };
  s.check = [](const SuiteContext& ctx, const json& p) {
    long order = ctx.cfg.series_order;
    CaseOutcome o;
    o.checks = 1;
    if (p["kind"] == "dilaton") {
      KSeries shift = KSeries::monomial(KClass::scalar(ctx.target, LambdaElement(-1)), 1);
      ZSeries z = qch(ctx.target, shift, order);
      // (1 - e^z) times a class whose degree-0 part is 1
      HClass lead = z.coeff(1);
      bool ok = z.valuation() == 1 && detail::degree_part(lead, 0) == HClass::constant(ctx.target->dim(), LambdaElement(-1));
      for (long n = 2; n < order && ok; ++n)
        ok = z.coeff(n) == lead * LambdaElement(Rational(1) / Rational(factorial(n)));
      if (!ok) o = {false, 1, "qch(1 - q) = " + z.str("z")};
      return o;
    }
    auto series = [&](const json& terms) {
      KSeries acc = KSeries::zero(order);
      for (auto& t : terms) acc = acc + KSeries::monomial(kclass_from(ctx, t[1]), t[0].get<long>(), order);
      return acc;
    };
    KSeries f = series(p["f"]), h = series(p["g"]);
    LambdaElement a = omega_cohomological(qch(ctx.target, f, order), qch(ctx.target, h, order));
    LambdaElement b = omega_fake(f, h);
    if (a != b) o = {false, 1, "Omega^H " + pair_detail(a, b)};
    return o;
  };
  return s;
}

inline Suite propagator_graph() {
  Suite s;
  s.name = "propagator-graph";
  s.summary = "adelic images of K_- generators equal the Psi^r nabla closed form and the residue integral";
  s.skip_reason = [](const SuiteConfig& c) -> std::optional<std::string> {
    if (c.max_m < 2) return "needs max-m >= 2 for an unbalanced pair of roots";
    return std::nullopt;
  };
  s.cases = [](const SuiteContext& ctx) {
    std::vector<json> out;
    for (auto& eta : roots_up_to(ctx.cfg.max_m))
      for (auto& zeta : roots_up_to(ctx.cfg.max_m)) {
        if ((eta * zeta).is_one()) continue;
        for (long r = 1; r <= ctx.cfg.max_r; ++r) out.push_back({{"eta", root_str(eta)}, {"zeta", root_str(zeta)}, {"r", r}});
      }
    return out;
  };
  s.check = [](const SuiteContext& ctx, const json& p) {
    CheckReport rep;
    Root eta = root_at(p["eta"]), zeta = root_at(p["zeta"]);
    long r = p["r"], order = ctx.cfg.series_order;
    for (long k = 0; k <= 4; ++k)
      for (size_t a = 0; a < ctx.target->rank(); ++a) {
        KSeries closed = propagator_map(ctx.target, eta, zeta, k, a, order, r);
        KSeries res = propagator_map_residue(ctx.target, eta, zeta, k, a, order, r);
        KSeries image = expand_at(QRational::generator(KClass::basis(ctx.target, a), zeta, static_cast<int>(k)), eta,
                                  eta.order(), r, order);
        std::string tag = " (k=" + std::to_string(k) + ", a=" + std::to_string(a) + ")";
        rep.expect(image == closed, "adelic image differs from Psi^r nabla" + tag);
        rep.expect(res == closed, "residue integral differs from the closed form" + tag);
      }
    return CaseOutcome::from(rep);
  };
  return s;
}

inline LinearOperator derivative(size_t n, size_t b, const LambdaElement& c) {
  LinearOperator op;
  op.nvars = n;
  std::vector<int> z(n, 0), d(n, 0);
  d[b] = 1;
  op.terms.push_back({c, z, d});
  return op;
}

inline std::vector<std::vector<LambdaElement>> symmetric_from(const json& j) {
  size_t n = j.size();
  std::vector<std::vector<LambdaElement>> S(n, std::vector<LambdaElement>(n));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) S[a][b] = LambdaElement(Cyclo(rat(j[std::min(a, b)][std::max(a, b)])));
  return S;
}

inline json random_symmetric(std::mt19937_64& g, size_t n) {
  json S = json::array();
  for (size_t a = 0; a < n; ++a) {
    json row = json::array();
    for (size_t b = 0; b < n; ++b) row.push_back(random_rational(g, 3, 3));
    S.push_back(row);
  }
  return S;
}

inline Suite stone_von_neumann() {
  Suite s;
  s.name = "stone-von-neumann";
  s.summary = "transport exp(hbar/2 S d d) conjugates q into q + hbar S d, and is inverted by -S";
  s.skip_reason = [](const SuiteConfig&) -> std::optional<std::string> { return std::nullopt; };
  s.cases = [](const SuiteContext& ctx) {
    auto g = rng_for(ctx.cfg, "stone-von-neumann");
    std::vector<json> out;
    for (size_t n = 1; n <= 4; ++n) {
      json S = random_symmetric(g, n);
      for (long d = 0; d <= ctx.cfg.lambda_degree; ++d) out.push_back({{"N", n}, {"degree", d}, {"S", S}});
    }
    return out;
  };
  s.check = [](const SuiteContext& ctx, const json& p) {
    CheckReport rep;
    size_t n = p["N"];
    long d = p["degree"];
    auto S = symmetric_from(p["S"]);
    auto minusS = S;
    for (auto& row : minusS)
      for (auto& x : row) x = -x;
    RingPtr R = ctx.ring;
    LambdaElement hb = LambdaElement::hbar(R, 1);
    std::vector<int> e(n, 0);
    std::function<void(size_t, long)> each = [&](size_t i, long left) {
      if (i + 1 == n) {
        e[i] = static_cast<int>(left);
        FockState s0 = FockState::monomial(R, e);
        FockState T = polarization_transport(R, S, s0);
        for (size_t a = 0; a < n; ++a) {
          FockState lhs = polarization_transport(R, S, FockState::variable(R, n, a) * s0);
          FockState rhs = FockState::variable(R, n, a) * T;
          for (size_t b = 0; b < n; ++b) rhs += apply_operator(derivative(n, b, S[a][b] * hb), T);
          rep.expect((lhs - rhs).is_zero(), "conjugation fails on " + s0.str() + " for q_" + std::to_string(a));
        }
        rep.expect((polarization_transport(R, minusS, T) - s0).is_zero(), "transport by -S does not invert on " + s0.str());
        return;
      }
      for (long k = 0; k <= left; ++k) {
        e[i] = static_cast<int>(k);
        each(i + 1, left - k);
      }
    };
    each(0, d);
    return CaseOutcome::from(rep);
  };
  return s;
}

inline Suite wick() {
  Suite s;
  s.name = "wick";
  s.summary = "operator form of the Wick sum equals enumeration of half-edge matchings";
  s.skip_reason = [](const SuiteConfig&) -> std::optional<std::string> { return std::nullopt; };
  s.cases = [](const SuiteContext& ctx) {
    auto g = rng_for(ctx.cfg, "wick");
    std::vector<json> out;
    std::uniform_int_distribution<int> vars(1, 2), deg(0, 3);
    for (int verts = 1; verts <= 4; ++verts)
      for (int rep = 0; rep < 5; ++rep) {
        json group = json::array(), states = json::array();
        size_t n = 0;
        for (int v = 0; v < verts; ++v) {
          int k = vars(g);
          json st = json::array();
          for (int term = 0; term < 2; ++term) {
            json mono = json::array();
            for (int i = 0; i < k; ++i) mono.push_back(deg(g));
            st.push_back({mono, random_rational(g)});
          }
          states.push_back(st);
          for (int i = 0; i < k; ++i) group.push_back(v);
          n += k;
        }
        out.push_back({{"group", group}, {"states", states}, {"S", random_symmetric(g, n)}, {"max_edges", 3}});
      }
    return out;
  };
  s.check = [](const SuiteContext& ctx, const json& p) {
    std::vector<int> group = p["group"].get<std::vector<int>>();
    size_t n = group.size();
    auto S = symmetric_from(p["S"]);
    std::vector<FockState> vertices;
    size_t offset = 0;
    for (auto& st : p["states"]) {
      FockState v(ctx.ring, n);
      size_t k = st[0][0].size();
      for (auto& term : st) {
        FockState::Mono e(n, 0);
        for (size_t i = 0; i < k; ++i) e[offset + i] = term[0][i].get<int>();
        v.add(e, LambdaElement(Cyclo(rat(term[1]))));
      }
      offset += k;
      vertices.push_back(v);
    }
    long E = p["max_edges"];
    FockState a = wick_operator(ctx.ring, vertices, group, S, E), b = wick_matchings(ctx.ring, vertices, group, S, E);
    CaseOutcome o;
    o.checks = 1;
    if (!(a - b).is_zero()) o = {false, 1, "operator " + a.str() + " vs matchings " + b.str()};
    return o;
  };
  return s;
}

inline GraphBounds hurwitz_bounds(const SuiteConfig& c) {
  GraphBounds b;
  b.max_vertices = 3;
  b.max_M = c.max_M;
  b.max_genus = 0;
  b.max_degree = 0;
  b.max_flags = 3;
  b.max_edges = 1;
  return b;
}

inline Suite hurwitz() {
  Suite s;
  s.name = "hurwitz";
  s.summary = "Hurwitz-Euler formula against cover gluing, the -eu/2 decomposition, and the (i)/(ii) cancellation";
  s.skip_reason = [](const SuiteConfig&) -> std::optional<std::string> { return std::nullopt; };
  s.cases = [](const SuiteContext& ctx) {
    std::vector<json> out;
    enumerate_graphs(hurwitz_bounds(ctx.cfg), [&](const DecoratedGraph& g) { out.push_back(to_json(g)); });
    return out;
  };
  s.check = [](const SuiteContext&, const json& p) {
    CheckReport rep;
    DecoratedGraph g = graph_from_json(p);
    rep.expect(validate_graph(g).empty(), "enumerated graph is invalid");
    long eu = hurwitz_euler(g), oracle = hurwitz_euler_oracle(g);
    rep.expect(eu == oracle, "eu " + std::to_string(eu) + " vs gluing " + std::to_string(oracle));
    WeightReport w = graph_weights(g);
    Rational sum = w.terms[0] + w.terms[1] + w.terms[2] + w.terms[3];
    rep.expect(sum == w.minus_eu_half, "four terms sum to " + to_string(sum) + ", -eu/2 = " + to_string(w.minus_eu_half));
    rep.expect(w.items_i_ii_cancel, "items (i) and (ii) do not cancel");
    Rational rest = w.terms[1] + w.terms[0] + w.items_iii_iv();
    rep.expect(rest == w.minus_eu_half, "items (i)-(iv) do not recombine to -eu/2");
    return CaseOutcome::from(rep);
  };
  return s;
}

// Toy potential with F_g in the maximal ideal; used for the Mobius round trip.
inline CorrelatorTable toy_table(const SlotSpace& sp) {
  return CorrelatorTable::toy(
      [&](long g, const Partition& l, long d) {
        if (l.n() == 0 && d == 0) return LambdaElement();
        return LambdaElement(sp.ring, Cyclo(make_rational(g + 1 + l.n(), 1 + d)));
      },
      1, 1);
}

inline Suite mobius() {
  Suite s;
  s.name = "mobius";
  s.summary = "prod_p (1 - Psi^p R_p / p) kills x_n for 1 < n <= 12 and recovers sum hbar^{g-1} F_g";
  s.skip_reason = [](const SuiteConfig& c) -> std::optional<std::string> {
    if (c.lambda_degree < 2) return "needs lambda-degree >= 2";
    return std::nullopt;
  };
  s.cases = [](const SuiteContext&) {
    return std::vector<json>{{{"kind", "operator"}, {"N", 12}, {"primes", 11}}, {{"kind", "potential"}, {"primes", 11}}};
  };
  s.check = [](const SuiteContext& ctx, const json& p) {
    CheckReport rep;
    long P = p["primes"];
    if (p["kind"] == "operator") {
      long N = p["N"];
      auto c = mobius_operator_coefficients(P, N);
      rep.expect(c[1] == 1, "x_1 coefficient is " + to_string(c[1]));
      for (long k = 2; k <= N; ++k) rep.expect(c[k] == 0, "x_" + std::to_string(k) + " coefficient is " + to_string(c[k]));
      return CaseOutcome::from(rep);
    }
    GroundRing::Spec base;
    base.truncation_order = ctx.cfg.lambda_degree;
    base.extra_generators = {{"x", 0}};
    auto sp = SlotSpace::make(base, ctx.cfg.lambda_degree, {0, 1}, 1);
    auto T = toy_table(sp);
    PotentialTruncation tr{4, 1};
    auto F0 = assemble_genus_potential(T, sp, 0, tr), F1 = assemble_genus_potential(T, sp, 1, tr);
    auto G = descendant_log(sp, {F0, F1});
    rep.expect(mobius_recover(sp, G, P) == sp.planck(-1) * F0 + F1, "Mobius inversion does not recover the potential");
    return CaseOutcome::from(rep);
  };
  return s;
}

inline Suite disconnected_exp() {
  Suite s;
  s.name = "disconnected-exp";
  s.summary = "partition sum equals exp(sum Psi^k / k), and S_n class sums resum by cycle type";
  s.skip_reason = [](const SuiteConfig&) -> std::optional<std::string> { return std::nullopt; };
  s.cases = [](const SuiteContext& ctx) {
    auto g = rng_for(ctx.cfg, "disconnected-exp");
    std::vector<json> out;
    for (int i = 0; i < 4; ++i) out.push_back({{"kind", "partition"}, {"a", random_rational(g)}, {"b", random_rational(g)}});
    for (long n = 0; n <= std::min(6L, ctx.cfg.lambda_degree); ++n) {
      json w = json::array();
      for (int i = 0; i < 3; ++i) w.push_back(random_rational(g));
      out.push_back({{"kind", "resum"}, {"n", n}, {"w", w}});
    }
    return out;
  };
  s.check = [](const SuiteContext& ctx, const json& p) {
    if (p["kind"] == "partition") {
      GroundRing::Spec spec;
      spec.truncation_order = ctx.cfg.lambda_degree;
      spec.extra_generators = {{"x", 0}};
      auto R = GroundRing::make(spec);
      LambdaElement nu = LambdaElement::novikov(R, 1) * Cyclo(rat(p["a"])) + LambdaElement::variable(R, "x") * Cyclo(rat(p["b"]));
      return CaseOutcome::from(disconnected_exp_check(nu, ctx.cfg.lambda_degree));
    }
    std::vector<Rational> w;
    for (auto& x : p["w"]) w.push_back(rat(x));
    auto value = [&](const Partition& l) {
      Rational v = 1;
      for (auto& [k, m] : l.l) v *= (w[0] + w[1] * k + w[2] * m * k);
      return LambdaElement(Cyclo(v));
    };
    return CaseOutcome::from(sn_resum_check(value, p["n"].get<long>()));
  };
  return s;
}

inline Suite sector_fourier() {
  Suite s;
  s.name = "sector-fourier";
  s.summary = "sector and character forms of Z_M-vectors are inverse Fourier transforms";
  s.skip_reason = [](const SuiteConfig&) -> std::optional<std::string> { return std::nullopt; };
  s.cases = [](const SuiteContext& ctx) {
    auto g = rng_for(ctx.cfg, "sector-fourier");
    std::vector<json> out;
    for (long M = 1; M <= ctx.cfg.max_M; ++M) {
      json comps = json::array();
      for (long j = 0; j < M; ++j) {
        json terms = json::array();
        for (long e = -1; e <= 1; ++e) terms.push_back({e, random_kclass(g, ctx.target->rank(), 0)});
        comps.push_back(terms);
      }
      out.push_back({{"M", M}, {"components", comps}});
    }
    return out;
  };
  s.check = [](const SuiteContext& ctx, const json& p) {
    CheckReport rep;
    long M = p["M"], order = ctx.cfg.series_order;
    SectorVector v;
    v.M = M;
    for (long j = 0; j < M; ++j) {
      KSeries acc = KSeries::zero(order);
      for (auto& t : p["components"][j]) acc = acc + KSeries::monomial(kclass_from(ctx, t[1]), t[0].get<long>(), order);
      v.components[j] = acc;
    }
    SectorVector chars = fourier_sectors(v);
    SectorVector back = fourier_sectors(chars);
    rep.expect(chars.character_form && !back.character_form, "forms not toggled");
    for (long j = 0; j < M; ++j) rep.expect(back.components[j] == v.components[j], "round trip differs at j = " + std::to_string(j));
    // a vector supported on the identity sector has constant character components
    SectorVector unit;
    unit.M = M;
    unit.components[0] = v.components[0];
    SectorVector uc = fourier_sectors(unit);
    for (long a = 0; a < M; ++a) {
      KSeries want = v.components[0].map([&](const KClass& x) { return KClass(x * Cyclo(make_rational(1, M))); });
      rep.expect(uc.components[a] == want, "identity-sector character " + std::to_string(a) + " is not f/M");
    }
    return CaseOutcome::from(rep);
  };
  return s;
}

inline Suite twisted_pairing() {
  Suite s;
  s.name = "twisted-pairing";
  s.summary = "(Psi^r a, Psi^r b)^(r) = r Psi^r (a, b) on basis pairs with Novikov coefficients";
  s.skip_reason = [](const SuiteConfig&) -> std::optional<std::string> { return std::nullopt; };
  s.cases = [](const SuiteContext& ctx) {
    std::vector<json> out;
    for (long r = 1; r <= ctx.cfg.max_r; ++r)
      for (size_t a = 0; a < ctx.target->rank(); ++a)
        for (size_t b = 0; b < ctx.target->rank(); ++b) out.push_back({{"r", r}, {"a", a}, {"b", b}});
    return out;
  };
  s.check = [](const SuiteContext& ctx, const json& p) {
    CheckReport rep;
    long r = p["r"];
    LambdaElement Q = LambdaElement::novikov(ctx.ring, 1);
    for (int qa = 0; qa <= 1; ++qa) {
      KClass A = KClass::basis(ctx.target, p["a"].get<size_t>(), qa ? Q : LambdaElement(1));
      KClass B = KClass::basis(ctx.target, p["b"].get<size_t>());
      LambdaElement lhs = twisted_pair(r, adams_k(r, A), adams_k(r, B));
      LambdaElement rhs = poincare_pair(A, B).adams(r) * Cyclo(r);
      rep.expect(lhs == rhs, "twisted pairing " + pair_detail(lhs, rhs));
    }
    return CaseOutcome::from(rep);
  };
  return s;
}

inline Suite input_substitution_suite() {
  Suite s;
  s.name = "input-substitution";
  s.summary = "sector inputs agree with adelic expansions; zeta = 1, r = M, t = 0 gives 1 - q^M";
  s.skip_reason = [](const SuiteConfig& c) -> std::optional<std::string> {
    if (c.series_order < 2) return "needs series-order >= 2";
    return std::nullopt;
  };
  s.cases = [](const SuiteContext& ctx) {
    auto g = rng_for(ctx.cfg, "input-substitution");
    std::vector<json> out;
    for (long M = 1; M <= ctx.cfg.max_M; ++M) out.push_back({{"kind", "dilaton"}, {"M", M}});
    for (long M = 1; M <= ctx.cfg.max_M; ++M)
      for (auto& z : roots_of_order_dividing(M)) {
        json t = json::array();
        for (long k = 0; k <= 2; ++k) t.push_back({k, random_kclass(g, ctx.target->rank(), 1)});
        out.push_back({{"kind", "sector"}, {"zeta", root_str(z)}, {"r", M / z.order()}, {"t", t}});
      }
    return out;
  };
  s.check = [](const SuiteContext& ctx, const json& p) {
    long order = ctx.cfg.series_order;
    CaseOutcome o;
    o.checks = 1;
    KClass one = KClass::scalar(ctx.target, LambdaElement(1));
    if (p["kind"] == "dilaton") {
      long M = p["M"];
      KSeries got = input_substitution(ctx.target, {}, Root(1, 0), M, order);
      KSeries want = (KSeries(one, order) - kscale(binomial_series(Rational(M), order), one)).truncated(order);
      if (!(got == want)) o = {false, 1, "input " + got.str() + " vs 1 - q^M " + want.str()};
      return o;
    }
    std::map<long, KClass> tr;
    QRational f = QRational::monomial(one, 0) - QRational::monomial(one, 1);
    for (auto& t : p["t"]) {
      long k = t[0];
      KClass c = kclass_from(ctx, t[1]);
      tr[k] = c;
      f = f + QRational::monomial(c, k);
    }
    Root z = root_at(p["zeta"]);
    long r = p["r"];
    KSeries got = input_substitution(ctx.target, tr, z, r, order);
    KSeries want = expand_at(f, z, z.order(), r, order);
    if (!(got == want)) o = {false, 1, "input " + got.str() + " vs adelic expansion " + want.str()};
    return o;
  };
  return s;
}

}  // namespace suite_detail

class SuiteRegistry {
 public:
  static SuiteRegistry standard() {
    using namespace suite_detail;
    SuiteRegistry r;
    for (auto s : {adelic_symplecticity(), darboux(), box_pair(), rearrange(), euler_maclaurin(), qch_symplectic(),
                   propagator_graph(), stone_von_neumann(), wick(), hurwitz(), mobius(), disconnected_exp(),
                   sector_fourier(), twisted_pairing(), input_substitution_suite()})
      r.add(std::move(s));
    return r;
  }

  void add(Suite s) {
    if (find(s.name)) throw std::invalid_argument("duplicate suite " + s.name);
    suites_.push_back(std::move(s));
  }
  const Suite* find(const std::string& name) const {
    for (auto& s : suites_)
      if (s.name == name) return &s;
    return nullptr;
  }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (auto& s : suites_) out.push_back(s.name);
    return out;
  }

 private:
  std::vector<Suite> suites_;
};

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

inline json counterexample_payload(const Suite& s, const SuiteConfig& cfg, std::size_t index, const json& params,
                                   const std::string& detail) {
  return {{"suite", s.name}, {"config", cfg.to_json()}, {"case_index", index}, {"case", params}, {"detail", detail}};
}

inline SuiteResult run_suite(const Suite& s, const SuiteConfig& cfg, const Deadline& deadline = std::nullopt) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteResult res;
  res.suite = s.name;
  auto finish = [&]() {
    res.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
  };
  if (auto why = s.skip_reason(cfg)) {
    res.status = SuiteStatus::skipped;
    res.reason = *why;
    return finish();
  }
  SuiteContext ctx(cfg);
  std::vector<json> cases = s.cases(ctx);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (deadline && std::chrono::steady_clock::now() > *deadline) {
      res.status = SuiteStatus::skipped;
      res.timed_out = true;
      res.reason = "wall-time cap reached after " + std::to_string(i) + " of " + std::to_string(cases.size()) + " cases";
      return finish();
    }
    CaseOutcome o;
    try {
      o = s.check(ctx, cases[i]);
    } catch (const TruncationError& e) {
      res.status = SuiteStatus::skipped;
      res.reason = std::string("series-order too small: ") + e.what();
      return finish();
    } catch (const std::exception& e) {
      o = {false, 1, std::string("exception: ") + e.what()};
    }
    res.checks += o.checks;
    ++res.cases;
    if (!o.ok) {
      res.status = SuiteStatus::fail;
      res.reason = o.detail;
      res.counterexample = counterexample_payload(s, cfg, i, cases[i], o.detail);
      return finish();
    }
  }
  return finish();
}

// Re-runs the single case recorded in a counterexample payload.
inline CaseOutcome replay_case(const SuiteRegistry& reg, const json& payload) {
  std::string name = payload.at("suite");
  const Suite* s = reg.find(name);
  if (!s) throw std::invalid_argument("replay: unknown suite " + name);
  SuiteConfig cfg = SuiteConfig::from_json(payload.at("config"));
  SuiteContext ctx(cfg);
  try {
    return s->check(ctx, payload.at("case"));
  } catch (const std::exception& e) {
    return {false, 1, std::string("exception: ") + e.what()};
  }
}

}  // namespace kadelic
