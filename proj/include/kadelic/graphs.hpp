#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qrational.hpp"
#include "rr_twist.hpp"

namespace kadelic {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class FlagKind { marked, edge_end };

struct GraphVertex {
  long genus = 0;
  std::vector<long> degree;
  long M = 1;
};

struct Flag {
  long vertex = 0;
  long r = 1;
  Root zeta;
  FlagKind kind = FlagKind::marked;
};

struct GraphEdge {
  long a = 0, b = 0;  // flag indices
};

struct DecoratedGraph {
  std::vector<GraphVertex> vertices;
  std::vector<Flag> flags;
  std::vector<GraphEdge> edges;

  long flag_count(long v) const {
    return std::count_if(flags.begin(), flags.end(), [v](const Flag& f) { return f.vertex == v; });
  }
};

struct Violation {
  std::string rule;
  std::string location;
};

inline std::vector<Violation> validate_graph(const DecoratedGraph& g) {
  std::vector<Violation> out;
  long nv = static_cast<long>(g.vertices.size());
  for (long v = 0; v < nv; ++v) {
    auto& x = g.vertices[v];
    if (x.genus < 0) out.push_back({"negative-genus", "vertex " + std::to_string(v)});
    if (x.M < 1) out.push_back({"cover-degree", "vertex " + std::to_string(v)});
    for (long d : x.degree)
      if (d < 0) out.push_back({"negative-degree", "vertex " + std::to_string(v)});
  }
  for (size_t i = 0; i < g.flags.size(); ++i) {
    auto& f = g.flags[i];
    std::string loc = "flag " + std::to_string(i);
    if (f.vertex < 0 || f.vertex >= nv) {
      out.push_back({"flag-vertex", loc});
      continue;
    }
    if (f.r < 1 || f.zeta.order() * f.r != g.vertices[f.vertex].M) out.push_back({"flag-order", loc});
  }
  std::vector<int> used(g.flags.size(), 0);
  for (size_t e = 0; e < g.edges.size(); ++e) {
    auto& ed = g.edges[e];
    std::string loc = "edge " + std::to_string(e);
    long nf = static_cast<long>(g.flags.size());
    if (ed.a < 0 || ed.a >= nf || ed.b < 0 || ed.b >= nf || ed.a == ed.b) {
      out.push_back({"edge-flags", loc});
      continue;
    }
    ++used[ed.a];
    ++used[ed.b];
    auto& fa = g.flags[ed.a];
    auto& fb = g.flags[ed.b];
    if (fa.kind != FlagKind::edge_end || fb.kind != FlagKind::edge_end) out.push_back({"edge-kind", loc});
    if (fa.r != fb.r) out.push_back({"order-mismatch", loc});
    if ((fa.zeta * fb.zeta).is_one()) out.push_back({"balanced-edge", loc});
  }
  for (size_t i = 0; i < g.flags.size(); ++i) {
    if (g.flags[i].kind == FlagKind::edge_end && used[i] != 1)
      out.push_back({used[i] ? "edge-end-reused" : "edge-end-unused", "flag " + std::to_string(i)});
    if (g.flags[i].kind == FlagKind::marked && used[i]) out.push_back({"edge-kind", "flag " + std::to_string(i)});
  }
  return out;
}

inline void require_valid(const DecoratedGraph& g) {
  auto v = validate_graph(g);
  if (!v.empty()) throw GraphError("invalid graph: " + v.front().rule + " at " + v.front().location);
}

// eu = sum_v M_v (2 - 2g_v - n_v) + sum of flag orders - 2 sum of edge orders; every flag counts in n_v.
inline long hurwitz_euler(const DecoratedGraph& g) {
  require_valid(g);
  long eu = 0;
  for (size_t v = 0; v < g.vertices.size(); ++v) {
    auto& x = g.vertices[v];
    eu += x.M * (2 - 2 * x.genus - g.flag_count(static_cast<long>(v)));
  }
  for (auto& f : g.flags) eu += f.r;
  for (auto& e : g.edges) eu -= 2 * g.flags[e.a].r;
  return eu;
}

// Number of orbits of x -> x + h on Z_M.
inline long translation_cycles(long M, long h) {
  std::vector<char> seen(M, 0);
  long cycles = 0;
  for (long x = 0; x < M; ++x) {
    if (seen[x]) continue;
    ++cycles;
    for (long y = x; !seen[y]; y = mod_floor(y + h, M)) seen[y] = 1;
  }
  return cycles;
}

// Build the covering curve: Riemann-Hurwitz per vertex from explicit monodromy orbits, then glue each edge's node
// orbit and smooth it.
inline long hurwitz_euler_oracle(const DecoratedGraph& g) {
  require_valid(g);
  long eu = 0;
  for (size_t v = 0; v < g.vertices.size(); ++v) {
    auto& x = g.vertices[v];
    long chi = x.M * (2 - 2 * x.genus);
    for (auto& f : g.flags)
      if (f.vertex == static_cast<long>(v)) chi -= x.M - translation_cycles(x.M, h_of(x.M, f.zeta));
    eu += chi;
  }
  for (auto& e : g.edges) {
    auto& f = g.flags[e.a];
    long nodes = translation_cycles(g.vertices[f.vertex].M, h_of(g.vertices[f.vertex].M, f.zeta));
    eu -= nodes;  // identify pairs of points
    eu -= nodes;  // smooth the nodes
  }
  return eu;
}

// Sum of the flag monodromies at each vertex vanishes (the covers close up).
inline bool monodromy_balanced(const DecoratedGraph& g) {
  std::vector<long> sum(g.vertices.size(), 0);
  for (auto& f : g.flags) sum[f.vertex] += h_of(g.vertices[f.vertex].M, f.zeta);
  for (size_t v = 0; v < g.vertices.size(); ++v)
    if (mod_floor(sum[v], g.vertices[v].M) != 0) return false;
  return true;
}

struct VertexWeights {
  Rational planck_rescale;  // (i): M_v (g_v - 1), from hbar -> hbar^{M_v}
  Rational input_scale;     // (ii): M_v n_v / 2, from t -> hbar^{M_v/2} t
  Rational homogeneity;     // exponent released by (ii) on a function homogeneous of degree 2 - 2g_v
  std::vector<Rational> flag_divisors;  // (iii): -r_i / 2 per flag
  long M = 1;                            // (v): Q^d -> Q^{M d}
};

struct WeightReport {
  long eu = 0;
  Rational minus_eu_half;
  std::array<Rational, 4> terms;  // sum M(g-1), sum M n/2, -sum r_i/2, sum r_e
  std::vector<long> total_degree;
  std::vector<VertexWeights> vertices;
  std::vector<Rational> edge_factors;  // (iv): r_e per edge
  bool items_i_ii_cancel = false;

  Rational items_iii_iv() const {
    Rational s = 0;
    for (auto& v : vertices)
      for (auto& x : v.flag_divisors) s += x;
    for (auto& x : edge_factors) s += x;
    return s;
  }
};

inline WeightReport graph_weights(const DecoratedGraph& g) {
  WeightReport w;
  w.eu = hurwitz_euler(g);
  w.minus_eu_half = make_rational(-w.eu, 2);
  for (auto& t : w.terms) t = 0;
  size_t nd = 0;
  for (auto& v : g.vertices) nd = std::max(nd, v.degree.size());
  w.total_degree.assign(nd, 0);
  w.items_i_ii_cancel = true;
  for (size_t v = 0; v < g.vertices.size(); ++v) {
    auto& x = g.vertices[v];
    long n = g.flag_count(static_cast<long>(v));
    VertexWeights vw;
    vw.M = x.M;
    vw.planck_rescale = Rational(x.M * (x.genus - 1));
    vw.input_scale = make_rational(x.M * n, 2);
    vw.homogeneity = make_rational(x.M, 2) * Rational(2 - 2 * x.genus);
    for (auto& f : g.flags)
      if (f.vertex == static_cast<long>(v)) vw.flag_divisors.push_back(make_rational(-f.r, 2));
    w.terms[0] += vw.planck_rescale;
    w.terms[1] += vw.input_scale;
    for (auto& d : vw.flag_divisors) w.terms[2] += d;
    if (vw.planck_rescale + vw.homogeneity != 0) w.items_i_ii_cancel = false;
    for (size_t i = 0; i < x.degree.size(); ++i) w.total_degree[i] += x.M * x.degree[i];
    w.vertices.push_back(std::move(vw));
  }
  for (auto& e : g.edges) {
    w.edge_factors.push_back(Rational(g.flags[e.a].r));
    w.terms[3] += g.flags[e.a].r;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Serialization.

inline std::string root_str(const Root& z) { return std::to_string(z.order()) + "/" + std::to_string(z.t); }

inline Root parse_root(const std::string& s) {
  auto p = s.find('/');
  if (p == std::string::npos) throw GraphError("root must be written m/t");
  return Root(std::stol(s.substr(0, p)), std::stol(s.substr(p + 1)));
}

inline std::string to_text(const DecoratedGraph& g) {
  std::ostringstream os;
  for (size_t v = 0; v < g.vertices.size(); ++v) {
    auto& x = g.vertices[v];
    os << "vertex " << v << " genus " << x.genus << " cover " << x.M << " degree";
    for (long d : x.degree) os << " " << d;
    os << "\n";
  }
  for (size_t i = 0; i < g.flags.size(); ++i) {
    auto& f = g.flags[i];
    os << "flag " << i << " vertex " << f.vertex << " order " << f.r << " root " << root_str(f.zeta) << " "
       << (f.kind == FlagKind::marked ? "marked" : "edge") << "\n";
  }
  for (auto& e : g.edges) os << "edge " << e.a << " " << e.b << "\n";
  return os.str();
}

inline DecoratedGraph parse_text(const std::string& text) {
  DecoratedGraph g;
  std::istringstream in(text);
  std::string line;
  auto expect = [](std::istringstream& ls, const char* word) {
    std::string w;
    ls >> w;
    if (w != word) throw GraphError(std::string("graph text: expected '") + word + "'");
  };
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    long id;
    if (kw == "vertex") {
      ls >> id;
      if (id != static_cast<long>(g.vertices.size())) throw GraphError("graph text: vertices must be numbered in order");
      GraphVertex v;
      expect(ls, "genus");
      ls >> v.genus;
      expect(ls, "cover");
      ls >> v.M;
      expect(ls, "degree");
      long d;
      while (ls >> d) v.degree.push_back(d);
      g.vertices.push_back(v);
    } else if (kw == "flag") {
      ls >> id;
      if (id != static_cast<long>(g.flags.size())) throw GraphError("graph text: flags must be numbered in order");
      Flag f;
      std::string root, kind;
      expect(ls, "vertex");
      ls >> f.vertex;
      expect(ls, "order");
      ls >> f.r;
      expect(ls, "root");
      ls >> root >> kind;
      f.zeta = parse_root(root);
      if (kind == "marked") f.kind = FlagKind::marked;
      else if (kind == "edge") f.kind = FlagKind::edge_end;
      else throw GraphError("graph text: flag kind must be marked or edge");
      g.flags.push_back(f);
    } else if (kw == "edge") {
      GraphEdge e;
      if (!(ls >> e.a >> e.b)) throw GraphError("graph text: edge needs two flag ids");
      g.edges.push_back(e);
    } else {
      throw GraphError("graph text: unknown record '" + kw + "'");
    }
    if (ls.fail() && !ls.eof()) throw GraphError("graph text: malformed line: " + line);
  }
  return g;
}

inline nlohmann::json to_json(const DecoratedGraph& g) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (auto& v : g.vertices) j["vertices"].push_back({{"genus", v.genus}, {"cover", v.M}, {"degree", v.degree}});
  j["flags"] = nlohmann::json::array();
  for (auto& f : g.flags)
    j["flags"].push_back({{"vertex", f.vertex},
                          {"order", f.r},
                          {"root", root_str(f.zeta)},
                          {"kind", f.kind == FlagKind::marked ? "marked" : "edge"}});
  j["edges"] = nlohmann::json::array();
  for (auto& e : g.edges) j["edges"].push_back({e.a, e.b});
  return j;
}

inline DecoratedGraph graph_from_json(const nlohmann::json& j) {
  DecoratedGraph g;
  try {
    for (auto& v : j.at("vertices"))
      g.vertices.push_back({v.at("genus").get<long>(), v.value("degree", std::vector<long>{}), v.at("cover").get<long>()});
    for (auto& f : j.at("flags")) {
      std::string kind = f.at("kind");
      if (kind != "marked" && kind != "edge") throw GraphError("graph json: flag kind must be marked or edge");
      g.flags.push_back({f.at("vertex").get<long>(), f.at("order").get<long>(), parse_root(f.at("root")),
                         kind == "marked" ? FlagKind::marked : FlagKind::edge_end});
    }
    for (auto& e : j.value("edges", nlohmann::json::array()))
      g.edges.push_back({e.at(0).get<long>(), e.at(1).get<long>()});
  } catch (const nlohmann::json::exception& e) {
    throw GraphError(std::string("graph json: ") + e.what());
  }
  return g;
}

// ---------------------------------------------------------------------------
// Enumeration of connected decorated graphs up to isomorphism.

struct GraphBounds {
  long max_vertices = 1;
  long max_M = 1;
  long max_genus = 0;
  long max_degree = 0;
  long max_flags = 1;  // per vertex, marked and edge ends together
  long max_edges = 2;
};

struct FlagType {
  long r;
  Root zeta;
  auto operator<=>(const FlagType&) const = default;
};

inline std::vector<FlagType> flag_types(long M) {
  std::vector<FlagType> out;
  for (long m : divisors(M))
    for (auto& z : primitive_roots(m)) out.push_back({M / m, z});
  std::sort(out.begin(), out.end());
  return out;
}

// A canonical string: the lexicographically least encoding over all vertex relabelings.
inline std::string canonical_form(const DecoratedGraph& g) {
  size_t n = g.vertices.size();
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  bool first = true;
  auto fstr = [](const Flag& f) { return std::to_string(f.r) + ":" + root_str(f.zeta); };
  do {
    std::vector<size_t> pos(n);
    for (size_t i = 0; i < n; ++i) pos[perm[i]] = i;
    std::ostringstream os;
    for (size_t i = 0; i < n; ++i) {
      auto& v = g.vertices[perm[i]];
      os << "V" << v.genus << "," << v.M << ",";
      for (long d : v.degree) os << d << ".";
      std::vector<std::string> marked;
      for (auto& f : g.flags)
        if (f.vertex == static_cast<long>(perm[i]) && f.kind == FlagKind::marked) marked.push_back(fstr(f));
      std::sort(marked.begin(), marked.end());
      for (auto& s : marked) os << "m" << s;
      os << ";";
    }
    std::vector<std::string> edges;
    for (auto& e : g.edges) {
      auto& a = g.flags[e.a];
      auto& b = g.flags[e.b];
      std::string sa = std::to_string(pos[a.vertex]) + "@" + fstr(a);
      std::string sb = std::to_string(pos[b.vertex]) + "@" + fstr(b);
      if (sb < sa) std::swap(sa, sb);
      edges.push_back(sa + "-" + sb);
    }
    std::sort(edges.begin(), edges.end());
    for (auto& s : edges) os << "E" << s;
    std::string s = os.str();
    if (first || s < best) best = s;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace detail {

inline bool connected(long nv, const std::vector<std::pair<long, long>>& links) {
  std::vector<long> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<long(long)> find = [&](long x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (auto& [a, b] : links) parent[find(a)] = find(b);
  for (long v = 1; v < nv; ++v)
    if (find(v) != find(0)) return false;
  return true;
}

// all multisets of size <= cap drawn from n items, as count vectors
inline void multisets(long n, long cap, std::vector<long>& cur, size_t from, std::vector<std::vector<long>>& out) {
  out.push_back(cur);
  if (cap == 0) return;
  for (size_t i = from; i < static_cast<size_t>(n); ++i) {
    cur.push_back(static_cast<long>(i));
    multisets(n, cap - 1, cur, i, out);
    cur.pop_back();
  }
}

}  // namespace detail

// Calls emit(graph) once per isomorphism class of connected valid graphs within the bounds.
inline void enumerate_graphs(const GraphBounds& b, const std::function<void(const DecoratedGraph&)>& emit) {
  std::vector<GraphVertex> decos;
  for (long M = 1; M <= b.max_M; ++M)
    for (long g = 0; g <= b.max_genus; ++g)
      for (long d = 0; d <= b.max_degree; ++d) decos.push_back({g, {d}, M});
  std::set<std::string> seen;
  for (long nv = 1; nv <= b.max_vertices; ++nv) {
    std::vector<long> choice(nv, 0);
    // nondecreasing decoration indices
    std::function<void(long, long)> pick = [&](long pos, long start) {
      if (pos == nv) {
        // candidate edges
        struct EdgeType {
          long va, vb;
          FlagType fa, fb;
        };
        std::vector<EdgeType> cands;
        for (long i = 0; i < nv; ++i)
          for (long j = i; j < nv; ++j) {
            auto ta = flag_types(decos[choice[i]].M);
            auto tb = flag_types(decos[choice[j]].M);
            for (size_t x = 0; x < ta.size(); ++x)
              for (size_t y = (i == j ? x : 0); y < tb.size(); ++y) {
                if (ta[x].r != tb[y].r || (ta[x].zeta * tb[y].zeta).is_one()) continue;
                cands.push_back({i, j, ta[x], tb[y]});
              }
          }
        std::vector<std::vector<long>> edge_sets;
        std::vector<long> cur;
        detail::multisets(static_cast<long>(cands.size()), b.max_edges, cur, 0, edge_sets);
        for (auto& es : edge_sets) {
          std::vector<long> used(nv, 0);
          std::vector<std::pair<long, long>> links;
          for (long e : es) {
            ++used[cands[e].va];
            ++used[cands[e].vb];
            links.push_back({cands[e].va, cands[e].vb});
          }
          bool ok = true;
          for (long v = 0; v < nv; ++v) ok = ok && used[v] <= b.max_flags;
          if (!ok || !detail::connected(nv, links)) continue;
          // marked flags on each vertex with the remaining capacity
          std::vector<std::vector<std::vector<long>>> marks(nv);
          for (long v = 0; v < nv; ++v) {
            std::vector<long> c;
            detail::multisets(static_cast<long>(flag_types(decos[choice[v]].M).size()), b.max_flags - used[v], c, 0,
                              marks[v]);
          }
          std::vector<size_t> idx(nv, 0);
          while (true) {
            DecoratedGraph g;
            for (long v = 0; v < nv; ++v) g.vertices.push_back(decos[choice[v]]);
            for (long e : es) {
              long a = static_cast<long>(g.flags.size());
              g.flags.push_back({cands[e].va, cands[e].fa.r, cands[e].fa.zeta, FlagKind::edge_end});
              g.flags.push_back({cands[e].vb, cands[e].fb.r, cands[e].fb.zeta, FlagKind::edge_end});
              g.edges.push_back({a, a + 1});
            }
            for (long v = 0; v < nv; ++v) {
              auto types = flag_types(decos[choice[v]].M);
              for (long t : marks[v][idx[v]]) g.flags.push_back({v, types[t].r, types[t].zeta, FlagKind::marked});
            }
            if (seen.insert(canonical_form(g)).second) emit(g);
            long v = 0;
            while (v < nv && ++idx[v] == marks[v].size()) idx[v++] = 0;
            if (v == nv) break;
          }
        }
        return;
      }
      for (long c = start; c < static_cast<long>(decos.size()); ++c) {
        choice[pos] = c;
        pick(pos + 1, c);
      }
    };
    pick(0, 0);
  }
}

inline std::vector<DecoratedGraph> enumerate_graphs(const GraphBounds& b) {
  std::vector<DecoratedGraph> out;
  enumerate_graphs(b, [&](const DecoratedGraph& g) { out.push_back(g); });
  return out;
}

// ---------------------------------------------------------------------------
// Input of a sector: Psi^r[1 - zeta^{-1} q^{1/m} + t(zeta^{-1} q^{1/m})] with Psi^r fixing zeta, expanded in u = q - 1.
inline KSeries input_substitution(const TargetPtr& t, const std::map<long, KClass>& tr, const Root& zeta, long r,
                                  long order) {
  long m = zeta.order();
  Cyclo zinv = Cyclo::root(zeta.inverse());
  KSeries out(KClass::scalar(t, LambdaElement(1)), order);
  out = out - kscale(binomial_series(make_rational(r, m), order) * CSeries(zinv), KClass::scalar(t, LambdaElement(1)));
  for (auto& [k, c] : tr) {
    if (c.is_zero()) continue;
    Cyclo zk = Cyclo::root(zeta.pow(-k));
    out = out + kscale(binomial_series(make_rational(k * r, m), order) * CSeries(zk), adams_k(r, c));
  }
  return out.truncated(order);
}

}  // namespace kadelic
