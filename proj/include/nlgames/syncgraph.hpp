#pragma once

// Synchronous correlations and games, graph homomorphism / coloring /
// independence games and the CSP -> synchronous game compiler.
//
// Synchronous matrices live on |S*A| indices (s,a) -> s*nA + a. Quantum
// graph parameters are only exposed through their DNN relaxations, so a
// FEASIBLE verdict there is a necessary condition, never a proof.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlgames/conicsolve.hpp"
#include "nlgames/gamecore.hpp"
#include "nlgames/gamevalues.hpp"
#include "nlgames/programs.hpp"

namespace nlg {

/// P[(s,a),(s',a')] = p(a,a'|s,s').
struct SyncMatrix {
  std::size_t questions = 0;
  std::size_t answers = 0;
  SymMatrix p;

  std::size_t index(std::size_t s, std::size_t a) const { return s * answers + a; }

  void validate() const {
    if (questions == 0 || answers == 0) throw std::invalid_argument("SyncMatrix: empty question or answer set");
    if (p.size() != questions * answers) throw std::invalid_argument("SyncMatrix: matrix has wrong dimension");
    for (std::size_t s = 0; s < questions; ++s)
      for (std::size_t a = 0; a < answers; ++a)
        for (std::size_t a2 = a + 1; a2 < answers; ++a2)
          if (std::abs(p(index(s, a), index(s, a2))) > 1e-9)
            throw PreconditionError("SyncMatrix: same-question block is not diagonal");
  }
};

namespace detail {

inline void require_square_scenario(const Scenario& sc, const char* what) {
  if (sc.nS != sc.nT || sc.nA != sc.nB) throw PreconditionError(std::string(what) + ": scenario needs S = T and A = B");
}

/// Sum of all entries of the (s,s') block on the |S*A| layout.
inline SymMatrix sync_j_matrix(std::size_t nq, std::size_t na, std::size_t s, std::size_t s2) {
  SymMatrix m(nq * na);
  const double w = s == s2 ? 1.0 : 0.5;
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t a2 = 0; a2 < na; ++a2)
      if (s != s2 || a <= a2) m.set(s * na + a, s2 * na + a2, w);
  return m;
}

/// DNN program on |S*A|: J sums 1 and zero same-question off-diagonals.
inline ConicProgram sync_base_program(std::size_t nq, std::size_t na) {
  ConicProgram prog;
  prog.dim = nq * na;
  prog.objective = SymMatrix(prog.dim);
  prog.cone = {ConeKind::Dnn};
  for (std::size_t s = 0; s < nq; ++s)
    for (std::size_t s2 = s; s2 < nq; ++s2) prog.constraints.push_back({sync_j_matrix(nq, na, s, s2), 1.0});
  for (std::size_t s = 0; s < nq; ++s)
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t a2 = a + 1; a2 < na; ++a2) programs::pin_entry(prog, s * na + a, s * na + a2, 0.0);
  return prog;
}

inline SymMatrix function_matrix(std::size_t na, const std::vector<std::size_t>& f) {
  SymMatrix m(f.size() * na);
  for (std::size_t s = 0; s < f.size(); ++s)
    for (std::size_t s2 = 0; s2 <= s; ++s2) m.set(s * na + f[s], s2 * na + f[s2], 1.0);
  return m;
}

inline double sync_payoff(const Game& g, const std::vector<std::size_t>& f) {
  const Scenario& sc = g.scenario();
  double total = 0.0;
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t s2 = 0; s2 < sc.nS; ++s2)
      if (g.wins(s, s2, f[s], f[s2])) total += g.pi(s, s2);
  return total;
}

}  // namespace detail

/// p(a,a'|s,s) <= 1e-9 for every s and a != a'.
inline bool is_synchronous(const Correlation& p) {
  const Scenario& sc = p.scenario();
  detail::require_square_scenario(sc, "is_synchronous");
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t a = 0; a < sc.nA; ++a)
      for (std::size_t a2 = 0; a2 < sc.nA; ++a2)
        if (a != a2 && p(s, s, a, a2) > 1e-9) return false;
  return true;
}

/// Synchronous matrix of a (symmetric) correlation; asymmetric input is averaged.
inline SyncMatrix sync_matrix(const Correlation& p) {
  const Scenario& sc = p.scenario();
  detail::require_square_scenario(sc, "sync_matrix");
  SyncMatrix m{sc.nS, sc.nA, SymMatrix(sc.nS * sc.nA)};
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t s2 = 0; s2 <= s; ++s2)
      for (std::size_t a = 0; a < sc.nA; ++a)
        for (std::size_t a2 = 0; a2 < sc.nA; ++a2)
          m.p.set(m.index(s, a), m.index(s2, a2), 0.5 * (p(s, s2, a, a2) + p(s2, s, a2, a)));
  return m;
}

enum class SyncCone { Dnn, Classical };

inline const char* to_string(SyncCone c) { return c == SyncCone::Dnn ? "DNN" : "CLASSICAL"; }

inline MembershipVerdict sync_membership(const SyncMatrix& m, SyncCone cone, double eps_feas = kDefaultEpsFeas,
                                         const FeasibilityOptions& fopt = {}, std::size_t cap = kEnumerationCap) {
  m.validate();
  const std::size_t n = m.questions * m.answers;
  if (cone == SyncCone::Dnn) {
    ConicProgram prog = detail::sync_base_program(m.questions, m.answers);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) programs::pin_entry(prog, i, j, m.p(i, j));
    return verdict_from(feasibility_distance(prog, fopt), eps_feas);
  }

  capped_power(m.answers, m.questions, cap, "too many functions for enumeration");
  std::vector<SymMatrix> vertices;
  for_each_assignment(m.questions, m.answers, [&](const std::vector<std::size_t>& f) {
    vertices.push_back(detail::function_matrix(m.answers, f));
    return true;
  });
  // Rows: upper-triangular entries, then the simplex row.
  const std::size_t cols = vertices.size();
  const std::size_t entries = n * (n + 1) / 2;
  std::vector<double> a((entries + 1) * cols, 0.0);
  std::vector<double> rhs;
  rhs.reserve(entries + 1);
  std::size_t row = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j, ++row) {
      for (std::size_t c = 0; c < cols; ++c) a[row * cols + c] = vertices[c](i, j);
      rhs.push_back(m.p(i, j));
    }
  for (std::size_t c = 0; c < cols; ++c) a[row * cols + c] = 1.0;
  rhs.push_back(1.0);
  const VectorFeasibilityResult fr = feasibility_distance_orthant(a, entries + 1, cols, rhs, fopt);
  SymMatrix mix(n);
  for (std::size_t c = 0; c < cols; ++c)
    if (fr.x[c] != 0.0) mix += fr.x[c] * vertices[c];
  return {classify_distance(fr.distance, eps_feas, fr.exhausted), fr.distance, mix};
}

/// Synchronous value: DNN relaxation or the best function f: S -> A.
inline ValueReport sync_value(const Game& g, SyncCone cone, const SolverOptions& opt = {},
                              std::size_t cap = kEnumerationCap) {
  const Scenario& sc = g.scenario();
  detail::require_square_scenario(sc, "sync_value");
  if (cone == SyncCone::Dnn) {
    ConicProgram prog = detail::sync_base_program(sc.nS, sc.nA);
    const CostMatrix c = cost_matrix(g);
    SymMatrix obj(prog.dim);
    for (std::size_t i = 0; i < prog.dim; ++i)
      for (std::size_t j = 0; j <= i; ++j) obj.set(i, j, 0.5 * (c(i, j) + c(j, i)));
    prog.objective = std::move(obj);
    const SolveResult r = solve(prog, opt);
    ValueReport rep;
    rep.value = r.value;
    rep.status = r.status;
    rep.residuals = r.residuals;
    rep.iterations = r.iterations;
    rep.matrix = r.x;
    return rep;
  }
  capped_power(sc.nA, sc.nS, cap, "too many functions for enumeration");
  ValueReport rep;
  rep.value = -1.0;
  for_each_assignment(sc.nS, sc.nA, [&](const std::vector<std::size_t>& f) {
    const double v = detail::sync_payoff(g, f);
    if (v > rep.value) {
      rep.value = v;
      rep.strategy = DeterministicStrategy{f, f};
    }
    return true;
  });
  rep.correlation = deterministic_correlation(sc, rep.strategy->alpha, rep.strategy->beta);
  return rep;
}

/// V(a,a'|s,s) = 0 for a != a' and pi(s,s) > 0.
inline bool is_synchronous_game(const Game& g) {
  const Scenario& sc = g.scenario();
  if (sc.nS != sc.nT || sc.nA != sc.nB) return false;
  for (std::size_t s = 0; s < sc.nS; ++s) {
    if (!(g.pi(s, s) > 0.0)) return false;
    for (std::size_t a = 0; a < sc.nA; ++a)
      for (std::size_t a2 = 0; a2 < sc.nA; ++a2)
        if (a != a2 && g.wins(s, s, a, a2)) return false;
  }
  return true;
}

inline ConicProgram sync_perfect_program(const Game& g) {
  const Scenario& sc = g.scenario();
  ConicProgram prog = detail::sync_base_program(sc.nS, sc.nA);
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t s2 = s; s2 < sc.nS; ++s2) {
      if (!(g.pi(s, s2) > 1e-12 || g.pi(s2, s) > 1e-12)) continue;
      for (std::size_t a = 0; a < sc.nA; ++a)
        for (std::size_t a2 = 0; a2 < sc.nA; ++a2) {
          if (s == s2 && a2 <= a) continue;
          const bool loses = (g.pi(s, s2) > 1e-12 && !g.wins(s, s2, a, a2)) ||
                             (g.pi(s2, s) > 1e-12 && !g.wins(s2, s, a2, a));
          if (loses) programs::pin_entry(prog, s * sc.nA + a, s2 * sc.nA + a2, 0.0);
        }
    }
  return prog;
}

inline MembershipVerdict sync_perfect(const Game& g, SyncCone cone, double eps_feas = kDefaultEpsFeas,
                                      const FeasibilityOptions& fopt = {}, std::size_t cap = kEnumerationCap) {
  if (!is_synchronous_game(g)) throw PreconditionError("sync_perfect: game is not synchronous");
  const Scenario& sc = g.scenario();
  if (cone == SyncCone::Dnn) return verdict_from(feasibility_distance(sync_perfect_program(g), fopt), eps_feas);

  capped_power(sc.nA, sc.nS, cap, "too many functions for enumeration");
  std::optional<std::vector<std::size_t>> found;
  for_each_assignment(sc.nS, sc.nA, [&](const std::vector<std::size_t>& f) {
    for (std::size_t s = 0; s < sc.nS; ++s)
      for (std::size_t s2 = 0; s2 < sc.nS; ++s2)
        if (g.pi(s, s2) > 1e-12 && !g.wins(s, s2, f[s], f[s2])) return true;
    found = f;
    return false;
  });
  if (!found) return {Verdict::Out, 1.0, std::nullopt};
  return {Verdict::In, 0.0, detail::function_matrix(sc.nA, *found)};
}

class Graph {
 public:
  Graph() = default;
  Graph(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges)
      : n_(n), edges_(std::move(edges)), adj_(n * n, 0) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto& [u, v] : edges_) {
      if (u >= n_ || v >= n_) throw std::invalid_argument("graph edge endpoint out of range");
      if (u == v) throw std::invalid_argument("graph has a loop at vertex " + std::to_string(u));
      if (!seen.insert({std::min(u, v), std::max(u, v)}).second)
        throw std::invalid_argument("graph has a duplicate edge");
      adj_[u * n_ + v] = adj_[v * n_ + u] = 1;
    }
  }

  std::size_t size() const { return n_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  bool adjacent(std::size_t u, std::size_t v) const { return adj_[u * n_ + v] != 0; }

  Graph complement() const {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t u = 0; u < n_; ++u)
      for (std::size_t v = u + 1; v < n_; ++v)
        if (!adjacent(u, v)) e.emplace_back(u, v);
    return Graph(n_, std::move(e));
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::uint8_t> adj_;
};

inline Graph complete_graph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph(n, std::move(e));
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t u = 0; u < n; ++u) e.emplace_back(u, (u + 1) % n);
  return Graph(n, std::move(e));
}

inline Graph empty_graph(std::size_t n) { return Graph(n, {}); }

/// Questions and answers are vertices of H and G; pi is uniform on the
/// diagonal plus both orientations of every edge of H.
inline Game homomorphism_game(const Graph& h, const Graph& g) {
  if (h.size() == 0) throw PreconditionError("homomorphism_game: H has no vertices");
  if (g.size() == 0) throw PreconditionError("homomorphism_game: G has no vertices");
  const std::size_t nh = h.size(), ng = g.size();
  const Scenario sc{nh, nh, ng, ng};
  std::vector<double> pi(nh * nh, 0.0);
  const double w = 1.0 / static_cast<double>(nh + 2 * h.edges().size());
  for (std::size_t u = 0; u < nh; ++u)
    for (std::size_t v = 0; v < nh; ++v)
      if (u == v || h.adjacent(u, v)) pi[u * nh + v] = w;
  return make_game(sc, std::move(pi), [&](std::size_t u, std::size_t v, std::size_t x, std::size_t y) {
    if (u == v) return x == y;
    if (h.adjacent(u, v)) return x != y && g.adjacent(x, y);
    return true;
  });
}

inline constexpr std::size_t kGraphSearchCap = 64;

/// Backtracking search for an adjacency-preserving map V(H) -> V(G).
inline std::optional<std::vector<std::size_t>> find_homomorphism(const Graph& h, const Graph& g) {
  if (h.size() > kGraphSearchCap) throw CapExceeded("graph too large for exhaustive search");
  const std::size_t nh = h.size();
  std::vector<std::size_t> f(nh, 0);
  if (nh == 0) return f;
  if (g.size() == 0) return std::nullopt;
  std::size_t depth = 0;
  std::vector<std::size_t> next(nh, 0);
  while (true) {
    bool placed = false;
    while (next[depth] < g.size()) {
      const std::size_t x = next[depth]++;
      bool ok = true;
      for (std::size_t u = 0; u < depth && ok; ++u)
        if (h.adjacent(u, depth) && !g.adjacent(f[u], x)) ok = false;
      if (ok) {
        f[depth] = x;
        placed = true;
        break;
      }
    }
    if (placed) {
      if (depth + 1 == nh) return f;
      next[++depth] = 0;
    } else {
      if (depth == 0) return std::nullopt;
      --depth;
    }
  }
}

inline bool classical_homomorphism(const Graph& h, const Graph& g) { return find_homomorphism(h, g).has_value(); }

/// Perfect-strategy program of the homomorphism game over DNN.
inline MembershipVerdict quantum_homomorphism_relaxation(const Graph& h, const Graph& g,
                                                         double eps_feas = kDefaultEpsFeas,
                                                         const FeasibilityOptions& fopt = {}) {
  return sync_perfect(homomorphism_game(h, g), SyncCone::Dnn, eps_feas, fopt);
}

/// Smallest k with a homomorphism G -> K_k.
inline std::size_t chromatic_number(const Graph& g) {
  if (g.size() > kGraphSearchCap) throw CapExceeded("graph too large for exhaustive search");
  for (std::size_t k = 1; k <= g.size(); ++k)
    if (classical_homomorphism(g, complete_graph(k))) return k;
  return 0;
}

/// Largest k with a homomorphism K_k -> complement(G).
inline std::size_t independence_number(const Graph& g) {
  if (g.size() > kGraphSearchCap) throw CapExceeded("graph too large for exhaustive search");
  const Graph comp = g.complement();
  std::size_t best = 0;
  for (std::size_t k = 1; k <= g.size(); ++k) {
    if (!classical_homomorphism(complete_graph(k), comp)) break;
    best = k;
  }
  return best;
}

enum class GraphParameter { Chromatic, Independence };

inline const char* to_string(GraphParameter p) { return p == GraphParameter::Chromatic ? "chromatic" : "independence"; }

/// Bordered feasibility program of size n*k + 1 (index 0 is the border).
/// CHROMATIC rows are (vertex g, color i); INDEPENDENCE rows are (slot i, vertex g).
inline ConicProgram graph_bound_program(const Graph& g, GraphParameter param, std::size_t k) {
  if (k == 0) throw PreconditionError("quantum_graph_bounds: k must be at least 1");
  const std::size_t n = g.size();
  ConicProgram prog;
  prog.dim = n * k + 1;
  prog.objective = SymMatrix(prog.dim);
  prog.cone = {ConeKind::Dnn};
  programs::pin_entry(prog, 0, 0, 1.0);

  const bool chromatic = param == GraphParameter::Chromatic;
  const std::size_t groups = chromatic ? n : k;
  const std::size_t width = chromatic ? k : n;
  auto idx = [&](std::size_t grp, std::size_t j) { return 1 + grp * width + j; };
  for (std::size_t grp = 0; grp < groups; ++grp) {
    SymMatrix block(prog.dim), border(prog.dim);
    for (std::size_t j = 0; j < width; ++j) {
      border.set(0, idx(grp, j), 0.5);
      for (std::size_t j2 = j; j2 < width; ++j2) block.set(idx(grp, j), idx(grp, j2), 1.0);
    }
    prog.constraints.push_back({std::move(block), 1.0});
    prog.constraints.push_back({std::move(border), 1.0});
  }
  for (std::size_t grp = 0; grp < groups; ++grp)
    for (std::size_t grp2 = grp; grp2 < groups; ++grp2)
      for (std::size_t j = 0; j < width; ++j)
        for (std::size_t j2 = 0; j2 < width; ++j2) {
          if (grp == grp2 && j2 <= j) continue;
          bool zero;
          if (chromatic) {
            // grp, grp2 are vertices; j, j2 colors.
            zero = (grp == grp2 && j != j2) || (g.adjacent(grp, grp2) && j == j2);
          } else {
            // grp, grp2 are slots; j, j2 vertices.
            zero = (grp == grp2 && j != j2) || (grp != grp2 && (j == j2 || g.adjacent(j, j2)));
          }
          if (zero) programs::pin_entry(prog, idx(grp, j), idx(grp2, j2), 0.0);
        }
  return prog;
}

/// DNN relaxation verdict: INFEASIBLE at k proves chi_q > k (resp. alpha_q < k);
/// FEASIBLE is necessary only.
inline MembershipVerdict quantum_graph_bounds(const Graph& g, GraphParameter param, std::size_t k,
                                              double eps_feas = kDefaultEpsFeas, const FeasibilityOptions& fopt = {}) {
  return verdict_from(feasibility_distance(graph_bound_program(g, param, k), fopt), eps_feas);
}

struct CspConstraint {
  std::vector<std::size_t> scope;
  std::vector<std::vector<std::size_t>> allowed;
};

struct Csp {
  std::vector<std::size_t> domains;
  std::vector<CspConstraint> constraints;

  std::size_t vars() const { return domains.size(); }

  void validate() const {
    for (std::size_t c = 0; c < constraints.size(); ++c) {
      const auto& con = constraints[c];
      const std::string where = "constraint " + std::to_string(c);
      if (con.scope.empty()) throw std::invalid_argument(where + ": empty scope");
      for (std::size_t v : con.scope)
        if (v >= vars()) throw std::invalid_argument(where + ": scope variable out of range");
      for (const auto& t : con.allowed) {
        if (t.size() != con.scope.size()) throw std::invalid_argument(where + ": tuple arity differs from scope");
        for (std::size_t i = 0; i < t.size(); ++i)
          if (t[i] >= domains[con.scope[i]]) throw std::invalid_argument(where + ": tuple value outside domain");
      }
    }
  }

  bool is_binary() const {
    return std::all_of(constraints.begin(), constraints.end(), [](const CspConstraint& c) { return c.scope.size() <= 2; });
  }
};

namespace detail {

inline bool tuple_allowed(const CspConstraint& c, const std::vector<std::size_t>& tuple) {
  return std::find(c.allowed.begin(), c.allowed.end(), tuple) != c.allowed.end();
}

}  // namespace detail

/// Full assignment satisfying every constraint, if any.
inline std::optional<std::vector<std::size_t>> csp_solve(const Csp& c) {
  c.validate();
  const std::size_t n = c.vars();
  if (n > kGraphSearchCap) throw CapExceeded("CSP too large for exhaustive search");
  // Each constraint is checked once its last scope variable is assigned.
  std::vector<std::vector<std::size_t>> due(n);
  for (std::size_t i = 0; i < c.constraints.size(); ++i)
    due[*std::max_element(c.constraints[i].scope.begin(), c.constraints[i].scope.end())].push_back(i);
  std::vector<std::size_t> x(n, 0);
  if (n == 0) return x;
  std::vector<std::size_t> next(n, 0);
  std::vector<std::size_t> tuple;
  std::size_t depth = 0;
  while (true) {
    bool placed = false;
    while (next[depth] < c.domains[depth]) {
      x[depth] = next[depth]++;
      bool ok = true;
      for (std::size_t ci : due[depth]) {
        const auto& con = c.constraints[ci];
        tuple.clear();
        for (std::size_t v : con.scope) tuple.push_back(x[v]);
        if (!detail::tuple_allowed(con, tuple)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        placed = true;
        break;
      }
    }
    if (placed) {
      if (depth + 1 == n) return x;
      next[++depth] = 0;
    } else {
      if (depth == 0) return std::nullopt;
      --depth;
    }
  }
}

inline bool csp_satisfiable(const Csp& c) { return csp_solve(c).has_value(); }

/// Dual encoding: one variable per constraint ranging over its allowed
/// tuples, with compatibility constraints between constraints that share a
/// variable. Variables outside every scope only matter when their domain is
/// empty, which is kept as an empty-domain variable.
inline Csp csp_binarize(const Csp& c) {
  c.validate();
  // Tuples of a scope that repeats a variable must agree on its copies.
  std::vector<CspConstraint> cons;
  for (const auto& con : c.constraints) {
    CspConstraint kept{con.scope, {}};
    for (const auto& t : con.allowed) {
      bool consistent = true;
      for (std::size_t p = 0; p < t.size(); ++p)
        for (std::size_t q = p + 1; q < t.size(); ++q)
          if (con.scope[p] == con.scope[q] && t[p] != t[q]) consistent = false;
      if (consistent) kept.allowed.push_back(t);
    }
    cons.push_back(std::move(kept));
  }
  Csp out;
  for (const auto& con : cons) out.domains.push_back(con.allowed.size());
  for (std::size_t i = 0; i < cons.size(); ++i)
    for (std::size_t j = i + 1; j < cons.size(); ++j) {
      const auto& ci = cons[i];
      const auto& cj = cons[j];
      std::vector<std::pair<std::size_t, std::size_t>> shared;
      for (std::size_t p = 0; p < ci.scope.size(); ++p)
        for (std::size_t q = 0; q < cj.scope.size(); ++q)
          if (ci.scope[p] == cj.scope[q]) shared.emplace_back(p, q);
      if (shared.empty()) continue;
      CspConstraint b{{i, j}, {}};
      for (std::size_t u = 0; u < ci.allowed.size(); ++u)
        for (std::size_t v = 0; v < cj.allowed.size(); ++v) {
          bool agree = true;
          for (auto [p, q] : shared)
            if (ci.allowed[u][p] != cj.allowed[v][q]) agree = false;
          if (agree) b.allowed.push_back({u, v});
        }
      out.constraints.push_back(std::move(b));
    }
  std::vector<char> covered(c.vars(), 0);
  for (const auto& con : c.constraints)
    for (std::size_t v : con.scope) covered[v] = 1;
  for (std::size_t v = 0; v < c.vars(); ++v)
    if (!covered[v] && c.domains[v] == 0) {
      out.domains.push_back(0);
      break;
    }
  return out;
}

/// Synchronous game of a binary CSP: questions are variables (uniform pairs),
/// answers index the union of the domains, and out-of-domain answers lose.
inline Game csp_game(const Csp& c) {
  c.validate();
  if (!c.is_binary()) throw PreconditionError("csp_game: CSP is not binary");
  const std::size_t n = c.vars();
  if (n == 0) throw PreconditionError("csp_game: CSP has no variables");
  const std::size_t na = std::max<std::size_t>(1, *std::max_element(c.domains.begin(), c.domains.end()));
  const Scenario sc{n, n, na, na};
  return make_game(sc, uniform_pi(sc), [&](std::size_t s, std::size_t s2, std::size_t a, std::size_t a2) {
    if (a >= c.domains[s] || a2 >= c.domains[s2]) return false;
    if (s == s2 && a != a2) return false;
    std::vector<std::size_t> tuple;
    for (const auto& con : c.constraints) {
      tuple.clear();
      bool in_pair = true;
      for (std::size_t v : con.scope) {
        if (v == s) tuple.push_back(a);
        else if (v == s2) tuple.push_back(a2);
        else in_pair = false;
      }
      if (in_pair && !detail::tuple_allowed(con, tuple)) return false;
    }
    return true;
  });
}

}  // namespace nlg
