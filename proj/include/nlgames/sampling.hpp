#pragma once

// Seeded random instances for property sweeps: games, correlations,
// quantum strategies, DNN witnesses and small CSPs.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "nlgames/corrsets.hpp"
#include "nlgames/gamecore.hpp"
#include "nlgames/syncgraph.hpp"

namespace nlg {

using Rng = std::mt19937_64;

namespace detail {

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline std::vector<double> random_simplex_point(Rng& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& x : w) sum += (x = e(rng));
  for (auto& x : w) x /= sum;
  return w;
}

/// S^{-1/2} for a positive definite S.
inline SymMatrix inverse_sqrt(const SymMatrix& s) {
  const EigenDecomp ed = eigh(s);
  const std::size_t n = s.size();
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < n; ++k) v += ed.vector_entry(i, k) * ed.vector_entry(j, k) / std::sqrt(ed.values[k]);
      out.set(i, j, v);
    }
  return out;
}

inline SymMatrix matmul_sym(const SymMatrix& a, const SymMatrix& b, const SymMatrix& c) {
  const std::size_t n = a.size();
  std::vector<double> ab(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) ab[i * n + j] += a(i, k) * b(k, j);
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < n; ++k) v += ab[i * n + k] * c(k, j);
      out.set(i, j, v);
    }
  return out;
}

/// Random real POVM with `outcomes` elements in dimension d.
inline std::vector<SymMatrix> random_povm(Rng& rng, std::size_t outcomes, std::size_t d) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<SymMatrix> m;
  SymMatrix total(d);
  for (std::size_t a = 0; a < outcomes; ++a) {
    std::vector<std::vector<double>> cols(d, std::vector<double>(d));
    for (auto& c : cols)
      for (auto& x : c) x = g(rng);
    SymMatrix ma(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        double v = 0.0;
        for (std::size_t k = 0; k < d; ++k) v += cols[k][i] * cols[k][j];
        ma.set(i, j, v);
      }
    total += ma;
    m.push_back(std::move(ma));
  }
  const SymMatrix r = inverse_sqrt(total);
  for (auto& ma : m) ma = matmul_sym(r, ma, r);
  return m;
}

}  // namespace detail

/// Positive pi (normalized) and a fair-coin predicate.
inline Game random_game(const Scenario& sc, Rng& rng) {
  std::vector<double> pi = detail::random_simplex_point(rng, sc.nS * sc.nT);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::uint8_t> v(sc.nS * sc.nT * sc.nA * sc.nB);
  for (auto& x : v) x = coin(rng) ? 1 : 0;
  return Game(sc, std::move(pi), std::move(v));
}

inline Correlation random_deterministic(const Scenario& sc, Rng& rng) {
  std::vector<std::size_t> alpha(sc.nS), beta(sc.nT);
  for (auto& x : alpha) x = detail::uniform_index(rng, sc.nA);
  for (auto& y : beta) y = detail::uniform_index(rng, sc.nB);
  return deterministic_correlation(sc, alpha, beta);
}

/// Mixture of deterministic correlations and, when nA = nB, a relabeled
/// PR-box-like extremal p(a,b|s,t) = 1/n iff a - b = f(s,t) mod n.
/// Samples that fail the no-signaling check are rejected.
inline Correlation random_nosignaling(const Scenario& sc, Rng& rng) {
  while (true) {
    const std::size_t parts = 3;
    const std::vector<double> w = detail::random_simplex_point(rng, parts + 1);
    std::vector<double> vals(sc.nS * sc.nT * sc.nA * sc.nB, 0.0);
    for (std::size_t k = 0; k < parts; ++k) {
      const Correlation d = random_deterministic(sc, rng);
      for (std::size_t i = 0; i < vals.size(); ++i) vals[i] += w[k] * d.values()[i];
    }
    Correlation p(sc, vals);
    if (sc.nA == sc.nB) {
      const std::size_t n = sc.nA;
      for (std::size_t s = 0; s < sc.nS; ++s)
        for (std::size_t t = 0; t < sc.nT; ++t) {
          const std::size_t f = detail::uniform_index(rng, n);
          for (std::size_t a = 0; a < n; ++a) p.at(s, t, a, (a + n - f) % n) += w[parts] / static_cast<double>(n);
        }
    } else {
      const Correlation d = random_deterministic(sc, rng);
      for (std::size_t s = 0; s < sc.nS; ++s)
        for (std::size_t t = 0; t < sc.nT; ++t)
          for (std::size_t a = 0; a < sc.nA; ++a)
            for (std::size_t b = 0; b < sc.nB; ++b) p.at(s, t, a, b) += w[parts] * d(s, t, a, b);
    }
    if (is_correlation(p) && is_nosignaling(p)) return p;
  }
}

/// Independent random slices, rejected until some marginal depends on the
/// other party's question.
inline Correlation random_signaling(const Scenario& sc, Rng& rng) {
  while (true) {
    Correlation p(sc);
    for (std::size_t s = 0; s < sc.nS; ++s)
      for (std::size_t t = 0; t < sc.nT; ++t) {
        const std::vector<double> w = detail::random_simplex_point(rng, sc.nA * sc.nB);
        for (std::size_t a = 0; a < sc.nA; ++a)
          for (std::size_t b = 0; b < sc.nB; ++b) p.at(s, t, a, b) = w[a * sc.nB + b];
      }
    if (!is_nosignaling(p)) return p;
  }
}

/// Real POVM strategy with K = I/sqrt(d).
inline QuantumStrategy random_quantum_strategy(const Scenario& sc, Rng& rng, std::size_t d = 2) {
  const double r = 1.0 / std::sqrt(static_cast<double>(d));
  QuantumStrategy q;
  q.scenario = sc;
  q.k = HermMatrix(SymMatrix::identity(d) * r);
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (auto& e : detail::random_povm(rng, sc.nA, d)) q.alice.emplace_back(e * r);
  for (std::size_t t = 0; t < sc.nT; ++t)
    for (auto& e : detail::random_povm(rng, sc.nB, d)) q.bob.emplace_back(e * r);
  return q;
}

/// Gram matrix of {K} u {X^s_a} u {Y^t_b}: a lifted CS+ (hence DNN) witness.
inline SymMatrix lifted_strategy_gram(const QuantumStrategy& q) {
  std::vector<HermMatrix> ops{q.k};
  ops.insert(ops.end(), q.alice.begin(), q.alice.end());
  ops.insert(ops.end(), q.bob.begin(), q.bob.end());
  return gram(std::span<const HermMatrix>(ops));
}

/// Lifted 0/1 rank-one witness of a deterministic correlation.
inline SymMatrix lifted_deterministic(const Scenario& sc, const std::vector<std::size_t>& alpha,
                                      const std::vector<std::size_t>& beta) {
  const BlockLayout layout(sc, true);
  std::vector<double> v(layout.dim(), 0.0);
  v[0] = 1.0;
  for (std::size_t s = 0; s < sc.nS; ++s) v[layout.alice(s, alpha[s])] = 1.0;
  for (std::size_t t = 0; t < sc.nT; ++t) v[layout.bob(t, beta[t])] = 1.0;
  SymMatrix m(layout.dim());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) m.set(i, j, v[i] * v[j]);
  return m;
}

/// Convex mixture of lifted quantum Gram matrices and deterministic lifts:
/// doubly nonnegative with every lifted block sum equal to 1.
inline SymMatrix random_lifted_dnn_witness(const Scenario& sc, Rng& rng) {
  const std::vector<double> w = detail::random_simplex_point(rng, 3);
  SymMatrix out = w[0] * lifted_strategy_gram(random_quantum_strategy(sc, rng));
  out += w[1] * lifted_strategy_gram(random_quantum_strategy(sc, rng, 3));
  std::vector<std::size_t> alpha(sc.nS), beta(sc.nT);
  for (auto& x : alpha) x = detail::uniform_index(rng, sc.nA);
  for (auto& y : beta) y = detail::uniform_index(rng, sc.nB);
  out += w[2] * lifted_deterministic(sc, alpha, beta);
  return out;
}

/// Up to max_vars variables with domains 1..max_domain and constraints of
/// arity 1..max_arity, each allowing a random subset of tuples.
inline Csp random_csp(Rng& rng, std::size_t max_vars, std::size_t max_domain, std::size_t max_arity) {
  Csp c;
  const std::size_t n = 1 + detail::uniform_index(rng, max_vars);
  for (std::size_t v = 0; v < n; ++v) c.domains.push_back(1 + detail::uniform_index(rng, max_domain));
  const std::size_t m = detail::uniform_index(rng, 2 * n + 1);
  std::bernoulli_distribution keep(0.6);
  for (std::size_t k = 0; k < m; ++k) {
    CspConstraint con;
    const std::size_t arity = 1 + detail::uniform_index(rng, max_arity);
    for (std::size_t i = 0; i < arity; ++i) con.scope.push_back(detail::uniform_index(rng, n));
    std::vector<std::size_t> tuple(arity, 0);
    std::size_t total = 1;
    for (std::size_t v : con.scope) total *= c.domains[v];
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t rest = code;
      for (std::size_t i = arity; i-- > 0;) {
        tuple[i] = rest % c.domains[con.scope[i]];
        rest /= c.domains[con.scope[i]];
      }
      if (keep(rng)) con.allowed.push_back(tuple);
    }
    c.constraints.push_back(std::move(con));
  }
  return c;
}

inline Csp random_binary_csp(Rng& rng, std::size_t max_vars = 3, std::size_t max_domain = 3) {
  return random_csp(rng, max_vars, max_domain, 2);
}

}  // namespace nlg
