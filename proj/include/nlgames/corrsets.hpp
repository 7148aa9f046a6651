#pragma once

// Membership oracles for correlation sets:
//
//   classical  (polytope, via an LP over deterministic vertices)
//   Corr(DNN)  (outer approximation of the quantum set)
//   NPA level 1
//   Corr(NSO) = no-signaling, Corr(N) = all correlations
//
// plus the constructive Corr(DNN) -> NPA(1) repair and explicit CS+
// witnesses built from quantum strategies. Quantum membership itself is not
// decided: only the sandwich classical <= quantum <= Corr(DNN) <= NPA(1).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlgames/conicsolve.hpp"
#include "nlgames/gamecore.hpp"
#include "nlgames/gamevalues.hpp"
#include "nlgames/programs.hpp"

namespace nlg {

inline constexpr double kCorrelationTol = 1e-9;

struct Marginals {
  Scenario scenario;
  std::vector<double> alice;  // pA(a|s) at s*nA + a
  std::vector<double> bob;    // pB(b|t) at t*nB + b

  double a(std::size_t s, std::size_t x) const { return alice[s * scenario.nA + x]; }
  double b(std::size_t t, std::size_t y) const { return bob[t * scenario.nB + y]; }
};

inline bool is_correlation(const Correlation& p) {
  const Scenario& sc = p.scenario();
  for (double v : p.values())
    if (!(v >= -1e-12)) return false;
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t t = 0; t < sc.nT; ++t) {
      double sum = 0.0;
      for (std::size_t a = 0; a < sc.nA; ++a)
        for (std::size_t b = 0; b < sc.nB; ++b) sum += p(s, t, a, b);
      if (std::abs(sum - 1.0) > kCorrelationTol) return false;
    }
  return true;
}

namespace detail {

// Largest violation of the two marginal-consistency families.
inline double signaling_gap(const Correlation& p) {
  const Scenario& sc = p.scenario();
  double gap = 0.0;
  for (std::size_t t = 0; t < sc.nT; ++t)
    for (std::size_t b = 0; b < sc.nB; ++b) {
      double ref = 0.0;
      for (std::size_t a = 0; a < sc.nA; ++a) ref += p(0, t, a, b);
      for (std::size_t s = 1; s < sc.nS; ++s) {
        double sum = 0.0;
        for (std::size_t a = 0; a < sc.nA; ++a) sum += p(s, t, a, b);
        gap = std::max(gap, std::abs(sum - ref));
      }
    }
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t a = 0; a < sc.nA; ++a) {
      double ref = 0.0;
      for (std::size_t b = 0; b < sc.nB; ++b) ref += p(s, 0, a, b);
      for (std::size_t t = 1; t < sc.nT; ++t) {
        double sum = 0.0;
        for (std::size_t b = 0; b < sc.nB; ++b) sum += p(s, t, a, b);
        gap = std::max(gap, std::abs(sum - ref));
      }
    }
  return gap;
}

}  // namespace detail

/// Alice's marginals independent of t and Bob's independent of s (within 1e-9).
inline bool is_nosignaling(const Correlation& p) { return detail::signaling_gap(p) <= kCorrelationTol; }

inline Marginals marginals(const Correlation& p) {
  if (!is_nosignaling(p)) throw PreconditionError("marginals undefined: correlation is signaling");
  const Scenario& sc = p.scenario();
  Marginals m{sc, std::vector<double>(sc.nS * sc.nA, 0.0), std::vector<double>(sc.nT * sc.nB, 0.0)};
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t a = 0; a < sc.nA; ++a)
      for (std::size_t b = 0; b < sc.nB; ++b) m.alice[s * sc.nA + a] += p(s, 0, a, b);
  for (std::size_t t = 0; t < sc.nT; ++t)
    for (std::size_t b = 0; b < sc.nB; ++b)
      for (std::size_t a = 0; a < sc.nA; ++a) m.bob[t * sc.nB + b] += p(0, t, a, b);
  return m;
}

enum class CorrCone { Nonneg, Nso, Dnn };

inline const char* to_string(CorrCone c) {
  switch (c) {
    case CorrCone::Nonneg: return "N";
    case CorrCone::Nso: return "NSO";
    case CorrCone::Dnn: return "DNN";
  }
  return "?";
}

/// Feasibility program of Corr(K): X in K, all J sums 1, S x T block = p.
inline ConicProgram corr_program(const Correlation& p, CorrCone cone) {
  const BlockLayout layout(p.scenario(), false);
  ConicProgram prog;
  prog.dim = layout.dim();
  prog.objective = SymMatrix(prog.dim);
  prog.cone = {cone == CorrCone::Dnn ? ConeKind::Dnn : ConeKind::Nonneg};
  programs::add_j_constraints(prog, layout);
  if (cone == CorrCone::Nso) programs::add_nosignaling_constraints(prog, layout);
  programs::pin_correlation(prog, layout, p);
  return prog;
}

inline MembershipVerdict corr_membership(const Correlation& p, CorrCone cone, double eps_feas = kDefaultEpsFeas,
                                         const FeasibilityOptions& fopt = {},
                                         const std::optional<SymMatrix>& start = std::nullopt) {
  if (!is_correlation(p)) throw PreconditionError("corr_membership: input is not a correlation");
  return verdict_from(feasibility_distance(corr_program(p, cone), fopt, start), eps_feas);
}

/// Is p a convex combination of deterministic correlations? Distance is
/// measured on the simplex-weight LP; the witness is the mixture embedded
/// as a game-level matrix.
inline MembershipVerdict classical_membership(const Correlation& p, double eps_feas = kDefaultEpsFeas,
                                              const FeasibilityOptions& fopt = {}, std::size_t cap = kEnumerationCap) {
  if (!is_correlation(p)) throw PreconditionError("classical_membership: input is not a correlation");
  const Scenario& sc = p.scenario();
  const std::size_t na = capped_power(sc.nA, sc.nS, cap, "scenario too large for vertex enumeration");
  const std::size_t nb = capped_power(sc.nB, sc.nT, cap, "scenario too large for vertex enumeration");
  if (na > cap / nb) throw CapExceeded("scenario too large for vertex enumeration");

  const std::size_t entries = p.values().size();
  const std::size_t cols = na * nb;
  const std::size_t rows = entries + 1;
  std::vector<double> a(rows * cols, 0.0);
  std::vector<std::vector<std::size_t>> alphas, betas;
  for_each_assignment(sc.nS, sc.nA, [&](const std::vector<std::size_t>& x) {
    alphas.push_back(x);
    return true;
  });
  for_each_assignment(sc.nT, sc.nB, [&](const std::vector<std::size_t>& y) {
    betas.push_back(y);
    return true;
  });
  std::size_t col = 0;
  for (const auto& al : alphas)
    for (const auto& be : betas) {
      for (std::size_t s = 0; s < sc.nS; ++s)
        for (std::size_t t = 0; t < sc.nT; ++t) {
          const std::size_t e = ((s * sc.nT + t) * sc.nA + al[s]) * sc.nB + be[t];
          a[e * cols + col] = 1.0;
        }
      a[entries * cols + col] = 1.0;
      ++col;
    }
  std::vector<double> rhs(p.values());
  rhs.push_back(1.0);
  const VectorFeasibilityResult fr = feasibility_distance_orthant(a, rows, cols, rhs, fopt);

  Correlation mix(sc);
  col = 0;
  for (const auto& al : alphas)
    for (const auto& be : betas) {
      const double w = fr.x[col++];
      if (w == 0.0) continue;
      for (std::size_t s = 0; s < sc.nS; ++s)
        for (std::size_t t = 0; t < sc.nT; ++t) mix.at(s, t, al[s], be[t]) += w;
    }
  return {classify_distance(fr.distance, eps_feas, fr.exhausted), fr.distance, embed_correlation(mix)};
}

/// Borders a Corr(DNN) witness X with [0,0] = 1 and the marginals of p.
inline SymMatrix lift_with_marginals(const Correlation& p, const SymMatrix& x, double tol = 1e-6) {
  const Scenario& sc = p.scenario();
  const BlockLayout game(sc, false);
  if (x.size() != game.dim()) throw std::invalid_argument("lift_with_marginals: witness has wrong dimension");
  const auto qs = game.questions();
  for (std::size_t i = 0; i < qs.size(); ++i)
    for (std::size_t j = i; j < qs.size(); ++j)
      if (std::abs(j_apply(x, sc, qs[i], qs[j]) - 1.0) > tol)
        throw PreconditionError("lift_with_marginals: witness violates a block-sum constraint");
  if (extract_correlation(x, sc).values().size() != p.values().size()) throw std::invalid_argument("scenario mismatch");
  const Correlation block = extract_correlation(x, sc);
  for (std::size_t k = 0; k < p.values().size(); ++k)
    if (std::abs(block.values()[k] - p.values()[k]) > tol)
      throw PreconditionError("lift_with_marginals: witness does not reproduce the correlation");
  if (x.min_entry() < -tol || min_eigenvalue(x) < -tol)
    throw PreconditionError("lift_with_marginals: witness is not doubly nonnegative");

  const Marginals m = marginals(p);
  const BlockLayout lifted(sc, true);
  SymMatrix out(lifted.dim());
  out.set(0, 0, 1.0);
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t a = 0; a < sc.nA; ++a) out.set(0, lifted.alice(s, a), m.a(s, a));
  for (std::size_t t = 0; t < sc.nT; ++t)
    for (std::size_t b = 0; b < sc.nB; ++b) out.set(0, lifted.bob(t, b), m.b(t, b));
  for (std::size_t i = 0; i < game.dim(); ++i)
    for (std::size_t j = 0; j <= i; ++j) out.set(i + 1, j + 1, x(i, j));
  return out;
}

/// Clears every same-question off-diagonal entry c of a lifted DNN matrix
/// by adding c * E, where E is +1 on the two matching diagonal entries and
/// -1 on the pair itself. E is psd with zero block sums, so the result stays
/// psd, keeps every J sum and leaves the S x T blocks untouched.
inline SymMatrix dnn_to_npa1_witness(const SymMatrix& xlift, const Scenario& sc, double tol = 1e-6) {
  const BlockLayout layout(sc, true);
  if (xlift.size() != layout.dim()) throw std::invalid_argument("dnn_to_npa1_witness: wrong dimension");
  if (xlift.min_entry() < -tol || min_eigenvalue(xlift) < -tol)
    throw PreconditionError("dnn_to_npa1_witness: input is not doubly nonnegative");
  const auto qs = layout.questions();
  for (std::size_t i = 0; i < qs.size(); ++i)
    for (std::size_t j = i; j < qs.size(); ++j)
      if (std::abs(j_apply(xlift, sc, qs[i], qs[j]) - 1.0) > tol)
        throw PreconditionError("dnn_to_npa1_witness: input violates a lifted block-sum constraint");

  SymMatrix z = xlift;
  auto clear = [&](std::size_t r1, std::size_t r2) {
    const double c = xlift(r1, r2);
    z.set(r1, r1, z(r1, r1) + c);
    z.set(r2, r2, z(r2, r2) + c);
    z.set(r1, r2, z(r1, r2) - c);
  };
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t a = 0; a < sc.nA; ++a)
      for (std::size_t a2 = a + 1; a2 < sc.nA; ++a2) clear(layout.alice(s, a), layout.alice(s, a2));
  for (std::size_t t = 0; t < sc.nT; ++t)
    for (std::size_t b = 0; b < sc.nB; ++b)
      for (std::size_t b2 = b + 1; b2 < sc.nB; ++b2) clear(layout.bob(t, b), layout.bob(t, b2));
  return z;
}

/// Psd (1+N) program: border = marginals, S x T block = p, same-question
/// blocks = diag(marginals).
inline ConicProgram npa1_program(const Correlation& p) {
  const Marginals m = marginals(p);
  const Scenario& sc = p.scenario();
  const BlockLayout layout(sc, true);
  ConicProgram prog;
  prog.dim = layout.dim();
  prog.objective = SymMatrix(prog.dim);
  prog.cone = {ConeKind::Psd};
  programs::pin_entry(prog, 0, 0, 1.0);
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t a = 0; a < sc.nA; ++a) {
      programs::pin_entry(prog, 0, layout.alice(s, a), m.a(s, a));
      for (std::size_t a2 = a; a2 < sc.nA; ++a2)
        programs::pin_entry(prog, layout.alice(s, a), layout.alice(s, a2), a == a2 ? m.a(s, a) : 0.0);
    }
  for (std::size_t t = 0; t < sc.nT; ++t)
    for (std::size_t b = 0; b < sc.nB; ++b) {
      programs::pin_entry(prog, 0, layout.bob(t, b), m.b(t, b));
      for (std::size_t b2 = b; b2 < sc.nB; ++b2)
        programs::pin_entry(prog, layout.bob(t, b), layout.bob(t, b2), b == b2 ? m.b(t, b) : 0.0);
    }
  programs::pin_correlation(prog, layout, p);
  return prog;
}

inline MembershipVerdict npa1_membership(const Correlation& p, double eps_feas = kDefaultEpsFeas,
                                         const FeasibilityOptions& fopt = {},
                                         const std::optional<SymMatrix>& start = std::nullopt) {
  return verdict_from(feasibility_distance(npa1_program(p), fopt, start), eps_feas);
}

/// Gram matrix of the realified operators {X^s_a} u {Y^t_b}: an explicit
/// CS+ (hence Corr(DNN)) witness for the strategy's correlation.
inline SymMatrix cs_witness_check(const QuantumStrategy& q) {
  const Correlation p = evaluate_quantum_strategy(q);
  std::vector<HermMatrix> ops(q.alice);
  ops.insert(ops.end(), q.bob.begin(), q.bob.end());
  const SymMatrix w = gram(std::span<const HermMatrix>(ops));
  const Scenario& sc = q.scenario;
  const BlockLayout layout(sc, false);
  const auto qs = layout.questions();
  for (std::size_t i = 0; i < qs.size(); ++i)
    for (std::size_t j = i; j < qs.size(); ++j)
      if (std::abs(j_apply(w, sc, qs[i], qs[j]) - 1.0) > 1e-8)
        throw PreconditionError("cs_witness_check: block sums are not 1");
  const Correlation block = extract_correlation(w, sc);
  for (std::size_t k = 0; k < p.values().size(); ++k)
    if (std::abs(block.values()[k] - p.values()[k]) > 1e-10)
      throw PreconditionError("cs_witness_check: S x T block does not match the strategy");
  return w;
}

}  // namespace nlg
