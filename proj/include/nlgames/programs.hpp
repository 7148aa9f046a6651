#pragma once

// Builders for the linear constraints shared by the value programs, the
// membership oracles and the perfect-strategy programs.

#include <cstddef>
#include <vector>

#include "nlgames/conicsolve.hpp"
#include "nlgames/gamecore.hpp"

namespace nlg::programs {

/// <E, X> = X[i][j] as a symmetric constraint matrix.
inline SymMatrix entry_matrix(std::size_t n, std::size_t i, std::size_t j) {
  SymMatrix m(n);
  m.set(i, j, i == j ? 1.0 : 0.5);
  return m;
}

inline void pin_entry(ConicProgram& prog, std::size_t i, std::size_t j, double value) {
  prog.constraints.push_back({entry_matrix(prog.dim, i, j), value});
}

/// <J_{i,j}, X> = 1 for every unordered pair of questions in the layout
/// (including 0 for lifted layouts).
inline void add_j_constraints(ConicProgram& prog, const BlockLayout& layout) {
  const auto qs = layout.questions();
  for (std::size_t i = 0; i < qs.size(); ++i)
    for (std::size_t j = i; j < qs.size(); ++j) prog.constraints.push_back({layout.j_matrix(qs[i], qs[j]), 1.0});
}

/// The no-signaling equalities on the S x T blocks:
///   sum_a X[(s,a),(t,b)] = sum_a X[(0,a),(t,b)]   for s >= 1,
///   sum_b X[(s,a),(t,b)] = sum_b X[(s,a),(0,b)]   for t >= 1.
/// Comparing against question 0 gives an independent generating set.
inline void add_nosignaling_constraints(ConicProgram& prog, const BlockLayout& layout) {
  const Scenario& sc = layout.scenario();
  for (std::size_t t = 0; t < sc.nT; ++t)
    for (std::size_t b = 0; b < sc.nB; ++b)
      for (std::size_t s = 1; s < sc.nS; ++s) {
        SymMatrix m(prog.dim);
        for (std::size_t a = 0; a < sc.nA; ++a) {
          m.set(layout.alice(s, a), layout.bob(t, b), 0.5);
          m.set(layout.alice(0, a), layout.bob(t, b), -0.5);
        }
        prog.constraints.push_back({std::move(m), 0.0});
      }
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t a = 0; a < sc.nA; ++a)
      for (std::size_t t = 1; t < sc.nT; ++t) {
        SymMatrix m(prog.dim);
        for (std::size_t b = 0; b < sc.nB; ++b) {
          m.set(layout.alice(s, a), layout.bob(t, b), 0.5);
          m.set(layout.alice(s, a), layout.bob(0, b), -0.5);
        }
        prog.constraints.push_back({std::move(m), 0.0});
      }
}

/// X[(s,a),(s,a')] = 0 and X[(t,b),(t,b')] = 0 for a != a', b != b'.
inline void add_same_question_zeros(ConicProgram& prog, const BlockLayout& layout) {
  const Scenario& sc = layout.scenario();
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t a = 0; a < sc.nA; ++a)
      for (std::size_t a2 = a + 1; a2 < sc.nA; ++a2) pin_entry(prog, layout.alice(s, a), layout.alice(s, a2), 0.0);
  for (std::size_t t = 0; t < sc.nT; ++t)
    for (std::size_t b = 0; b < sc.nB; ++b)
      for (std::size_t b2 = b + 1; b2 < sc.nB; ++b2) pin_entry(prog, layout.bob(t, b), layout.bob(t, b2), 0.0);
}

/// X[(s,a),(t,b)] = p(a,b|s,t).
inline void pin_correlation(ConicProgram& prog, const BlockLayout& layout, const Correlation& p) {
  const Scenario& sc = layout.scenario();
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t t = 0; t < sc.nT; ++t)
      for (std::size_t a = 0; a < sc.nA; ++a)
        for (std::size_t b = 0; b < sc.nB; ++b) pin_entry(prog, layout.alice(s, a), layout.bob(t, b), p(s, t, a, b));
}

/// X[(s,a),(t,b)] = 0 whenever pi(s,t) > 1e-12 and V(a,b|s,t) = 0.
inline void add_losing_zeros(ConicProgram& prog, const BlockLayout& layout, const Game& g) {
  const Scenario& sc = layout.scenario();
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t t = 0; t < sc.nT; ++t) {
      if (!(g.pi(s, t) > 1e-12)) continue;
      for (std::size_t a = 0; a < sc.nA; ++a)
        for (std::size_t b = 0; b < sc.nB; ++b)
          if (!g.wins(s, t, a, b)) pin_entry(prog, layout.alice(s, a), layout.bob(t, b), 0.0);
    }
}

/// (P_K): maximize <C-hat, X> subject to <J_{i,j}, X> = 1 over S u T.
inline ConicProgram game_program(const Game& g, ConeKind cone) {
  const BlockLayout layout(g.scenario(), false);
  ConicProgram prog;
  prog.dim = layout.dim();
  prog.objective = symmetric_cost(g);
  prog.cone = {cone};
  add_j_constraints(prog, layout);
  return prog;
}

/// Mask selecting the S x T (and T x S) blocks of a game-level matrix.
inline SymMatrix cross_block_mask(const Scenario& sc) {
  const BlockLayout layout(sc, false);
  SymMatrix m(layout.dim());
  for (std::size_t r = 0; r < sc.alice_size(); ++r)
    for (std::size_t c = 0; c < sc.bob_size(); ++c) m.set(r, sc.alice_size() + c, 1.0);
  return m;
}

}  // namespace nlg::programs
