#pragma once

// Game values: classical, DNN (Feige-Lovasz), first NPA level, no-signaling
// and unrestricted, the DNN dual bound with an explicit certificate, and
// perfect-strategy feasibility.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlgames/conicsolve.hpp"
#include "nlgames/gamecore.hpp"
#include "nlgames/programs.hpp"

namespace nlg {

struct DeterministicStrategy {
  std::vector<std::size_t> alpha;  // S -> A
  std::vector<std::size_t> beta;   // T -> B
};

struct ValueReport {
  double value = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  // Dual objective of the conic solve; equals value for exact methods.
  double dual_value = 0.0;
  Residuals residuals;
  int iterations = 0;
  std::optional<Correlation> correlation;
  std::optional<DeterministicStrategy> strategy;
  std::optional<SymMatrix> matrix;
  std::optional<DualCertificateDNN> certificate;
  std::optional<double> certificate_bound;
  // Value of the matching conic program when a closed form is also available.
  std::optional<double> conic_value;
};

struct DualBound {
  double bound = 0.0;
  DualCertificateDNN cert;
  CertificateCheck check;
  double shift = 0.0;
};

struct ValueChain {
  double classical = 0.0;
  double dnn = 0.0;
  double sdp1 = 0.0;
  double nosignaling = 0.0;
  double unrestricted = 0.0;
};

struct ChainCheck {
  bool classical_le_dnn = false;
  bool dnn_le_sdp1 = false;
  bool dnn_le_nosignaling = false;
  bool nosignaling_le_unrestricted = false;
  bool all() const { return classical_le_dnn && dnn_le_sdp1 && dnn_le_nosignaling && nosignaling_le_unrestricted; }
};

inline ChainCheck check_chain(const ValueChain& c, double tol) {
  return {c.classical <= c.dnn + tol, c.dnn <= c.sdp1 + tol, c.dnn <= c.nosignaling + tol,
          c.nosignaling <= c.unrestricted + tol};
}

namespace detail {

inline ValueReport report_from_solve(const SolveResult& r, const Scenario& sc) {
  ValueReport rep;
  rep.value = r.value;
  rep.status = r.status;
  rep.dual_value = r.dual_value;
  rep.residuals = r.residuals;
  rep.iterations = r.iterations;
  rep.matrix = r.x;
  rep.correlation = extract_correlation(r.x, sc);
  return rep;
}

}  // namespace detail

/// omega_P: every (s,t) slice independently puts its mass on a winning pair.
inline ValueReport value_unrestricted(const Game& g, const SolverOptions& opt = {}) {
  const Scenario& sc = g.scenario();
  ValueReport rep;
  Correlation p(sc);
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t t = 0; t < sc.nT; ++t) {
      std::size_t best_a = 0, best_b = 0;
      bool found = false;
      for (std::size_t a = 0; a < sc.nA && !found; ++a)
        for (std::size_t b = 0; b < sc.nB && !found; ++b)
          if (g.wins(s, t, a, b)) {
            best_a = a;
            best_b = b;
            found = true;
          }
      p.at(s, t, best_a, best_b) = 1.0;
      if (found) rep.value += g.pi(s, t);
    }
  rep.correlation = std::move(p);
  const SolveResult r = solve(programs::game_program(g, ConeKind::Nonneg), opt);
  rep.conic_value = r.value;
  rep.residuals = r.residuals;
  rep.iterations = r.iterations;
  rep.status = r.status;
  return rep;
}

/// omega_C by enumerating Alice's maps and letting Bob best-respond.
inline ValueReport value_classical(const Game& g, std::size_t cap = kEnumerationCap) {
  const Scenario& sc = g.scenario();
  capped_power(sc.nA, sc.nS, cap, "scenario too large for vertex enumeration");
  ValueReport rep;
  rep.value = -1.0;
  std::vector<std::size_t> beta(sc.nT);
  for_each_assignment(sc.nS, sc.nA, [&](const std::vector<std::size_t>& alpha) {
    double total = 0.0;
    for (std::size_t t = 0; t < sc.nT; ++t) {
      double best = -1.0;
      for (std::size_t b = 0; b < sc.nB; ++b) {
        double w = 0.0;
        for (std::size_t s = 0; s < sc.nS; ++s)
          if (g.wins(s, t, alpha[s], b)) w += g.pi(s, t);
        if (w > best) {
          best = w;
          beta[t] = b;
        }
      }
      total += best;
    }
    if (total > rep.value) {
      rep.value = total;
      rep.strategy = DeterministicStrategy{alpha, beta};
    }
    return true;
  });
  rep.correlation = deterministic_correlation(sc, rep.strategy->alpha, rep.strategy->beta);
  return rep;
}

/// omega_NS as (P_K) over NONNEG plus the no-signaling equalities.
inline ValueReport value_nosignaling(const Game& g, const SolverOptions& opt = {}) {
  ConicProgram prog = programs::game_program(g, ConeKind::Nonneg);
  programs::add_nosignaling_constraints(prog, BlockLayout(g.scenario(), false));
  return detail::report_from_solve(solve(prog, opt), g.scenario());
}

/// The DNN value program (P_DNN); the same program the certificate refers to.
inline ConicProgram dnn_value_program(const Game& g) { return programs::game_program(g, ConeKind::Dnn); }

/// Splits the solver's DNN duals into a verified certificate.
inline DualBound certificate_from_solve(const ConicProgram& prog, const SolveResult& r, double max_shift = 1e-4,
                                        double verify_tol = 1e-9) {
  CertificateExtraction ex = extract_dnn_certificate(prog, r.dual, r.dual_psd, max_shift);
  DualBound db;
  db.check = verify_certificate(ex.cert, prog, verify_tol);
  if (!db.check.ok) throw std::runtime_error("certificate extraction failed");
  db.bound = db.check.bound;
  db.cert = std::move(ex.cert);
  db.shift = ex.shift;
  return db;
}

/// omega(DNN, G) with a dual certificate attached.
inline ValueReport value_dnn(const Game& g, const SolverOptions& opt = {}) {
  const ConicProgram prog = dnn_value_program(g);
  const SolveResult r = solve(prog, opt);
  ValueReport rep = detail::report_from_solve(r, g.scenario());
  try {
    DualBound db = certificate_from_solve(prog, r);
    rep.certificate_bound = db.bound;
    rep.certificate = std::move(db.cert);
  } catch (const std::runtime_error&) {
    // No certificate when the duals are too far from feasible.
  }
  return rep;
}

/// xi(DNN, G): upper bound on the quantum value certified by v, P, N.
inline DualBound dual_value_dnn(const Game& g, const SolverOptions& opt = {}) {
  const ConicProgram prog = dnn_value_program(g);
  const SolveResult r = solve(prog, opt);
  return certificate_from_solve(prog, r);
}

/// The first-NPA-level program: psd, all J sums 1, S x T blocks entrywise
/// nonnegative, same-question off-diagonal entries zero.
inline ConicProgram sdp1_program(const Game& g) {
  ConicProgram prog = programs::game_program(g, ConeKind::Dnn);
  prog.nonneg_mask = programs::cross_block_mask(g.scenario());
  programs::add_same_question_zeros(prog, BlockLayout(g.scenario(), false));
  return prog;
}

inline ValueReport value_sdp1(const Game& g, const SolverOptions& opt = {}) {
  return detail::report_from_solve(solve(sdp1_program(g), opt), g.scenario());
}

enum class PerfectCone { Nonneg, Nso, Dnn, Classical };

inline const char* to_string(PerfectCone c) {
  switch (c) {
    case PerfectCone::Nonneg: return "NONNEG";
    case PerfectCone::Nso: return "NSO";
    case PerfectCone::Dnn: return "DNN";
    case PerfectCone::Classical: return "CLASSICAL";
  }
  return "?";
}

/// (F_K): J sums 1 and zeros on every losing entry with positive pi.
inline ConicProgram perfect_program(const Game& g, PerfectCone cone) {
  if (cone == PerfectCone::Classical) throw std::invalid_argument("perfect_program: no conic program for CLASSICAL");
  const BlockLayout layout(g.scenario(), false);
  ConicProgram prog = programs::game_program(g, cone == PerfectCone::Dnn ? ConeKind::Dnn : ConeKind::Nonneg);
  prog.objective = SymMatrix(layout.dim());
  if (cone == PerfectCone::Nso) programs::add_nosignaling_constraints(prog, layout);
  programs::add_losing_zeros(prog, layout, g);
  return prog;
}

/// True iff the deterministic pair wins every question pair of positive probability.
inline bool is_perfect_deterministic(const Game& g, const DeterministicStrategy& d) {
  const Scenario& sc = g.scenario();
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t t = 0; t < sc.nT; ++t)
      if (g.pi(s, t) > 1e-12 && !g.wins(s, t, d.alpha[s], d.beta[t])) return false;
  return true;
}

inline MembershipVerdict perfect_strategy(const Game& g, PerfectCone cone, double eps_feas = kDefaultEpsFeas,
                                          const FeasibilityOptions& fopt = {}, std::size_t cap = kEnumerationCap) {
  if (cone != PerfectCone::Classical) return verdict_from(feasibility_distance(perfect_program(g, cone), fopt), eps_feas);

  // A perfect classical strategy exists iff some vertex is perfect; for each
  // alpha Bob's perfect reply, if any, is forced per question.
  const Scenario& sc = g.scenario();
  capped_power(sc.nA, sc.nS, cap, "scenario too large for vertex enumeration");
  std::optional<DeterministicStrategy> found;
  for_each_assignment(sc.nS, sc.nA, [&](const std::vector<std::size_t>& alpha) {
    DeterministicStrategy d{alpha, std::vector<std::size_t>(sc.nT, 0)};
    for (std::size_t t = 0; t < sc.nT; ++t) {
      bool ok_t = false;
      for (std::size_t b = 0; b < sc.nB && !ok_t; ++b) {
        bool ok = true;
        for (std::size_t s = 0; s < sc.nS && ok; ++s)
          if (g.pi(s, t) > 1e-12 && !g.wins(s, t, alpha[s], b)) ok = false;
        if (ok) {
          d.beta[t] = b;
          ok_t = true;
        }
      }
      if (!ok_t) return true;
    }
    found = std::move(d);
    return false;
  });
  MembershipVerdict v;
  if (found) {
    v.status = Verdict::In;
    v.distance = 0.0;
    v.witness = embed_correlation(deterministic_correlation(sc, found->alpha, found->beta));
  } else {
    v.status = Verdict::Out;
    v.distance = 1.0;
  }
  return v;
}

/// All five values of a game; throws if they violate the inclusion chain by
/// more than chain_tol.
inline ValueChain value_chain(const Game& g, const SolverOptions& opt = {}, double chain_tol = 1e-5) {
  ValueChain c;
  c.classical = value_classical(g).value;
  c.dnn = value_dnn(g, opt).value;
  c.sdp1 = value_sdp1(g, opt).value;
  c.nosignaling = value_nosignaling(g, opt).value;
  c.unrestricted = value_unrestricted(g, opt).value;
  if (!check_chain(c, chain_tol).all()) throw std::runtime_error("value chain violated");
  return c;
}

}  // namespace nlg
