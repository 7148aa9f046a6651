// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nlgames/corrsets.hpp"
#include "nlgames/gamevalues.hpp"
#include "nlgames/sampling.hpp"
#include "nlgames/syncgraph.hpp"

using namespace nlg;

namespace {

const double kTsirelson = std::pow(std::cos(std::numbers::pi / 8.0), 2);
struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Game constant_game(const Scenario& sc, bool win) {
  return make_game(sc, uniform_pi(sc), [&](auto, auto, auto, auto) { return win; });
}

// Shared with criterion 9: every OPTIMAL solve seen during the sweep.
struct DualityLog {
  int optimal = 0;
  int violations = 0;
  double worst = -1e300;
  void record(const ValueReport& r) {
    if (r.status != SolveStatus::Optimal) return;
    ++optimal;
    const double slack = r.value - r.dual_value;
    worst = std::max(worst, slack);
    if (slack > 1e-6) ++violations;
  }
};

DualityLog g_duality;

void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Game g = chsh_game();
  const double c = value_classical(g).value;
  const ValueReport ns = value_nosignaling(g);
  const ValueReport dnn = value_dnn(g);
  const ValueReport sdp1 = value_sdp1(g);
  const double un = value_unrestricted(g).value;
  const double secs = seconds_since(t0);
  o.check(c == 0.75, "classical == 0.75");
  o.check(std::abs(ns.value - 1.0) <= 1e-5, "nosignaling == 1 +- 1e-5");
  o.check(std::abs(dnn.value - 0.8535534) <= 1e-4, "dnn == 0.8535534 +- 1e-4");
  o.check(std::abs(sdp1.value - 0.8535534) <= 1e-4, "sdp1 == 0.8535534 +- 1e-4");
  o.check(un == 1.0, "unrestricted == 1");
  o.check(secs < 30.0, "runtime < 30 s");
  o.detail << " classical=" << c << " nosignaling=" << ns.value << " dnn=" << dnn.value << " sdp1=" << sdp1.value
           << " unrestricted=" << un << " time=" << secs << "s";
}

void criterion2(Outcome& o) {
  const double win = win_probability(chsh_game(), evaluate_quantum_strategy(chsh_quantum_strategy()));
  const DualBound db = dual_value_dnn(chsh_game());
  o.check(win >= 0.8535533, "strategy wins with probability >= 0.8535533");
  o.check(db.check.ok, "certificate verifies");
  o.check(db.bound <= 0.8535535 + 1e-4, "certificate bound <= 0.8535535 + 1e-4");
  o.detail << " win=" << win << " bound=" << db.bound << " width=" << db.bound - win;
}

void criterion3(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(3);
  const Scenario sc{2, 2, 2, 2};
  int violations = 0, not_optimal = 0, gaps = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Game g = random_game(sc, rng);
    const double c = value_classical(g).value;
    const ValueReport dnn = value_dnn(g), sdp1 = value_sdp1(g), ns = value_nosignaling(g);
    const double un = value_unrestricted(g).value;
    for (const ValueReport* r : {&dnn, &sdp1, &ns}) {
      g_duality.record(*r);
      if (r->status != SolveStatus::Optimal) ++not_optimal;
    }
    const bool ok = c <= dnn.value + 1e-5 && dnn.value + 1e-5 <= ns.value + 2e-5 && ns.value + 2e-5 <= un + 3e-5 &&
                    dnn.value <= sdp1.value + 1e-5;
    if (!ok) {
      ++violations;
      std::printf("  game %d: classical=%.9f dnn=%.9f sdp1=%.9f nosignaling=%.9f unrestricted=%.9f\n", i, c, dnn.value,
                  sdp1.value, ns.value, un);
    }
    const double gap = sdp1.value - dnn.value;
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-4) {
      ++gaps;
      std::printf("  finding: game %d has sdp1 - dnn = %.3e (dnn=%.9f sdp1=%.9f)\n", i, gap, dnn.value, sdp1.value);
    }
  }
  const double secs = seconds_since(t0);
  o.check(violations == 0, "chain holds on all 200 games");
  o.check(secs < 600.0, "runtime < 10 min");
  o.detail << " violations=" << violations << " non_optimal_solves=" << not_optimal << " sdp1_gaps>1e-4=" << gaps
           << " max(sdp1-dnn)=" << worst_gap << " time=" << secs << "s";
}

void criterion4(Outcome& o) {
  Rng rng(4);
  const Scenario sc{2, 2, 2, 2};
  int pass = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const SymMatrix x = random_lifted_dnn_witness(sc, rng);
    const SymMatrix z = dnn_to_npa1_witness(x, sc);
    const Correlation p = extract_correlation(x, sc);
    const MembershipVerdict v = npa1_membership(p, kDefaultEpsFeas, {}, z);
    worst = std::max(worst, v.distance);
    pass += v.status == Verdict::In && v.distance <= 1e-7;
  }
  o.check(pass == 50, "all 50 converted witnesses within 1e-7 of the NPA(1) set");
  o.detail << " passed=" << pass << "/50 worst_distance=" << worst;
}

void criterion5(Outcome& o) {
  const double dnn = sync_value(chsh_game(), SyncCone::Dnn).value;
  const double cl = sync_value(chsh_game(), SyncCone::Classical).value;
  o.check(std::abs(dnn - 0.75) <= 1e-5, "synchronous DNN value == 0.75 +- 1e-5");
  o.check(std::abs(cl - 0.75) <= 1e-5, "synchronous classical value == 0.75 +- 1e-5");
  o.detail << " dnn=" << dnn << " classical=" << cl;
}

void criterion6(Outcome& o) {
  const Graph c5 = cycle_graph(5);
  const std::size_t chi = chromatic_number(c5), alpha = independence_number(c5), chi4 = chromatic_number(complete_graph(4));
  o.check(chi == 3 && alpha == 2 && chi4 == 4, "chi(C5)=3, alpha(C5)=2, chi(K4)=4");
  const Verdict k3 = quantum_graph_bounds(c5, GraphParameter::Chromatic, 3).status;
  const Verdict k2 = quantum_graph_bounds(complete_graph(2), GraphParameter::Chromatic, 1).status;
  o.check(k3 == Verdict::In, "C5 with 3 colors FEASIBLE");
  o.check(k2 == Verdict::Out, "K2 with 1 color INFEASIBLE");
  std::string sweep;
  bool seen_feasible = false, monotone = true;
  for (std::size_t k = 1; k <= 5; ++k) {
    const Verdict v = quantum_graph_bounds(c5, GraphParameter::Chromatic, k).status;
    sweep += feasibility_label(v)[0];
    if (v == Verdict::Undecided) monotone = false;
    if (v == Verdict::In) seen_feasible = true;
    else if (seen_feasible) monotone = false;
  }
  o.check(monotone && seen_feasible, "C5 sweep k=1..5 monotone");
  o.detail << " chi(C5)=" << chi << " alpha(C5)=" << alpha << " chi(K4)=" << chi4 << " C5 sweep=" << sweep;
}

void criterion7(Outcome& o) {
  Rng rng(7);
  int agree = 0, agree_bin = 0;
  for (int i = 0; i < 100; ++i) {
    const Csp c = random_binary_csp(rng, 3, 3);
    agree += csp_satisfiable(c) == (sync_perfect(csp_game(c), SyncCone::Classical).status == Verdict::In);
  }
  for (int i = 0; i < 100; ++i) {
    const Csp c = random_csp(rng, 4, 3, 3);
    agree_bin += csp_satisfiable(c) == csp_satisfiable(csp_binarize(c));
  }
  o.check(agree == 100, "binary CSP satisfiable iff perfect synchronous classical strategy");
  o.check(agree_bin == 100, "binarization preserves satisfiability");
  o.detail << " game_agreement=" << agree << "/100 binarize_agreement=" << agree_bin << "/100";
}

void criterion8(Outcome& o) {
  const Correlation pr = pr_box();
  const bool ns = is_nosignaling(pr) && corr_membership(pr, CorrCone::Nso).status == Verdict::In;
  const MembershipVerdict dnn = corr_membership(pr, CorrCone::Dnn);
  const MembershipVerdict npa = npa1_membership(pr);
  o.check(ns, "PR box no-signaling IN");
  o.check(dnn.status == Verdict::Out, "PR box DNN OUT");
  o.check(npa.status == Verdict::Out, "PR box NPA(1) OUT");

  const Scenario sc{2, 2, 2, 2};
  int det_in = 0, det_total = 0;
  for_each_assignment(2, 2, [&](const std::vector<std::size_t>& alpha) {
    for_each_assignment(2, 2, [&](const std::vector<std::size_t>& beta) {
      ++det_total;
      det_in += classical_membership(deterministic_correlation(sc, alpha, beta)).status == Verdict::In;
      return true;
    });
    return true;
  });
  o.check(det_in == det_total, "every deterministic correlation classical IN");

  Rng rng(8);
  int agree = 0;
  for (int i = 0; i < 100; ++i) {
    const Correlation p = random_signaling(sc, rng);
    const Verdict v = corr_membership(p, CorrCone::Nso).status;
    agree += v == Verdict::Out && !is_nosignaling(p);
  }
  o.check(agree == 100, "signaling tensors NSO OUT and is_nosignaling false");
  o.detail << " pr_dnn_distance=" << dnn.distance << " pr_npa1_distance=" << npa.distance
           << " deterministic_in=" << det_in << "/" << det_total << " signaling_out=" << agree << "/100";
}

void criterion9(Outcome& o) {
  Rng rng(9);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double idem = 0.0, recon = 0.0;
  for (std::size_t n : {2u, 5u, 10u, 20u}) {
    for (int rep = 0; rep < 5; ++rep) {
      SymMatrix m(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) m.set(i, j, gauss(rng));
      const SymMatrix p = project_psd(m);
      idem = std::max(idem, (project_psd(p) - p).max_abs());
      const EigenDecomp ed = eigh(m);
      SymMatrix r(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
          double v = 0.0;
          for (std::size_t k = 0; k < n; ++k) v += ed.vector_entry(i, k) * ed.values[k] * ed.vector_entry(j, k);
          r.set(i, j, v);
        }
      recon = std::max(recon, (r - m).max_abs());
    }
  }
  o.check(idem <= 1e-9, "project_psd idempotent within 1e-9");
  o.check(recon <= 1e-9, "eigh reconstruction within 1e-9");

  // More solves on top of the criterion-3 sweep.
  for (int i = 0; i < 20; ++i) {
    const Game g = random_game({2, 3, 2, 2}, rng);
    g_duality.record(value_dnn(g));
    g_duality.record(value_nosignaling(g));
  }
  g_duality.record(value_dnn(constant_game({2, 2, 2, 2}, false)));
  o.check(g_duality.optimal > 0 && g_duality.violations == 0, "primal <= dual + 1e-6 on every OPTIMAL solve");

  const ConicProgram prog = dnn_value_program(chsh_game());
  const DualBound db = dual_value_dnn(chsh_game());
  int rejected = 0;
  DualCertificateDNN psd = db.cert;
  psd.psd_part.set(0, 0, psd.psd_part(0, 0) - 0.1);
  psd.nonneg_part.set(0, 0, psd.nonneg_part(0, 0) + 0.1);
  rejected += !verify_certificate(psd, prog, 1e-9).ok;
  DualCertificateDNN nn = db.cert;
  nn.nonneg_part.set(0, 1, -0.05);
  rejected += !verify_certificate(nn, prog, 1e-9).ok;
  DualCertificateDNN eq = db.cert;
  eq.v[0] += 0.01;
  rejected += !verify_certificate(eq, prog, 1e-9).ok;
  o.check(db.check.ok, "genuine certificate accepted");
  o.check(rejected == 3, "injected violations rejected");
  o.detail << " idempotence=" << idem << " reconstruction=" << recon << " optimal_solves=" << g_duality.optimal
           << " max(primal-dual)=" << g_duality.worst << " rejected=" << rejected << "/3";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"CHSH value table", criterion1},
      {"quantum sandwich certificate", criterion2},
      {"value chain on 200 random games", criterion3},
      {"DNN to NPA(1) witness pipeline", criterion4},
      {"synchronous CHSH value", criterion5},
      {"graph parameters and DNN bounds", criterion6},
      {"CSP game equivalence and binarization", criterion7},
      {"membership oracles", criterion8},
      {"solver unit checks", criterion9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failed += !o.pass;
    std::printf("%s %zu: %s:%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
