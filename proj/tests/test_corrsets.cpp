#include <gtest/gtest.h>

#include <cmath>

#include "nlgames/corrsets.hpp"
#include "nlgames/sampling.hpp"

using namespace nlg;

namespace {

const Scenario k2222{2, 2, 2, 2};

Correlation uniform_correlation(const Scenario& sc) {
  return Correlation(sc, std::vector<double>(sc.nS * sc.nT * sc.nA * sc.nB, 1.0 / static_cast<double>(sc.nA * sc.nB)));
}

// p(0,0|0,0) = 1, but Alice's marginal at s=0 depends on t.
Correlation signaling_example() {
  Correlation p(k2222);
  p.at(0, 0, 0, 0) = 1.0;
  p.at(0, 1, 1, 0) = 1.0;
  p.at(1, 0, 0, 0) = 1.0;
  p.at(1, 1, 0, 0) = 1.0;
  return p;
}

}  // namespace

TEST(Correlation, Validity) {
  EXPECT_TRUE(is_correlation(pr_box()));
  EXPECT_TRUE(is_correlation(uniform_correlation(k2222)));
  Correlation bad = pr_box();
  bad.at(0, 0, 0, 0) = 0.6;
  EXPECT_FALSE(is_correlation(bad));
  Correlation neg = pr_box();
  neg.at(0, 0, 0, 0) = 0.6;
  neg.at(0, 0, 1, 1) = -0.1;
  EXPECT_FALSE(is_correlation(neg));
}

TEST(NoSignaling, Examples) {
  EXPECT_TRUE(is_nosignaling(pr_box()));
  EXPECT_TRUE(is_nosignaling(uniform_correlation(k2222)));
  EXPECT_FALSE(is_nosignaling(signaling_example()));
}

TEST(Marginals, PrBoxIsUniform) {
  const Marginals m = marginals(pr_box());
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t x = 0; x < 2; ++x) {
      EXPECT_EQ(m.a(s, x), 0.5);
      EXPECT_EQ(m.b(s, x), 0.5);
    }
}

TEST(Marginals, SignalingInputThrows) {
  try {
    marginals(signaling_example());
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("marginals undefined"), std::string::npos);
  }
}

TEST(CorrMembership, PrBox) {
  const Correlation p = pr_box();
  EXPECT_EQ(corr_membership(p, CorrCone::Nonneg).status, Verdict::In);
  EXPECT_EQ(corr_membership(p, CorrCone::Nso).status, Verdict::In);
  const MembershipVerdict dnn = corr_membership(p, CorrCone::Dnn);
  EXPECT_EQ(dnn.status, Verdict::Out);
  EXPECT_GT(dnn.distance, 0.1);
}

TEST(CorrMembership, ChshQuantumPoint) {
  const Correlation p = evaluate_quantum_strategy(chsh_quantum_strategy());
  EXPECT_EQ(corr_membership(p, CorrCone::Dnn).status, Verdict::In);
  EXPECT_EQ(npa1_membership(p).status, Verdict::In);
  EXPECT_EQ(classical_membership(p).status, Verdict::Out);
}

TEST(CorrMembership, RejectsNonCorrelation) {
  Correlation bad = pr_box();
  bad.at(0, 0, 0, 0) = 2.0;
  EXPECT_THROW(corr_membership(bad, CorrCone::Nonneg), PreconditionError);
  EXPECT_THROW(classical_membership(bad), PreconditionError);
}

TEST(CorrMembership, DnnWitnessReproducesTheCorrelation) {
  const Correlation p = evaluate_quantum_strategy(chsh_quantum_strategy());
  const MembershipVerdict v = corr_membership(p, CorrCone::Dnn);
  ASSERT_TRUE(v.witness.has_value());
  const Correlation q = extract_correlation(*v.witness, k2222);
  for (std::size_t k = 0; k < p.values().size(); ++k) EXPECT_NEAR(q.values()[k], p.values()[k], 1e-6);
}

TEST(ClassicalMembership, Examples) {
  EXPECT_EQ(classical_membership(deterministic_correlation(k2222, {0, 1}, {1, 0})).status, Verdict::In);
  EXPECT_EQ(classical_membership(uniform_correlation(k2222)).status, Verdict::In);
  EXPECT_EQ(classical_membership(pr_box()).status, Verdict::Out);
}

TEST(ClassicalMembership, RandomMixturesAreIn) {
  Rng rng(41);
  const Scenario sc{2, 3, 2, 2};
  for (int rep = 0; rep < 10; ++rep) {
    Correlation p(sc);
    const auto w = detail::random_simplex_point(rng, 4);
    for (double wi : w) {
      const Correlation d = random_deterministic(sc, rng);
      for (std::size_t k = 0; k < p.values().size(); ++k)
        p.at(k / (sc.nT * sc.nA * sc.nB), (k / (sc.nA * sc.nB)) % sc.nT, (k / sc.nB) % sc.nA, k % sc.nB) +=
            wi * d.values()[k];
    }
    const MembershipVerdict v = classical_membership(p);
    EXPECT_EQ(v.status, Verdict::In);
    ASSERT_TRUE(v.witness.has_value());
    const Correlation mix = extract_correlation(*v.witness, sc);
    for (std::size_t k = 0; k < p.values().size(); ++k) EXPECT_NEAR(mix.values()[k], p.values()[k], 1e-6);
  }
}

TEST(ClassicalMembership, CapExceeded) {
  const Scenario big{13, 1, 2, 1};
  EXPECT_THROW(classical_membership(uniform_correlation(big)), CapExceeded);
}

TEST(Npa1, PrBoxIsOut) {
  const MembershipVerdict v = npa1_membership(pr_box());
  EXPECT_EQ(v.status, Verdict::Out);
}

TEST(Npa1, SignalingInputThrows) {
  EXPECT_THROW(npa1_membership(signaling_example()), PreconditionError);
}

TEST(Npa1, DeterministicIsIn) {
  EXPECT_EQ(npa1_membership(deterministic_correlation(k2222, {1, 0}, {0, 0})).status, Verdict::In);
}

TEST(Inclusions, NsoMatchesNoSignalingTest) {
  Rng rng(42);
  const Scenario sc{2, 2, 2, 2};
  for (int rep = 0; rep < 100; ++rep) {
    const Correlation ns = random_nosignaling(sc, rng);
    EXPECT_EQ(corr_membership(ns, CorrCone::Nso).status, Verdict::In);
    const Correlation sig = random_signaling(sc, rng);
    ASSERT_FALSE(is_nosignaling(sig));
    EXPECT_EQ(corr_membership(sig, CorrCone::Nso).status, Verdict::Out);
  }
}

// Random quantum points sit on the boundary, where alternating projections
// converge slowly: they may come back UNDECIDED but never OUT.
TEST(Inclusions, QuantumPointsNeverRejected) {
  Rng rng(43);
  for (const Scenario& sc : {Scenario{2, 2, 2, 2}, Scenario{2, 3, 3, 2}}) {
    for (int rep = 0; rep < 2; ++rep) {
      const Correlation p = evaluate_quantum_strategy(random_quantum_strategy(sc, rng));
      EXPECT_NE(corr_membership(p, CorrCone::Dnn).status, Verdict::Out);
      EXPECT_EQ(corr_membership(p, CorrCone::Nso).status, Verdict::In);
      EXPECT_NE(npa1_membership(p).status, Verdict::Out);
    }
  }
}

TEST(Inclusions, QuantumPointsWarmStartedAtTheirWitness) {
  Rng rng(46);
  for (int rep = 0; rep < 5; ++rep) {
    const QuantumStrategy q = random_quantum_strategy(k2222, rng);
    const Correlation p = evaluate_quantum_strategy(q);
    const SymMatrix w = cs_witness_check(q);
    EXPECT_EQ(corr_membership(p, CorrCone::Dnn, kDefaultEpsFeas, {}, w).status, Verdict::In);
    const SymMatrix z = dnn_to_npa1_witness(lift_with_marginals(p, w), k2222);
    EXPECT_EQ(npa1_membership(p, kDefaultEpsFeas, {}, z).status, Verdict::In);
  }
}

TEST(Inclusions, ClassicalImpliesDnn) {
  Rng rng(44);
  for (int rep = 0; rep < 10; ++rep) {
    const Correlation p = random_deterministic(k2222, rng);
    EXPECT_EQ(corr_membership(p, CorrCone::Dnn).status, Verdict::In);
  }
}

TEST(CsWitness, GramIsDnnWithUnitBlockSums) {
  Rng rng(45);
  const QuantumStrategy q = random_quantum_strategy({2, 2, 3, 2}, rng, 3);
  const SymMatrix w = cs_witness_check(q);
  EXPECT_GE(w.min_entry(), -1e-12);
  EXPECT_GE(min_eigenvalue(w), -1e-10);
}

TEST(Lifting, DnnWitnessToNpa1) {
  const Correlation p = evaluate_quantum_strategy(chsh_quantum_strategy());
  const SymMatrix w = cs_witness_check(chsh_quantum_strategy());
  const SymMatrix lifted = lift_with_marginals(p, w);
  EXPECT_GE(min_eigenvalue(lifted), -1e-9);
  const SymMatrix z = dnn_to_npa1_witness(lifted, k2222);
  const ConicProgram prog = npa1_program(p);
  double worst = 0.0;
  for (const auto& c : prog.constraints) worst = std::max(worst, std::abs(inner(c.a, z) - c.b));
  EXPECT_LE(worst, 1e-9);
  EXPECT_GE(min_eigenvalue(z), -1e-9);
}

TEST(Lifting, RejectsWrongWitness) {
  const Correlation p = pr_box();
  EXPECT_THROW(lift_with_marginals(p, SymMatrix(3)), std::invalid_argument);
  EXPECT_THROW(lift_with_marginals(p, embed_correlation(deterministic_correlation(k2222, {0, 0}, {0, 0}))),
               PreconditionError);
}
