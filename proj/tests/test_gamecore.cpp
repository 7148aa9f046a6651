#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nlgames/corrsets.hpp"
#include "nlgames/gamecore.hpp"
#include "nlgames/sampling.hpp"

using namespace nlg;

namespace {

const double kTsirelson = std::pow(std::cos(std::numbers::pi / 8.0), 2);

Game constant_game(const Scenario& sc, bool win) {
  return make_game(sc, uniform_pi(sc), [&](auto, auto, auto, auto) { return win; });
}

SymMatrix random_symmetric(Rng& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) m.set(i, j, g(rng));
  return m;
}

}  // namespace

TEST(Scenario, Sizes) {
  const Scenario sc{2, 3, 4, 5};
  EXPECT_EQ(sc.block_dim(), 2u * 4 + 3 * 5);
  EXPECT_EQ(sc.num_questions(), 5u);
  EXPECT_THROW((Scenario{0, 1, 1, 1}.validate()), std::invalid_argument);
}

TEST(Game, RejectsBadDistribution) {
  const Scenario sc{1, 1, 1, 1};
  EXPECT_THROW(Game(sc, {0.5}, {1}), std::invalid_argument);
  EXPECT_THROW(Game(sc, {1.0}, {2}), std::invalid_argument);
  EXPECT_NO_THROW(Game(sc, {1.0}, {1}));
}

TEST(CostMatrix, AllWinSingleQuestion) {
  const CostMatrix c = cost_matrix(constant_game({1, 1, 2, 2}, true));
  for (double v : c.data) EXPECT_EQ(v, 1.0);
}

TEST(CostMatrix, Chsh) {
  const Game g = chsh_game();
  const CostMatrix c = cost_matrix(g);
  ASSERT_EQ(c.rows, 4u);
  ASSERT_EQ(c.cols, 4u);
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t t = 0; t < 2; ++t)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) EXPECT_EQ(c(s * 2 + a, t * 2 + b), ((a ^ b) == (s & t)) ? 0.25 : 0.0);
}

TEST(CostMatrix, AllLoseIsZero) {
  for (double v : cost_matrix(constant_game({2, 2, 2, 2}, false)).data) EXPECT_EQ(v, 0.0);
}

TEST(SymmetricCost, ZeroAndBlockStructure) {
  EXPECT_EQ(symmetric_cost(constant_game({2, 2, 2, 2}, false)).max_abs(), 0.0);
  const SymMatrix c = symmetric_cost(chsh_game());
  EXPECT_EQ(c(0, 1), 0.0);
  EXPECT_EQ(c(0, 4), 0.125);
}

TEST(SymmetricCost, InnerProductMatchesCrossBlocks) {
  Rng rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    const Game g = random_game({2, 3, 2, 2}, rng);
    const SymMatrix x = random_symmetric(rng, g.scenario().block_dim());
    const CostMatrix c = cost_matrix(g);
    const BlockLayout layout(g.scenario(), false);
    double direct = 0.0;
    for (std::size_t r = 0; r < c.rows; ++r)
      for (std::size_t k = 0; k < c.cols; ++k) direct += c(r, k) * x(r, g.scenario().alice_size() + k);
    EXPECT_NEAR(inner(symmetric_cost(g), x), direct, 1e-12);
  }
}

TEST(SymmetricCost, ChshClassicalStrategyValue) {
  const Game g = chsh_game();
  const SymMatrix x = embed_correlation(deterministic_correlation(g.scenario(), {0, 0}, {0, 0}));
  EXPECT_NEAR(inner(symmetric_cost(g), x), 0.75, 1e-15);
}

TEST(JApply, Examples) {
  const Scenario sc{2, 2, 2, 2};
  const SymMatrix ones = SymMatrix::constant(sc.block_dim(), 1.0);
  EXPECT_EQ(j_apply(ones, sc, QuestionRef::alice(0), QuestionRef::bob(1)), 4.0);
  const SymMatrix id = SymMatrix::identity(sc.block_dim());
  EXPECT_EQ(j_apply(id, sc, QuestionRef::alice(1), QuestionRef::alice(1)), 2.0);
  EXPECT_EQ(j_apply(id, sc, QuestionRef::alice(0), QuestionRef::alice(1)), 0.0);
  EXPECT_THROW(j_apply(ones, sc, QuestionRef::alice(2), QuestionRef::bob(0)), std::out_of_range);
  EXPECT_THROW(j_apply(ones, sc, QuestionRef::zero(), QuestionRef::bob(0)), std::out_of_range);
}

TEST(JMatrix, MatchesJApply) {
  Rng rng(22);
  const Scenario sc{2, 3, 3, 2};
  for (bool lifted : {false, true}) {
    const BlockLayout layout(sc, lifted);
    const SymMatrix x = random_symmetric(rng, layout.dim());
    const auto qs = layout.questions();
    for (const auto& i : qs)
      for (const auto& j : qs) EXPECT_NEAR(inner(layout.j_matrix(i, j), x), j_apply(x, sc, i, j), 1e-12);
  }
}

TEST(BlockLayout, FlatteningOrder) {
  const Scenario sc{2, 2, 3, 2};
  const BlockLayout game(sc, false), lifted(sc, true);
  EXPECT_EQ(game.alice(1, 2), 5u);
  EXPECT_EQ(game.bob(0, 0), 6u);
  EXPECT_EQ(game.bob(1, 1), 9u);
  EXPECT_EQ(lifted.alice(0, 0), 1u);
  EXPECT_EQ(lifted.index({Side::Zero, 0, 0}), 0u);
  EXPECT_THROW(game.index({Side::Zero, 0, 0}), std::out_of_range);
  EXPECT_THROW(game.index({Side::S, 0, 3}), std::out_of_range);
}

TEST(DeterministicCorrelation, Examples) {
  const Correlation p = deterministic_correlation({2, 2, 2, 2}, {0, 0}, {0, 0});
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t t = 0; t < 2; ++t) EXPECT_EQ(p(s, t, 0, 0), 1.0);
  EXPECT_TRUE(is_correlation(p));
  EXPECT_TRUE(is_nosignaling(p));
  const Correlation one = deterministic_correlation({1, 1, 1, 1}, {0}, {0});
  EXPECT_EQ(one.values(), std::vector<double>{1.0});
}

TEST(DeterministicCorrelation, VerticesHaveOneOnePerSlice) {
  Rng rng(23);
  const Scenario sc{3, 2, 3, 2};
  for (int rep = 0; rep < 10; ++rep) {
    const Correlation p = random_deterministic(sc, rng);
    for (std::size_t s = 0; s < sc.nS; ++s)
      for (std::size_t t = 0; t < sc.nT; ++t) {
        int ones = 0;
        for (std::size_t a = 0; a < sc.nA; ++a)
          for (std::size_t b = 0; b < sc.nB; ++b) {
            const double v = p(s, t, a, b);
            EXPECT_TRUE(v == 0.0 || v == 1.0);
            ones += v == 1.0;
          }
        EXPECT_EQ(ones, 1);
      }
  }
}

TEST(WinProbability, Examples) {
  Rng rng(24);
  const Scenario sc{2, 2, 2, 2};
  EXPECT_NEAR(win_probability(constant_game(sc, true), random_nosignaling(sc, rng)), 1.0, 1e-12);
  EXPECT_EQ(win_probability(chsh_game(), deterministic_correlation(sc, {0, 0}, {0, 0})), 0.75);
  EXPECT_NEAR(win_probability(chsh_game(), evaluate_quantum_strategy(chsh_quantum_strategy())), kTsirelson, 1e-10);
}

TEST(WinProbability, MatchesSymmetricCostOnCorrelations) {
  Rng rng(25);
  const Scenario sc{2, 3, 2, 3};
  for (int rep = 0; rep < 10; ++rep) {
    const Game g = random_game(sc, rng);
    const Correlation p = random_nosignaling(sc, rng);
    EXPECT_NEAR(inner(symmetric_cost(g), embed_correlation(p)), win_probability(g, p), 1e-12);
  }
}

TEST(QuantumStrategy, ScalarStrategyIsProductDistribution) {
  QuantumStrategy q;
  q.scenario = {1, 1, 2, 2};
  q.k = HermMatrix(SymMatrix::identity(1));
  q.alice = {HermMatrix(SymMatrix{{0.3}}), HermMatrix(SymMatrix{{0.7}})};
  q.bob = {HermMatrix(SymMatrix{{0.4}}), HermMatrix(SymMatrix{{0.6}})};
  const Correlation p = evaluate_quantum_strategy(q);
  EXPECT_NEAR(p(0, 0, 0, 0), 0.12, 1e-15);
  EXPECT_NEAR(p(0, 0, 1, 1), 0.42, 1e-15);
}

TEST(QuantumStrategy, DiagonalOperatorsGiveClassicalCorrelations) {
  // K = diag(1,1)/sqrt2, diagonal measurement operators.
  const double r = 1.0 / std::sqrt(2.0);
  QuantumStrategy q;
  q.scenario = {2, 2, 2, 2};
  q.k = HermMatrix(SymMatrix::identity(2) * r);
  auto diag = [&](double x, double y) { return HermMatrix(SymMatrix{{x * r, 0}, {0, y * r}}); };
  q.alice = {diag(1, 0), diag(0, 1), diag(1, 1), diag(0, 0)};
  q.bob = {diag(0, 1), diag(1, 0), diag(0.5, 1), diag(0.5, 0)};
  const Correlation p = evaluate_quantum_strategy(q);
  EXPECT_TRUE(is_correlation(p));
  EXPECT_EQ(classical_membership(p).status, Verdict::In);
}

TEST(QuantumStrategy, SlicesSumToOne) {
  Rng rng(26);
  const Scenario sc{3, 2, 3, 2};
  for (int rep = 0; rep < 5; ++rep) {
    const Correlation p = evaluate_quantum_strategy(random_quantum_strategy(sc, rng, 3));
    EXPECT_TRUE(is_correlation(p));
    EXPECT_TRUE(is_nosignaling(p));
  }
}

TEST(QuantumStrategy, ValidationNamesViolatedSum) {
  QuantumStrategy q = chsh_quantum_strategy();
  q.alice[2] = 0.5 * q.alice[2];
  try {
    evaluate_quantum_strategy(q);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("X^1_a"), std::string::npos);
  }
  QuantumStrategy q2 = chsh_quantum_strategy();
  q2.k = 2.0 * q2.k;
  EXPECT_THROW(evaluate_quantum_strategy(q2), PreconditionError);
}

TEST(QuantumStrategy, GramBlockSumsAreOne) {
  Rng rng(27);
  const Scenario sc{2, 2, 3, 2};
  const SymMatrix g = lifted_strategy_gram(random_quantum_strategy(sc, rng));
  const BlockLayout layout(sc, true);
  for (const auto& i : layout.questions())
    for (const auto& j : layout.questions()) EXPECT_NEAR(j_apply(g, sc, i, j), 1.0, 1e-12);
}

TEST(Enumeration, CapAndOrder) {
  EXPECT_EQ(capped_power(2, 12, 4096, "x"), 4096u);
  EXPECT_THROW(capped_power(2, 13, 4096, "x"), CapExceeded);
  std::vector<std::vector<std::size_t>> seen;
  for_each_assignment(2, 2, [&](const std::vector<std::size_t>& a) {
    seen.push_back(a);
    return true;
  });
  EXPECT_EQ(seen, (std::vector<std::vector<std::size_t>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
}
