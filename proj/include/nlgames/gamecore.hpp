#pragma once

// Bell scenarios, nonlocal games, correlations and block-indexed matrices.
//
// Index flattening (shared by every module and file format):
//   game level   : all (s,a) pairs s-major, then all (t,b) pairs t-major
//   lifted level : index 0 first, then the game-level order shifted by one
//   correlation  : p[s][t][a][b]

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlgames/numkernel.hpp"

namespace nlg {

/// Thrown when an input violates a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an exhaustive search would exceed its enumeration cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kEnumerationCap = 4096;

/// base^exp, throwing CapExceeded when it exceeds cap.
inline std::size_t capped_power(std::size_t base, std::size_t exp, std::size_t cap, const char* what) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) throw CapExceeded(what);
    r *= base;
  }
  if (r > cap) throw CapExceeded(what);
  return r;
}

/// Calls f(assignment) for every map {0..len-1} -> {0..radix-1} in
/// lexicographic order (last position fastest). f returns false to stop.
template <typename F>
void for_each_assignment(std::size_t len, std::size_t radix, F&& f) {
  if (radix == 0 && len > 0) return;
  std::vector<std::size_t> cur(len, 0);
  while (true) {
    if (!f(static_cast<const std::vector<std::size_t>&>(cur))) return;
    std::size_t pos = len;
    while (pos > 0) {
      --pos;
      if (++cur[pos] < radix) break;
      cur[pos] = 0;
      if (pos == 0) return;
    }
    if (len == 0) return;
  }
}

struct Scenario {
  std::size_t nS = 1, nT = 1, nA = 1, nB = 1;

  std::size_t alice_size() const { return nS * nA; }
  std::size_t bob_size() const { return nT * nB; }
  /// N = |S||A| + |T||B|
  std::size_t block_dim() const { return alice_size() + bob_size(); }
  std::size_t num_questions() const { return nS + nT; }
  friend bool operator==(const Scenario&, const Scenario&) = default;

  void validate() const {
    if (nS == 0 || nT == 0 || nA == 0 || nB == 0) throw PreconditionError("scenario sizes must be at least 1");
  }
};

enum class Side { Zero, S, T };

/// A question of S u T, or the extra "0" index of lifted matrices.
struct QuestionRef {
  Side side = Side::S;
  std::size_t index = 0;

  static QuestionRef zero() { return {Side::Zero, 0}; }
  static QuestionRef alice(std::size_t s) { return {Side::S, s}; }
  static QuestionRef bob(std::size_t t) { return {Side::T, t}; }
};

/// Row index of a block-indexed matrix.
struct BlockIndex {
  Side side = Side::S;
  std::size_t question = 0;
  std::size_t answer = 0;
};

/// Maps block indices to flat rows for game-level (N) or lifted (1+N) matrices.
class BlockLayout {
 public:
  BlockLayout(Scenario sc, bool lifted) : sc_(sc), lifted_(lifted) { sc_.validate(); }

  const Scenario& scenario() const { return sc_; }
  bool lifted() const { return lifted_; }
  std::size_t dim() const { return sc_.block_dim() + (lifted_ ? 1 : 0); }
  std::size_t offset() const { return lifted_ ? 1 : 0; }

  std::size_t alice(std::size_t s, std::size_t a) const { return offset() + s * sc_.nA + a; }
  std::size_t bob(std::size_t t, std::size_t b) const { return offset() + sc_.alice_size() + t * sc_.nB + b; }

  std::size_t index(const BlockIndex& bi) const {
    switch (bi.side) {
      case Side::Zero:
        if (!lifted_) throw std::out_of_range("index 0 only exists in lifted matrices");
        return 0;
      case Side::S:
        if (bi.question >= sc_.nS || bi.answer >= sc_.nA) throw std::out_of_range("alice block index out of range");
        return alice(bi.question, bi.answer);
      case Side::T:
        if (bi.question >= sc_.nT || bi.answer >= sc_.nB) throw std::out_of_range("bob block index out of range");
        return bob(bi.question, bi.answer);
    }
    throw std::out_of_range("bad side");
  }

  /// First row and row count of a question's segment.
  std::pair<std::size_t, std::size_t> segment(const QuestionRef& q) const {
    switch (q.side) {
      case Side::Zero:
        if (!lifted_) throw std::out_of_range("question 0 only exists in lifted matrices");
        return {0, 1};
      case Side::S:
        if (q.index >= sc_.nS) throw std::out_of_range("alice question out of range");
        return {alice(q.index, 0), sc_.nA};
      case Side::T:
        if (q.index >= sc_.nT) throw std::out_of_range("bob question out of range");
        return {bob(q.index, 0), sc_.nB};
    }
    throw std::out_of_range("bad side");
  }

  /// All questions in layout order: (0,) S..., T...
  std::vector<QuestionRef> questions() const {
    std::vector<QuestionRef> qs;
    if (lifted_) qs.push_back(QuestionRef::zero());
    for (std::size_t s = 0; s < sc_.nS; ++s) qs.push_back(QuestionRef::alice(s));
    for (std::size_t t = 0; t < sc_.nT; ++t) qs.push_back(QuestionRef::bob(t));
    return qs;
  }

  /// Symmetric matrix J with <J, X> = sum of block (i,j) of X.
  SymMatrix j_matrix(const QuestionRef& i, const QuestionRef& j) const {
    const auto [ri, ni] = segment(i);
    const auto [rj, nj] = segment(j);
    SymMatrix m(dim());
    const bool same = ri == rj;
    for (std::size_t k = 0; k < ni; ++k)
      for (std::size_t l = 0; l < nj; ++l) m.set(ri + k, rj + l, same ? 1.0 : 0.5);
    return m;
  }

 private:
  Scenario sc_;
  bool lifted_;
};

/// Tensor p(a,b|s,t) stored as p[s][t][a][b].
class Correlation {
 public:
  Correlation() = default;
  explicit Correlation(Scenario sc) : sc_(sc), p_(sc.nS * sc.nT * sc.nA * sc.nB, 0.0) { sc_.validate(); }
  Correlation(Scenario sc, std::vector<double> values) : sc_(sc), p_(std::move(values)) {
    sc_.validate();
    if (p_.size() != sc.nS * sc.nT * sc.nA * sc.nB) throw std::invalid_argument("correlation has wrong number of entries");
  }

  const Scenario& scenario() const { return sc_; }
  double operator()(std::size_t s, std::size_t t, std::size_t a, std::size_t b) const { return p_[flat(s, t, a, b)]; }
  double& at(std::size_t s, std::size_t t, std::size_t a, std::size_t b) { return p_[flat(s, t, a, b)]; }
  const std::vector<double>& values() const { return p_; }

 private:
  std::size_t flat(std::size_t s, std::size_t t, std::size_t a, std::size_t b) const {
    return ((s * sc_.nT + t) * sc_.nA + a) * sc_.nB + b;
  }
  Scenario sc_;
  std::vector<double> p_;
};

/// Two-player one-round game: question distribution pi and 0/1 predicate V.
class Game {
 public:
  Game(Scenario sc, std::vector<double> pi, std::vector<std::uint8_t> v) : sc_(sc), pi_(std::move(pi)), v_(std::move(v)) {
    sc_.validate();
    if (pi_.size() != sc.nS * sc.nT) throw PreconditionError("pi must have nS*nT entries");
    if (v_.size() != sc.nS * sc.nT * sc.nA * sc.nB) throw PreconditionError("V must have nS*nT*nA*nB entries");
    double total = 0.0;
    for (double x : pi_) {
      if (!(x >= 0.0)) throw PreconditionError("pi entries must be nonnegative");
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-12) throw PreconditionError("pi must sum to 1");
    for (auto x : v_)
      if (x > 1) throw PreconditionError("V entries must be 0 or 1");
  }

  const Scenario& scenario() const { return sc_; }
  double pi(std::size_t s, std::size_t t) const { return pi_[s * sc_.nT + t]; }
  bool wins(std::size_t s, std::size_t t, std::size_t a, std::size_t b) const {
    return v_[((s * sc_.nT + t) * sc_.nA + a) * sc_.nB + b] != 0;
  }
  const std::vector<double>& pi_values() const { return pi_; }
  const std::vector<std::uint8_t>& predicate_values() const { return v_; }

 private:
  Scenario sc_;
  std::vector<double> pi_;
  std::vector<std::uint8_t> v_;
};

/// Builds a game from a predicate callable V(s,t,a,b) and a pi table.
template <typename Pred>
Game make_game(Scenario sc, std::vector<double> pi, Pred&& pred) {
  std::vector<std::uint8_t> v(sc.nS * sc.nT * sc.nA * sc.nB);
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t t = 0; t < sc.nT; ++t)
      for (std::size_t a = 0; a < sc.nA; ++a)
        for (std::size_t b = 0; b < sc.nB; ++b)
          v[((s * sc.nT + t) * sc.nA + a) * sc.nB + b] = pred(s, t, a, b) ? 1 : 0;
  return Game(sc, std::move(pi), std::move(v));
}

inline std::vector<double> uniform_pi(const Scenario& sc) {
  return std::vector<double>(sc.nS * sc.nT, 1.0 / static_cast<double>(sc.nS * sc.nT));
}

/// CHSH: win iff a xor b == s*t, uniform questions.
inline Game chsh_game() {
  const Scenario sc{2, 2, 2, 2};
  return make_game(sc, uniform_pi(sc), [](auto s, auto t, auto a, auto b) { return (a ^ b) == (s & t); });
}

/// Row-major (nS*nA) x (nT*nB) matrix with C[(s,a),(t,b)] = pi(s,t) V(a,b|s,t).
struct CostMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

inline CostMatrix cost_matrix(const Game& g) {
  const Scenario& sc = g.scenario();
  CostMatrix c{sc.alice_size(), sc.bob_size(), std::vector<double>(sc.alice_size() * sc.bob_size(), 0.0)};
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t t = 0; t < sc.nT; ++t)
      for (std::size_t a = 0; a < sc.nA; ++a)
        for (std::size_t b = 0; b < sc.nB; ++b)
          if (g.wins(s, t, a, b)) c.data[(s * sc.nA + a) * c.cols + t * sc.nB + b] = g.pi(s, t);
  return c;
}

/// C-hat = (1/2)[[0, C], [C^T, 0]] in the game-level block order.
inline SymMatrix symmetric_cost(const Game& g) {
  const Scenario& sc = g.scenario();
  const BlockLayout layout(sc, false);
  const CostMatrix c = cost_matrix(g);
  SymMatrix out(layout.dim());
  for (std::size_t r = 0; r < c.rows; ++r)
    for (std::size_t k = 0; k < c.cols; ++k) out.set(r, sc.alice_size() + k, 0.5 * c(r, k));
  return out;
}

/// Sum of block (i,j) of X; X may be game-level (N) or lifted (1+N).
inline double j_apply(const SymMatrix& x, const Scenario& sc, const QuestionRef& i, const QuestionRef& j) {
  bool lifted;
  if (x.size() == sc.block_dim()) lifted = false;
  else if (x.size() == sc.block_dim() + 1) lifted = true;
  else throw std::out_of_range("j_apply: matrix dimension does not match the scenario");
  const BlockLayout layout(sc, lifted);
  const auto [ri, ni] = layout.segment(i);
  const auto [rj, nj] = layout.segment(j);
  double sum = 0.0;
  for (std::size_t k = 0; k < ni; ++k)
    for (std::size_t l = 0; l < nj; ++l) sum += x(ri + k, rj + l);
  return sum;
}

/// p(a,b|s,t) = [a == alpha(s)] [b == beta(t)].
inline Correlation deterministic_correlation(const Scenario& sc, const std::vector<std::size_t>& alpha,
                                             const std::vector<std::size_t>& beta) {
  if (alpha.size() != sc.nS || beta.size() != sc.nT) throw PreconditionError("strategy maps must be total");
  Correlation p(sc);
  for (std::size_t s = 0; s < sc.nS; ++s) {
    if (alpha[s] >= sc.nA) throw PreconditionError("alpha maps outside A");
    for (std::size_t t = 0; t < sc.nT; ++t) {
      if (beta[t] >= sc.nB) throw PreconditionError("beta maps outside B");
      p.at(s, t, alpha[s], beta[t]) = 1.0;
    }
  }
  return p;
}

inline double win_probability(const Game& g, const Correlation& p) {
  const Scenario& sc = g.scenario();
  if (!(p.scenario() == sc)) throw PreconditionError("correlation scenario does not match game");
  double total = 0.0;
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t t = 0; t < sc.nT; ++t) {
      double inner_sum = 0.0;
      for (std::size_t a = 0; a < sc.nA; ++a)
        for (std::size_t b = 0; b < sc.nB; ++b)
          if (g.wins(s, t, a, b)) inner_sum += p(s, t, a, b);
      total += g.pi(s, t) * inner_sum;
    }
  return total;
}

/// Game-level matrix whose S x T block is p (other blocks zero).
inline SymMatrix embed_correlation(const Correlation& p, bool lifted = false) {
  const Scenario& sc = p.scenario();
  const BlockLayout layout(sc, lifted);
  SymMatrix x(layout.dim());
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t t = 0; t < sc.nT; ++t)
      for (std::size_t a = 0; a < sc.nA; ++a)
        for (std::size_t b = 0; b < sc.nB; ++b) x.set(layout.alice(s, a), layout.bob(t, b), p(s, t, a, b));
  return x;
}

/// Reads the S x T block of a game-level or lifted matrix as a correlation.
inline Correlation extract_correlation(const SymMatrix& x, const Scenario& sc) {
  const bool lifted = x.size() == sc.block_dim() + 1;
  if (!lifted && x.size() != sc.block_dim()) throw std::invalid_argument("extract_correlation: dimension mismatch");
  const BlockLayout layout(sc, lifted);
  Correlation p(sc);
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t t = 0; t < sc.nT; ++t)
      for (std::size_t a = 0; a < sc.nA; ++a)
        for (std::size_t b = 0; b < sc.nB; ++b) p.at(s, t, a, b) = x(layout.alice(s, a), layout.bob(t, b));
  return p;
}

/// Normalized quantum strategy: psd K with <K,K> = 1, and psd families
/// {X^s_a}, {Y^t_b} with sum_a X^s_a = sum_b Y^t_b = K. Operators are
/// stored s-major (index s*nA + a) and t-major (index t*nB + b).
struct QuantumStrategy {
  Scenario scenario;
  HermMatrix k;
  std::vector<HermMatrix> alice;
  std::vector<HermMatrix> bob;

  const HermMatrix& x(std::size_t s, std::size_t a) const { return alice[s * scenario.nA + a]; }
  const HermMatrix& y(std::size_t t, std::size_t b) const { return bob[t * scenario.nB + b]; }
};

namespace detail {

inline double herm_max_abs_diff(const HermMatrix& a, const HermMatrix& b) {
  double m = (a.re() - b.re()).max_abs();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a.im(i, j) - b.im(i, j)));
  return m;
}

inline double herm_min_eig(const HermMatrix& h) { return min_eigenvalue(realify(h)); }

}  // namespace detail

/// Throws PreconditionError naming the first violated normalization.
inline void validate_strategy(const QuantumStrategy& q, double tol = 1e-9) {
  const Scenario& sc = q.scenario;
  sc.validate();
  if (q.alice.size() != sc.nS * sc.nA || q.bob.size() != sc.nT * sc.nB)
    throw PreconditionError("strategy operator families have the wrong size");
  const std::size_t d = q.k.size();
  if (d == 0) throw PreconditionError("strategy dimension must be positive");
  for (const auto& op : q.alice)
    if (op.size() != d) throw PreconditionError("alice operator has wrong dimension");
  for (const auto& op : q.bob)
    if (op.size() != d) throw PreconditionError("bob operator has wrong dimension");

  const double kk = inner(q.k, q.k);
  if (std::abs(kk - 1.0) > tol) {
    std::ostringstream os;
    os << "<K,K> = " << kk << " != 1";
    throw PreconditionError(os.str());
  }
  if (detail::herm_min_eig(q.k) < -tol) throw PreconditionError("K is not psd");
  for (std::size_t s = 0; s < sc.nS; ++s) {
    HermMatrix sum = 0.0 * q.k;
    for (std::size_t a = 0; a < sc.nA; ++a) {
      if (detail::herm_min_eig(q.x(s, a)) < -tol) throw PreconditionError("X^s_a is not psd");
      sum = sum + q.x(s, a);
    }
    if (detail::herm_max_abs_diff(sum, q.k) > tol) {
      std::ostringstream os;
      os << "sum_a X^" << s << "_a != K";
      throw PreconditionError(os.str());
    }
  }
  for (std::size_t t = 0; t < sc.nT; ++t) {
    HermMatrix sum = 0.0 * q.k;
    for (std::size_t b = 0; b < sc.nB; ++b) {
      if (detail::herm_min_eig(q.y(t, b)) < -tol) throw PreconditionError("Y^t_b is not psd");
      sum = sum + q.y(t, b);
    }
    if (detail::herm_max_abs_diff(sum, q.k) > tol) {
      std::ostringstream os;
      os << "sum_b Y^" << t << "_b != K";
      throw PreconditionError(os.str());
    }
  }
}

/// p(a,b|s,t) = <X^s_a, Y^t_b>.
inline Correlation evaluate_quantum_strategy(const QuantumStrategy& q) {
  validate_strategy(q);
  const Scenario& sc = q.scenario;
  Correlation p(sc);
  for (std::size_t s = 0; s < sc.nS; ++s)
    for (std::size_t t = 0; t < sc.nT; ++t)
      for (std::size_t a = 0; a < sc.nA; ++a)
        for (std::size_t b = 0; b < sc.nB; ++b) p.at(s, t, a, b) = inner(q.x(s, a), q.y(t, b));
  return p;
}

/// Rank-one projector onto (cos th, sin th).
inline SymMatrix angle_projector(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return SymMatrix{{c * c, c * s}, {c * s, s * s}};
}

/// CHSH-optimal strategy: K = I/sqrt2, Alice measures at angles 0 and pi/4,
/// Bob at pi/8 and -pi/8; every projector is conjugated by K^{1/2}.
inline QuantumStrategy chsh_quantum_strategy() {
  const double r = 1.0 / std::sqrt(2.0);
  QuantumStrategy q;
  q.scenario = {2, 2, 2, 2};
  q.k = HermMatrix(SymMatrix::identity(2) * r);
  auto measurement = [&](double theta, std::vector<HermMatrix>& out) {
    const SymMatrix p0 = angle_projector(theta);
    const SymMatrix p1 = SymMatrix::identity(2) - p0;
    // K^{1/2} P K^{1/2} = P / sqrt2 for K = I/sqrt2.
    out.emplace_back(p0 * r);
    out.emplace_back(p1 * r);
  };
  const double pi = std::numbers::pi;
  measurement(0.0, q.alice);
  measurement(pi / 4.0, q.alice);
  measurement(pi / 8.0, q.bob);
  measurement(-pi / 8.0, q.bob);
  return q;
}

/// PR box: p(a,b|s,t) = 1/2 iff a xor b == s*t.
inline Correlation pr_box() {
  const Scenario sc{2, 2, 2, 2};
  Correlation p(sc);
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t t = 0; t < 2; ++t)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) p.at(s, t, a, b) = ((a ^ b) == (s & t)) ? 0.5 : 0.0;
  return p;
}

}  // namespace nlg
