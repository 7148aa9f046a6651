#pragma once

// First-order solver for
//
//   maximize <C, X>  subject to  <A_i, X> = b_i,  X in K,
//
// with K one of NONNEG, PSD or DNN (= PSD intersect NONNEG). The solver is
// a consensus ADMM over one affine block (carrying the objective) and one
// block per cone factor. Feasibility questions go through Dykstra's
// alternating projections, and DNN dual certificates are checked exactly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlgames/numkernel.hpp"

namespace nlg {

enum class ConeKind { Nonneg, Psd, Dnn };

inline const char* to_string(ConeKind k) {
  switch (k) {
    case ConeKind::Nonneg: return "NONNEG";
    case ConeKind::Psd: return "PSD";
    case ConeKind::Dnn: return "DNN";
  }
  return "?";
}

struct ConeSpec {
  ConeKind kind = ConeKind::Psd;
};

struct LinearConstraint {
  SymMatrix a;
  double b = 0.0;
};

struct ConicProgram {
  std::size_t dim = 0;
  SymMatrix objective;
  std::vector<LinearConstraint> constraints;
  ConeSpec cone;
  // DNN only: when set, entrywise nonnegativity is imposed only where the
  // mask is nonzero (psd everywhere). Empty means the full DNN cone.
  std::optional<SymMatrix> nonneg_mask;
};

enum class SolveStatus { Optimal, Infeasible, MaxIter };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "OPTIMAL";
    case SolveStatus::Infeasible: return "INFEASIBLE";
    case SolveStatus::MaxIter: return "MAX_ITER";
  }
  return "?";
}

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::MaxIter;
  double value = 0.0;       // <C, X>
  double dual_value = 0.0;  // sum_i y_i b_i
  SymMatrix x;
  std::vector<double> dual;  // y, one per constraint
  Residuals residuals;
  int iterations = 0;
  // Cone parts of the dual slack sum_i y_i A_i - C (empty for single cones).
  SymMatrix dual_psd;
  SymMatrix dual_nonneg;
};

struct SolverOptions {
  double tol = 1e-7;
  double tol_gap = 1e-6;
  int max_iter = 200000;
  double rho = 1.0;
  double relaxation = 1.6;
  int check_every = 20;
};

struct FeasibilityOptions {
  int max_iter = 100000;
  double target = 1e-10;     // stop once the distance is below this
  int stall_window = 2000;   // iterations between stall checks
  double stall_ratio = 1e-5; // relative improvement counted as progress
};

struct FeasibilityResult {
  double distance = 0.0;
  SymMatrix x;
  int iterations = 0;
  // Hit max_iter while the distance was still falling.
  bool exhausted = false;
};

/// v, P, N with sum_i v_i A_i - C == P + N, P psd, N entrywise nonnegative.
struct DualCertificateDNN {
  std::vector<double> v;
  SymMatrix psd_part;
  SymMatrix nonneg_part;
};

struct CertificateCheck {
  bool ok = false;
  double bound = 0.0;
  double residual = 0.0;          // max |sum v A - C - P - N|
  double psd_violation = 0.0;     // max(0, -lambda_min(P))
  double nonneg_violation = 0.0;  // max(0, -min N), plus |N| off the mask
};

namespace detail {

using SparseRow = std::vector<std::pair<std::size_t, double>>;

inline SparseRow to_sparse(std::span<const double> dense) {
  SparseRow row;
  for (std::size_t k = 0; k < dense.size(); ++k)
    if (dense[k] != 0.0) row.emplace_back(k, dense[k]);
  return row;
}

inline double dot(const SparseRow& r, std::span<const double> x) {
  double s = 0.0;
  for (const auto& [k, v] : r) s += v * x[k];
  return s;
}

inline double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Orthogonal projector onto {x : A x = b} in a flat space; rows are sparse.
// The pseudo-inverse of A A^T is formed once, so inconsistent systems
// project onto the least-squares affine set.
class AffineProjector {
 public:
  AffineProjector(std::vector<SparseRow> rows, std::vector<double> rhs, std::size_t space_dim)
      : rows_(std::move(rows)), rhs_(std::move(rhs)), dim_(space_dim) {
    const std::size_t m = rows_.size();
    ginv_.assign(m * m, 0.0);
    if (m == 0) return;
    std::vector<double> g(m * m, 0.0);
    std::vector<double> scatter(dim_, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& [k, v] : rows_[i]) scatter[k] = v;
      for (std::size_t j = 0; j <= i; ++j) {
        const double d = dot(rows_[j], scatter);
        g[i * m + j] = d;
        g[j * m + i] = d;
      }
      for (const auto& [k, v] : rows_[i]) scatter[k] = 0.0;
    }
    std::vector<double> vecs;
    std::vector<double> vals = jacobi_inplace(g, vecs, m);
    double top = 0.0;
    for (double l : vals) top = std::max(top, std::abs(l));
    const double cut = 1e-10 * std::max(top, 1e-300);
    for (std::size_t k = 0; k < m; ++k) {
      if (std::abs(vals[k]) <= cut) continue;
      const double w = 1.0 / vals[k];
      for (std::size_t i = 0; i < m; ++i) {
        const double vi = w * vecs[i * m + k];
        for (std::size_t j = 0; j < m; ++j) ginv_[i * m + j] += vi * vecs[j * m + k];
      }
    }
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<SparseRow>& row_data() const { return rows_; }
  const std::vector<double>& rhs() const { return rhs_; }

  /// In-place projection; returns the multiplier w with x_out = x_in - A^T w.
  std::vector<double> project(std::span<double> x) const {
    const std::size_t m = rows_.size();
    std::vector<double> r(m);
    for (std::size_t i = 0; i < m; ++i) r[i] = dot(rows_[i], x) - rhs_[i];
    std::vector<double> w(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += ginv_[i * m + j] * r[j];
      w[i] = s;
    }
    for (std::size_t i = 0; i < m; ++i)
      for (const auto& [k, v] : rows_[i]) x[k] -= v * w[i];
    return w;
  }

  double residual(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const double r = dot(rows_[i], x) - rhs_[i];
      s += r * r;
    }
    return std::sqrt(s);
  }

  /// A^T y as a dense flat vector.
  std::vector<double> adjoint(std::span<const double> y) const {
    std::vector<double> out(dim_, 0.0);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (const auto& [k, v] : rows_[i]) out[k] += v * y[i];
    return out;
  }

  /// Least-squares solution of A^T y = target.
  std::vector<double> solve_adjoint(std::span<const double> target) const {
    const std::size_t m = rows_.size();
    std::vector<double> at(m);
    for (std::size_t i = 0; i < m; ++i) at[i] = dot(rows_[i], target);
    std::vector<double> y(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) y[i] += ginv_[i * m + j] * at[j];
    return y;
  }

 private:
  std::vector<SparseRow> rows_;
  std::vector<double> rhs_;
  std::size_t dim_;
  std::vector<double> ginv_;
};

// Psd projection of a flat n x n buffer in place; returns lambda_min of the input.
inline double project_psd_flat(std::span<double> x, std::size_t n) {
  std::vector<double> a(x.begin(), x.end());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a[i * n + j] + a[j * n + i]);
      a[i * n + j] = v;
      a[j * n + i] = v;
    }
  std::vector<double> vecs;
  const std::vector<double> vals = jacobi_inplace(a, vecs, n);
  double lmin = vals.empty() ? 0.0 : vals[0];
  for (double l : vals) lmin = std::min(lmin, l);
  std::fill(x.begin(), x.end(), 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (vals[k] <= 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = vals[k] * vecs[i * n + k];
      if (vi == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) x[i * n + j] += vi * vecs[j * n + k];
    }
  }
  return lmin;
}

inline double min_eig_flat(std::span<const double> x, std::size_t n) {
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> vecs;
  const std::vector<double> vals = jacobi_inplace(a, vecs, n);
  return *std::min_element(vals.begin(), vals.end());
}

// Entrywise clamp on the masked coordinates (all when mask is empty).
inline void project_nonneg_flat(std::span<double> x, const std::vector<char>& mask) {
  for (std::size_t k = 0; k < x.size(); ++k)
    if ((mask.empty() || mask[k]) && x[k] < 0.0) x[k] = 0.0;
}

inline double nonneg_violation_flat(std::span<const double> x, const std::vector<char>& mask) {
  double v = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (mask.empty() || mask[k]) v = std::max(v, -x[k]);
  return v;
}

enum class Block { Psd, Nonneg };

// Flattened view of a ConicProgram shared by the solver and Dykstra.
struct FlatProgram {
  std::size_t n = 0;
  std::vector<double> c;
  AffineProjector affine;
  std::vector<Block> blocks;
  std::vector<char> mask;  // nonneg mask, empty = all entries
};

inline void validate(const ConicProgram& prog) {
  if (prog.dim == 0) throw std::invalid_argument("conic program: dim must be positive");
  if (prog.objective.size() != prog.dim) throw std::invalid_argument("conic program: objective has wrong dimension");
  for (const auto& c : prog.constraints)
    if (c.a.size() != prog.dim) throw std::invalid_argument("conic program: constraint matrix has wrong dimension");
  if (prog.nonneg_mask && prog.nonneg_mask->size() != prog.dim)
    throw std::invalid_argument("conic program: nonnegativity mask has wrong dimension");
}

inline FlatProgram flatten(const ConicProgram& prog) {
  validate(prog);
  std::vector<SparseRow> rows;
  std::vector<double> rhs;
  rows.reserve(prog.constraints.size());
  for (const auto& c : prog.constraints) {
    rows.push_back(to_sparse(c.a.flat()));
    rhs.push_back(c.b);
  }
  const std::size_t n = prog.dim;
  FlatProgram fp{n, std::vector<double>(prog.objective.flat().begin(), prog.objective.flat().end()),
                 AffineProjector(std::move(rows), std::move(rhs), n * n), {}, {}};
  switch (prog.cone.kind) {
    case ConeKind::Nonneg: fp.blocks = {Block::Nonneg}; break;
    case ConeKind::Psd: fp.blocks = {Block::Psd}; break;
    case ConeKind::Dnn: fp.blocks = {Block::Psd, Block::Nonneg}; break;
  }
  if (prog.cone.kind == ConeKind::Dnn && prog.nonneg_mask) {
    fp.mask.resize(n * n);
    const auto m = prog.nonneg_mask->flat();
    for (std::size_t k = 0; k < n * n; ++k) fp.mask[k] = m[k] != 0.0 ? 1 : 0;
  }
  return fp;
}

inline double cone_violation(const FlatProgram& fp, std::span<const double> x) {
  double v = 0.0;
  for (Block b : fp.blocks) {
    if (b == Block::Psd) v = std::max(v, -min_eig_flat(x, fp.n));
    else v = std::max(v, nonneg_violation_flat(x, fp.mask));
  }
  return v;
}

inline SymMatrix to_sym(std::span<const double> x, std::size_t n) { return SymMatrix(n, std::vector<double>(x.begin(), x.end())); }

}  // namespace detail

/// Maximizes <C,X> over the affine slice of the cone.
inline SolveResult solve(const ConicProgram& prog, const SolverOptions& opt = {}) {
  if (prog.constraints.empty()) throw std::invalid_argument("solve: constraints must be nonempty");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
  const detail::FlatProgram fp = detail::flatten(prog);
  const std::size_t n = fp.n;
  const std::size_t dim = n * n;
  const std::size_t nb = fp.blocks.size() + 1;  // block 0 is affine + objective
  const double rho = opt.rho;
  const double alpha = opt.relaxation;

  std::vector<double> z(dim, 0.0);
  std::vector<std::vector<double>> u(nb, std::vector<double>(dim, 0.0));
  std::vector<std::vector<double>> xs(nb, std::vector<double>(dim, 0.0));
  std::vector<double> w;
  const double bnorm = detail::norm2(fp.affine.rhs());

  SolveResult res;
  res.status = SolveStatus::MaxIter;
  auto evaluate = [&](int iter) -> bool {
    const auto& x = xs[0];
    std::vector<double> y(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) y[i] = rho * w[i];
    double value = 0.0;
    for (std::size_t k = 0; k < dim; ++k) value += fp.c[k] * x[k];
    double dual_value = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) dual_value += y[i] * fp.affine.rhs()[i];

    const double primal = std::max(fp.affine.residual(x) / (1.0 + bnorm), detail::cone_violation(fp, x));

    // Dual slack S = A^T y - C and its distance from the dual cone.
    std::vector<double> slack = fp.affine.adjoint(y);
    for (std::size_t k = 0; k < dim; ++k) slack[k] -= fp.c[k];
    double dual = 0.0;
    SymMatrix dpsd;
    SymMatrix dnn;
    if (fp.blocks.size() == 1) {
      if (fp.blocks[0] == detail::Block::Psd) dual = std::max(0.0, -detail::min_eig_flat(slack, n));
      else dual = detail::nonneg_violation_flat(slack, {});
    } else {
      std::vector<double> p(u[1]);
      std::vector<double> q(u[2]);
      for (double& t : p) t *= rho;
      for (double& t : q) t *= rho;
      detail::project_psd_flat(p, n);
      for (std::size_t k = 0; k < dim; ++k) {
        if (!fp.mask.empty() && !fp.mask[k]) q[k] = 0.0;
        else q[k] = std::max(q[k], 0.0);
      }
      for (std::size_t k = 0; k < dim; ++k) dual = std::max(dual, std::abs(slack[k] - p[k] - q[k]));
      dpsd = detail::to_sym(p, n);
      dnn = detail::to_sym(q, n);
    }
    const double gap = value - dual_value;

    res.value = value;
    res.dual_value = dual_value;
    res.dual = std::move(y);
    res.residuals = {primal, dual, gap};
    res.iterations = iter;
    res.dual_psd = std::move(dpsd);
    res.dual_nonneg = std::move(dnn);
    return primal <= opt.tol && dual <= opt.tol && std::abs(gap) <= opt.tol_gap;
  };

  std::vector<double> v(dim);
  int iter = 0;
  for (iter = 1; iter <= opt.max_iter; ++iter) {
    // Affine block: argmin -<C,X> + rho/2 |X - (Z - U0)|^2 over the affine set.
    for (std::size_t k = 0; k < dim; ++k) xs[0][k] = z[k] - u[0][k] + fp.c[k] / rho;
    w = fp.affine.project(xs[0]);
    for (std::size_t b = 1; b < nb; ++b) {
      auto& xb = xs[b];
      for (std::size_t k = 0; k < dim; ++k) xb[k] = z[k] - u[b][k];
      if (fp.blocks[b - 1] == detail::Block::Psd) detail::project_psd_flat(xb, n);
      else detail::project_nonneg_flat(xb, fp.mask);
    }
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t k = 0; k < dim; ++k) {
        xs[b][k] = alpha * xs[b][k] + (1.0 - alpha) * z[k];
        v[k] += xs[b][k] + u[b][k];
      }
    }
    for (std::size_t k = 0; k < dim; ++k) z[k] = v[k] / static_cast<double>(nb);
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t k = 0; k < dim; ++k) u[b][k] += xs[b][k] - z[k];

    if (iter % opt.check_every == 0) {
      // Re-run the affine prox without relaxation to get an affine-exact iterate.
      for (std::size_t k = 0; k < dim; ++k) xs[0][k] = z[k] - u[0][k] + fp.c[k] / rho;
      w = fp.affine.project(xs[0]);
      if (evaluate(iter)) {
        res.status = SolveStatus::Optimal;
        break;
      }
    }
  }
  if (res.status != SolveStatus::Optimal) {
    for (std::size_t k = 0; k < dim; ++k) xs[0][k] = z[k] - u[0][k] + fp.c[k] / rho;
    w = fp.affine.project(xs[0]);
    evaluate(std::min(iter, opt.max_iter));
  }
  res.x = detail::to_sym(xs[0], n);
  return res;
}

inline SolveResult solve(const ConicProgram& prog, double tol, int max_iter) {
  SolverOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  return solve(prog, opt);
}

namespace detail {

struct DykstraSet {
  enum Kind { Affine, Psd, Nonneg } kind;
};

// Cyclic Dykstra over affine + cone blocks of a flat program. The returned
// point lies in the last cone block; distance = max(affine residual, cone violation).
inline FeasibilityResult dykstra(const FlatProgram& fp, std::vector<double> x, const FeasibilityOptions& opt) {
  const std::size_t dim = fp.affine.dim();
  const std::size_t nsets = fp.blocks.size() + 1;
  std::vector<std::vector<double>> incr(nsets, std::vector<double>(dim, 0.0));
  std::vector<double> y(dim);

  auto measure = [&](std::span<const double> pt) {
    return std::max(fp.affine.residual(pt), cone_violation(fp, pt));
  };

  FeasibilityResult out;
  double best = measure(x);
  double window_start = best;
  int iter = 0;
  if (best > opt.target) {
    for (iter = 1; iter <= opt.max_iter; ++iter) {
      for (std::size_t s = 0; s < nsets; ++s) {
        for (std::size_t k = 0; k < dim; ++k) y[k] = x[k] + incr[s][k];
        x = y;
        if (s == 0) fp.affine.project(x);
        else if (fp.blocks[s - 1] == Block::Psd) project_psd_flat(x, fp.n);
        else project_nonneg_flat(x, fp.mask);
        for (std::size_t k = 0; k < dim; ++k) incr[s][k] = y[k] - x[k];
      }
      if (iter % 20 == 0) {
        best = measure(x);
        if (best <= opt.target) break;
      }
      if (iter % opt.stall_window == 0) {
        if (best > window_start * (1.0 - opt.stall_ratio)) break;
        window_start = best;
      }
    }
    out.exhausted = iter > opt.max_iter;
    best = measure(x);
  }
  out.distance = best;
  out.iterations = std::min(iter, opt.max_iter);
  out.x = to_sym(x, fp.n);
  return out;
}

}  // namespace detail

/// Dykstra alternating projections between the affine set and the cone.
/// The objective is ignored. `start` warm-starts the iteration.
inline FeasibilityResult feasibility_distance(const ConicProgram& prog, const FeasibilityOptions& opt = {},
                                              const std::optional<SymMatrix>& start = std::nullopt) {
  const detail::FlatProgram fp = detail::flatten(prog);
  std::vector<double> x(fp.n * fp.n, 0.0);
  if (start) {
    if (start->size() != fp.n) throw std::invalid_argument("feasibility_distance: start has wrong dimension");
    x.assign(start->flat().begin(), start->flat().end());
  }
  return detail::dykstra(fp, std::move(x), opt);
}

struct VectorFeasibilityResult {
  double distance = 0.0;
  std::vector<double> x;
  int iterations = 0;
  bool exhausted = false;
};

/// Distance to {x >= 0 : A x = b} for a dense row-major A (m x k), via the
/// same Dykstra iteration on the nonnegative orthant.
inline VectorFeasibilityResult feasibility_distance_orthant(std::span<const double> a, std::size_t m, std::size_t k,
                                                            std::span<const double> b,
                                                            const FeasibilityOptions& opt = {}) {
  if (a.size() != m * k || b.size() != m) throw std::invalid_argument("feasibility_distance_orthant: dimension mismatch");
  std::vector<detail::SparseRow> rows;
  rows.reserve(m);
  for (std::size_t i = 0; i < m; ++i) rows.push_back(detail::to_sparse(a.subspan(i * k, k)));
  detail::FlatProgram fp{0, std::vector<double>(k, 0.0),
                         detail::AffineProjector(std::move(rows), std::vector<double>(b.begin(), b.end()), k),
                         {detail::Block::Nonneg}, {}};
  // The orthant never needs an eigen check; n = 0 keeps cone_violation on the nonneg path.
  std::vector<double> x(k, 0.0);
  const std::size_t nsets = 2;
  std::vector<std::vector<double>> incr(nsets, std::vector<double>(k, 0.0));
  std::vector<double> y(k);
  auto measure = [&](std::span<const double> pt) {
    return std::max(fp.affine.residual(pt), detail::nonneg_violation_flat(pt, {}));
  };
  double best = measure(x);
  double window_start = best;
  int iter = 0;
  if (best > opt.target) {
    for (iter = 1; iter <= opt.max_iter; ++iter) {
      for (std::size_t s = 0; s < nsets; ++s) {
        for (std::size_t t = 0; t < k; ++t) y[t] = x[t] + incr[s][t];
        x = y;
        if (s == 0) fp.affine.project(x);
        else detail::project_nonneg_flat(x, {});
        for (std::size_t t = 0; t < k; ++t) incr[s][t] = y[t] - x[t];
      }
      if (iter % 20 == 0) {
        best = measure(x);
        if (best <= opt.target) break;
      }
      if (iter % opt.stall_window == 0) {
        if (best > window_start * (1.0 - opt.stall_ratio)) break;
        window_start = best;
      }
    }
    best = measure(x);
  }
  return {best, std::move(x), std::min(iter, opt.max_iter), iter > opt.max_iter};
}

enum class Verdict { In, Out, Undecided };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::In: return "IN";
    case Verdict::Out: return "OUT";
    case Verdict::Undecided: return "UNDECIDED";
  }
  return "?";
}

/// Feasibility wording of the same verdict.
inline const char* feasibility_label(Verdict v) {
  switch (v) {
    case Verdict::In: return "FEASIBLE";
    case Verdict::Out: return "INFEASIBLE";
    case Verdict::Undecided: return "UNDECIDED";
  }
  return "?";
}

inline constexpr double kDefaultEpsFeas = 1e-6;

/// Guard band: distance <= eps is IN, > 10 eps is OUT, otherwise UNDECIDED.
inline Verdict classify_distance(double distance, double eps_feas) {
  if (distance <= eps_feas) return Verdict::In;
  if (distance > 10.0 * eps_feas) return Verdict::Out;
  return Verdict::Undecided;
}

struct MembershipVerdict {
  Verdict status = Verdict::Undecided;
  double distance = 0.0;
  std::optional<SymMatrix> witness;
};

/// A large distance only counts as OUT once the iteration has stalled;
/// running out of iterations while still converging gives UNDECIDED.
inline Verdict classify_distance(double distance, double eps_feas, bool exhausted) {
  const Verdict v = classify_distance(distance, eps_feas);
  return v == Verdict::Out && exhausted ? Verdict::Undecided : v;
}

inline MembershipVerdict verdict_from(const FeasibilityResult& fr, double eps_feas) {
  return {classify_distance(fr.distance, eps_feas, fr.exhausted), fr.distance, fr.x};
}

/// Checks sum_i v_i A_i - C == P + N with P psd and N >= 0 (N supported on
/// the program's nonnegativity mask, if any). bound = sum_i v_i b_i.
inline CertificateCheck verify_certificate(const DualCertificateDNN& cert, const ConicProgram& prog, double tol) {
  detail::validate(prog);
  if (prog.cone.kind != ConeKind::Dnn) throw std::invalid_argument("verify_certificate: program cone must be DNN");
  if (cert.v.size() != prog.constraints.size()) throw std::invalid_argument("verify_certificate: multiplier count mismatch");
  if (cert.psd_part.size() != prog.dim || cert.nonneg_part.size() != prog.dim)
    throw std::invalid_argument("verify_certificate: certificate matrices have wrong dimension");

  CertificateCheck chk;
  SymMatrix slack = SymMatrix(prog.dim) - prog.objective;
  for (std::size_t i = 0; i < cert.v.size(); ++i) {
    slack += prog.constraints[i].a * cert.v[i];
    chk.bound += cert.v[i] * prog.constraints[i].b;
  }
  chk.residual = (slack - cert.psd_part - cert.nonneg_part).max_abs();
  chk.psd_violation = std::max(0.0, -min_eigenvalue(cert.psd_part));
  const auto nn = cert.nonneg_part.flat();
  for (std::size_t k = 0; k < nn.size(); ++k) {
    const bool masked = !prog.nonneg_mask || prog.nonneg_mask->flat()[k] != 0.0;
    chk.nonneg_violation = std::max(chk.nonneg_violation, masked ? -nn[k] : std::abs(nn[k]));
  }
  chk.ok = chk.residual <= tol && chk.psd_violation <= tol && chk.nonneg_violation <= tol;
  return chk;
}

struct CertificateExtraction {
  DualCertificateDNN cert;
  double shift = 0.0;  // amount of all-ones slack added to absorb negative entries
};

/// Builds a DNN dual certificate from multipliers v: splits
/// S = sum v_i A_i - C into P psd and N = S - P by Dykstra between the psd
/// cone and {P <= S}, then absorbs any leftover negativity of N by moving v
/// along the direction whose image is the all-ones matrix. Throws when the
/// needed shift exceeds max_shift.
inline CertificateExtraction extract_dnn_certificate(const ConicProgram& prog, std::vector<double> v,
                                                     const std::optional<SymMatrix>& psd_guess, double max_shift,
                                                     int max_iter = 5000) {
  detail::validate(prog);
  if (prog.cone.kind != ConeKind::Dnn || prog.nonneg_mask)
    throw std::invalid_argument("extract_dnn_certificate: needs the full DNN cone");
  if (v.size() != prog.constraints.size()) throw std::invalid_argument("extract_dnn_certificate: multiplier count mismatch");
  const std::size_t n = prog.dim;
  const std::size_t dim = n * n;

  auto slack_of = [&](const std::vector<double>& mult) {
    SymMatrix s = SymMatrix(n) - prog.objective;
    for (std::size_t i = 0; i < mult.size(); ++i) s += prog.constraints[i].a * mult[i];
    return s;
  };
  const SymMatrix slack = slack_of(v);
  const auto sf = slack.flat();

  std::vector<double> x(dim);
  if (psd_guess && psd_guess->size() == n) x.assign(psd_guess->flat().begin(), psd_guess->flat().end());
  else x.assign(sf.begin(), sf.end());
  std::vector<double> p1(dim, 0.0);
  std::vector<double> p2(dim, 0.0);
  std::vector<double> y(dim);
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t k = 0; k < dim; ++k) y[k] = x[k] + p1[k];
    x = y;
    detail::project_psd_flat(x, n);
    for (std::size_t k = 0; k < dim; ++k) p1[k] = y[k] - x[k];
    for (std::size_t k = 0; k < dim; ++k) y[k] = x[k] + p2[k];
    for (std::size_t k = 0; k < dim; ++k) x[k] = std::min(y[k], sf[k]);
    for (std::size_t k = 0; k < dim; ++k) p2[k] = y[k] - x[k];
    if (it % 50 == 49) {
      std::vector<double> t(x);
      detail::project_psd_flat(t, n);
      double worst = 0.0;
      for (std::size_t k = 0; k < dim; ++k) worst = std::max(worst, t[k] - sf[k]);
      if (worst <= 1e-13) break;
    }
  }
  detail::project_psd_flat(x, n);
  SymMatrix psd = detail::to_sym(x, n);

  double shift = std::max(0.0, -(slack - psd).min_entry());
  if (shift > 0.0) {
    if (shift > max_shift) throw std::runtime_error("certificate extraction failed");
    std::vector<detail::SparseRow> rows;
    for (const auto& c : prog.constraints) rows.push_back(detail::to_sparse(c.a.flat()));
    detail::AffineProjector proj(std::move(rows), std::vector<double>(prog.constraints.size(), 0.0), dim);
    const std::vector<double> ones(dim, 1.0);
    const std::vector<double> dir = proj.solve_adjoint(ones);
    const std::vector<double> img = proj.adjoint(dir);
    double miss = 0.0;
    for (double t : img) miss = std::max(miss, std::abs(t - 1.0));
    if (miss > 1e-9) throw std::runtime_error("certificate extraction failed");
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += shift * dir[i];
  }
  const SymMatrix final_slack = slack_of(v);
  SymMatrix nonneg = final_slack - psd;
  // Clip roundoff-level negatives; the verifier tolerates them anyway.
  nonneg = project_nonneg(nonneg);
  return {{std::move(v), std::move(psd), std::move(nonneg)}, shift};
}

}  // namespace nlg
