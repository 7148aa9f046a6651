#pragma once

// Dense symmetric / Hermitian matrix primitives used by the conic solver:
// a cyclic Jacobi eigensolver, projections onto the psd and nonnegative
// cones, Gram matrices and the Hermitian-to-real doubling map.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nlg {

/// Real symmetric n x n matrix, row-major. Construction stores (M + M^T) / 2.
class SymMatrix {
 public:
  SymMatrix() = default;

  explicit SymMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  SymMatrix(std::size_t n, std::vector<double> entries) : n_(n), data_(std::move(entries)) {
    if (data_.size() != n * n) throw std::invalid_argument("SymMatrix: entry count does not match n*n");
    symmetrize();
  }

  SymMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    n_ = rows.size();
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw std::invalid_argument("SymMatrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
    symmetrize();
  }

  static SymMatrix identity(std::size_t n) {
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1.0;
    return m;
  }

  static SymMatrix constant(std::size_t n, double value) {
    SymMatrix m(n);
    std::fill(m.data_.begin(), m.data_.end(), value);
    return m;
  }

  static SymMatrix diagonal(std::span<const double> d) {
    SymMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.data_[i * d.size() + i] = d[i];
    return m;
  }

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  /// Sets both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }

  std::span<const double> flat() const { return data_; }

  SymMatrix& operator+=(const SymMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  SymMatrix& operator-=(const SymMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  SymMatrix& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  double min_entry() const {
    if (data_.empty()) return 0.0;
    return *std::min_element(data_.begin(), data_.end());
  }

  double frobenius_norm() const { return std::sqrt(std::inner_product(data_.begin(), data_.end(), data_.begin(), 0.0)); }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += data_[i * n_ + i];
    return t;
  }

 private:
  void symmetrize() {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double v = 0.5 * (data_[i * n_ + j] + data_[j * n_ + i]);
        data_[i * n_ + j] = v;
        data_[j * n_ + i] = v;
      }
    }
  }

  void check_same(const SymMatrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("SymMatrix: dimension mismatch");
  }

  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Frobenius (trace) inner product <A,B> = Tr(AB).
inline double inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: dimension mismatch");
  const auto x = a.flat();
  const auto y = b.flat();
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

/// Hermitian matrix stored as real part (symmetric) plus imaginary part
/// (skew-symmetric, row-major, zero diagonal).
class HermMatrix {
 public:
  HermMatrix() = default;

  explicit HermMatrix(SymMatrix re) : n_(re.size()), re_(std::move(re)), im_(n_ * n_, 0.0) {}

  HermMatrix(SymMatrix re, std::vector<double> im) : n_(re.size()), re_(std::move(re)), im_(std::move(im)) {
    if (im_.size() != n_ * n_) throw std::invalid_argument("HermMatrix: imaginary part has wrong size");
    for (std::size_t i = 0; i < n_; ++i) {
      im_[i * n_ + i] = 0.0;
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double v = 0.5 * (im_[i * n_ + j] - im_[j * n_ + i]);
        im_[i * n_ + j] = v;
        im_[j * n_ + i] = -v;
      }
    }
  }

  std::size_t size() const { return n_; }
  const SymMatrix& re() const { return re_; }
  double im(std::size_t i, std::size_t j) const { return im_[i * n_ + j]; }
  std::span<const double> im_flat() const { return im_; }

  friend HermMatrix operator+(const HermMatrix& a, const HermMatrix& b) {
    std::vector<double> im(a.im_);
    for (std::size_t k = 0; k < im.size(); ++k) im[k] += b.im_[k];
    return HermMatrix(a.re_ + b.re_, std::move(im));
  }

  friend HermMatrix operator*(double s, const HermMatrix& a) {
    std::vector<double> im(a.im_);
    for (double& x : im) x *= s;
    return HermMatrix(a.re_ * s, std::move(im));
  }

 private:
  std::size_t n_ = 0;
  SymMatrix re_;
  std::vector<double> im_;
};

/// Real part of Tr(X^* Y); for Hermitian inputs this is the whole trace.
inline double inner(const HermMatrix& a, const HermMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: dimension mismatch");
  const auto x = a.im_flat();
  const auto y = b.im_flat();
  return inner(a.re(), b.re()) + std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

struct EigenDecomp {
  std::vector<double> values;   // non-increasing
  std::vector<double> vectors;  // n x n row-major, column k pairs with values[k]

  std::size_t size() const { return values.size(); }
  double vector_entry(std::size_t row, std::size_t col) const { return vectors[row * values.size() + col]; }
};

namespace detail {

// Cyclic Jacobi on a row-major buffer; a is destroyed, v receives the
// eigenvectors as columns. Returns unsorted eigenvalues.
inline std::vector<double> jacobi_inplace(std::vector<double>& a, std::vector<double>& v, std::size_t n) {
  v.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double total = 0.0;
  for (double x : a) total += x * x;
  const double threshold = 1e-12 * std::sqrt(total);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a[p * n + q] * a[p * n + q];
    if (std::sqrt(off) <= threshold) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;

        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i * n + i];
  return values;
}

// V diag(f(lambda)) V^T for a decomposition.
template <typename F>
std::vector<double> spectral_map(const EigenDecomp& ed, F&& f) {
  const std::size_t n = ed.size();
  std::vector<double> out(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = f(ed.values[k]);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = w * ed.vectors[i * n + k];
      if (vi == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += vi * ed.vectors[j * n + k];
    }
  }
  return out;
}

}  // namespace detail

/// Eigendecomposition of a symmetric matrix; eigenvalues sorted non-increasing.
inline EigenDecomp eigh(const SymMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("empty matrix");
  std::vector<double> a(m.flat().begin(), m.flat().end());
  std::vector<double> v;
  std::vector<double> vals = detail::jacobi_inplace(a, v, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return vals[x] > vals[y]; });

  EigenDecomp ed;
  ed.values.resize(n);
  ed.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    ed.values[k] = vals[order[k]];
    for (std::size_t i = 0; i < n; ++i) ed.vectors[i * n + k] = v[i * n + order[k]];
  }
  return ed;
}

inline double min_eigenvalue(const SymMatrix& m) { return eigh(m).values.back(); }

/// Frobenius-nearest psd matrix: clamp negative eigenvalues to zero.
inline SymMatrix project_psd(const SymMatrix& m) {
  const EigenDecomp ed = eigh(m);
  return SymMatrix(m.size(), detail::spectral_map(ed, [](double l) { return l > 0.0 ? l : 0.0; }));
}

/// Entrywise max(x, 0).
inline SymMatrix project_nonneg(const SymMatrix& m) {
  std::vector<double> d(m.flat().begin(), m.flat().end());
  for (double& x : d) x = std::max(x, 0.0);
  return SymMatrix(m.size(), std::move(d));
}

/// The 2n x 2n real matrix (1/sqrt2)[[R, -I], [I, R]]. Preserves psd-ness
/// and inner products.
inline SymMatrix realify(const HermMatrix& h) {
  const std::size_t n = h.size();
  const std::size_t m = 2 * n;
  const double c = 1.0 / std::sqrt(2.0);
  std::vector<double> out(m * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double r = c * h.re()(i, j);
      const double im = c * h.im(i, j);
      out[i * m + j] = r;
      out[(i + n) * m + (j + n)] = r;
      out[i * m + (j + n)] = -im;
      out[(i + n) * m + j] = im;
    }
  }
  return SymMatrix(m, std::move(out));
}

inline SymMatrix gram(std::span<const std::vector<double>> vectors) {
  const std::size_t n = vectors.size();
  SymMatrix g(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (vectors[i].size() != vectors[0].size()) throw std::invalid_argument("gram: vectors of mixed dimension");
    for (std::size_t j = 0; j <= i; ++j)
      g.set(i, j, std::inner_product(vectors[i].begin(), vectors[i].end(), vectors[j].begin(), 0.0));
  }
  return g;
}

inline SymMatrix gram(std::span<const SymMatrix> mats) {
  const std::size_t n = mats.size();
  SymMatrix g(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (mats[i].size() != mats[0].size()) throw std::invalid_argument("gram: matrices of mixed dimension");
    for (std::size_t j = 0; j <= i; ++j) g.set(i, j, inner(mats[i], mats[j]));
  }
  return g;
}

inline SymMatrix gram(std::span<const HermMatrix> mats) {
  std::vector<SymMatrix> real;
  real.reserve(mats.size());
  for (const auto& h : mats) {
    if (h.size() != mats[0].size()) throw std::invalid_argument("gram: matrices of mixed dimension");
    real.push_back(realify(h));
  }
  return gram(std::span<const SymMatrix>(real));
}

}  // namespace nlg
