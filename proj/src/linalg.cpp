#include "pprl/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace pprl {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

void axpy(double alpha, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

SymmetricMatrix::SymmetricMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim, 0.0) {}

SymmetricMatrix SymmetricMatrix::identity(int dim, double scale) {
  SymmetricMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.a_[static_cast<std::size_t>(i) * dim + i] = scale;
  return m;
}

void SymmetricMatrix::set(int i, int j, double v) {
  a_[static_cast<std::size_t>(i) * dim_ + j] = v;
  a_[static_cast<std::size_t>(j) * dim_ + i] = v;
}

void SymmetricMatrix::add(int i, int j, double v) {
  a_[static_cast<std::size_t>(i) * dim_ + j] += v;
  if (i != j) a_[static_cast<std::size_t>(j) * dim_ + i] += v;
}

void SymmetricMatrix::add_outer(const Vec& x, double weight) {
  for (int i = 0; i < dim_; ++i) {
    const double wxi = weight * x[i];
    double* row = &a_[static_cast<std::size_t>(i) * dim_];
    for (int j = 0; j <= i; ++j) row[j] += wxi * x[j];
  }
  // mirror the lower triangle so both halves stay bit-identical
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      a_[static_cast<std::size_t>(i) * dim_ + j] = a_[static_cast<std::size_t>(j) * dim_ + i];
}

void SymmetricMatrix::add_diagonal(double c) {
  for (int i = 0; i < dim_; ++i) a_[static_cast<std::size_t>(i) * dim_ + i] += c;
}

SymmetricMatrix& SymmetricMatrix::operator+=(const SymmetricMatrix& other) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += other.a_[i];
  return *this;
}

SymmetricMatrix& SymmetricMatrix::operator*=(double c) {
  for (double& v : a_) v *= c;
  return *this;
}

Vec SymmetricMatrix::multiply(const Vec& x) const {
  Vec y(dim_, 0.0);
  for (int i = 0; i < dim_; ++i) {
    double s = 0.0;
    const double* row = &a_[static_cast<std::size_t>(i) * dim_];
    for (int j = 0; j < dim_; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += a_[static_cast<std::size_t>(i) * dim_ + i];
  return t;
}

double SymmetricMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

bool SymmetricMatrix::all_finite() const {
  for (double v : a_)
    if (!std::isfinite(v)) return false;
  return true;
}

bool Cholesky::try_factor(const SymmetricMatrix& a, Cholesky* out) {
  const int n = a.dim();
  out->dim_ = n;
  out->l_.assign(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double>& l = out->l_;
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    const double* lrowj = &l[static_cast<std::size_t>(j) * n];
    for (int k = 0; k < j; ++k) d -= lrowj[k] * lrowj[k];
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double ljj = std::sqrt(d);
    l[static_cast<std::size_t>(j) * n + j] = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      const double* lrowi = &l[static_cast<std::size_t>(i) * n];
      for (int k = 0; k < j; ++k) s -= lrowi[k] * lrowj[k];
      l[static_cast<std::size_t>(i) * n + j] = s / ljj;
    }
  }
  return true;
}

Cholesky Cholesky::factor(const SymmetricMatrix& a) {
  Cholesky c;
  if (!try_factor(a, &c)) throw NotPositiveDefinite("cholesky: matrix is not positive definite");
  return c;
}

Vec Cholesky::solve(const Vec& b) const {
  const int n = dim_;
  Vec y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    const double* row = &l_[static_cast<std::size_t>(i) * n];
    for (int k = 0; k < i; ++k) s -= row[k] * y[k];
    y[i] = s / row[i];
  }
  Vec x(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < n; ++k) s -= l_[static_cast<std::size_t>(k) * n + i] * x[k];
    x[i] = s / l_[static_cast<std::size_t>(i) * n + i];
  }
  return x;
}

double Cholesky::inv_quadratic(const Vec& x) const {
  const int n = dim_;
  Vec y(n, 0.0);
  double q = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    const double* row = &l_[static_cast<std::size_t>(i) * n];
    for (int k = 0; k < i; ++k) s -= row[k] * y[k];
    y[i] = s / row[i];
    q += y[i] * y[i];
  }
  return q;
}

Vec psd_solve(const SymmetricMatrix& a, const Vec& b) {
  return Cholesky::factor(a).solve(b);
}

double mahalanobis_inv_norm(const SymmetricMatrix& a, const Vec& x) {
  double q = Cholesky::factor(a).inv_quadratic(x);
  return std::sqrt(std::max(0.0, q));
}

double min_eigenvalue(const SymmetricMatrix& a) {
  const int n = a.dim();
  // Gershgorin interval enclosing the full spectrum.
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < n; ++i) {
    double radius = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) radius += std::fabs(a(i, j));
    lo = std::min(lo, a(i, i) - radius);
    hi = std::max(hi, a(i, i) + radius);
  }
  lo -= 1.0;
  hi += 1.0;
  SymmetricMatrix shifted = a;
  Cholesky scratch;
  auto pd_above = [&](double t) {
    shifted = a;
    shifted.add_diagonal(-t);
    return Cholesky::try_factor(shifted, &scratch);
  };
  // pd_above(t) true iff min eigenvalue > t
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-11; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (pd_above(mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double operator_norm(const SymmetricMatrix& a) {
  SymmetricMatrix neg = a;
  neg *= -1.0;
  const double lo = min_eigenvalue(a);
  const double hi = -min_eigenvalue(neg);
  return std::max(std::fabs(lo), std::fabs(hi));
}

}  // namespace pprl
