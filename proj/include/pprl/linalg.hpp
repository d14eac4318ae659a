#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pprl {

using Vec = std::vector<double>;

struct NotPositiveDefinite : std::runtime_error {
  explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& v);
void axpy(double alpha, const Vec& x, Vec& y);  // y += alpha * x
bool all_finite(const Vec& v);

// Dense symmetric matrix, exact symmetry maintained by construction: every
// mutation writes (i,j) and (j,i) with the same value.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(int dim);
  static SymmetricMatrix identity(int dim, double scale = 1.0);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
  void set(int i, int j, double v);
  void add(int i, int j, double v);

  void add_outer(const Vec& x, double weight = 1.0);  // += weight * x xᵀ
  void add_diagonal(double c);
  SymmetricMatrix& operator+=(const SymmetricMatrix& other);
  SymmetricMatrix& operator*=(double c);

  Vec multiply(const Vec& x) const;
  double trace() const;
  double frobenius_norm() const;
  bool all_finite() const;

 private:
  int dim_;
  std::vector<double> a_;
};

// Unpivoted lower Cholesky. Factorization failure signals a design matrix
// that was not shifted far enough into the PD cone.
class Cholesky {
 public:
  Cholesky() : dim_(0) {}
  static Cholesky factor(const SymmetricMatrix& a);          // throws NotPositiveDefinite
  static bool try_factor(const SymmetricMatrix& a, Cholesky* out);

  int dim() const { return dim_; }
  Vec solve(const Vec& b) const;            // A x = b
  double inv_quadratic(const Vec& x) const; // xᵀ A⁻¹ x = ‖L⁻¹x‖²

 private:
  int dim_;
  std::vector<double> l_;  // row-major lower triangle, full storage
};

Vec psd_solve(const SymmetricMatrix& a, const Vec& b);
double mahalanobis_inv_norm(const SymmetricMatrix& a, const Vec& x);

// Smallest eigenvalue by bisection on Cholesky success of A - t I, absolute
// tolerance 1e-10. Defined for any symmetric input.
double min_eigenvalue(const SymmetricMatrix& a);
// Largest |eigenvalue|.
double operator_norm(const SymmetricMatrix& a);

}  // namespace pprl
