#include "pprl/dp.hpp"

#include <cmath>

namespace pprl {

namespace {
void check_approx_budget(const PrivacyBudget& b) {
  if (!(b.epsilon > 0.0 && b.epsilon <= 1.0))
    throw InvalidBudget("epsilon must be in (0, 1], got " + std::to_string(b.epsilon));
  if (!(b.delta > 0.0 && b.delta < 1.0))
    throw InvalidBudget("delta must be in (0, 1), got " + std::to_string(b.delta));
}
}  // namespace

double gaussian_sigma(double sensitivity_l2, const PrivacyBudget& budget) {
  check_approx_budget(budget);
  if (sensitivity_l2 < 0.0) throw InvalidBudget("sensitivity must be nonnegative");
  return sensitivity_l2 * std::sqrt(2.0 * std::log(2.0 / budget.delta)) / budget.epsilon;
}

double laplace_scale(double sensitivity_l1, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidBudget("epsilon must be positive");
  if (sensitivity_l1 < 0.0) throw InvalidBudget("sensitivity must be nonnegative");
  return sensitivity_l1 / epsilon;
}

PrivacyBudget advanced_composition_split(const PrivacyBudget& budget, int k) {
  if (budget.pure())
    throw PureDpUnsupported("advanced composition yields approximate DP only; use simple composition");
  check_approx_budget(budget);
  if (k < 1) throw InvalidBudget("composition count must be >= 1");
  PrivacyBudget out;
  out.epsilon = budget.epsilon / std::sqrt(8.0 * k * std::log(2.0 / budget.delta));
  out.delta = budget.delta / (2.0 * k);
  return out;
}

PrivacyBudget simple_composition_split(const PrivacyBudget& budget, int k) {
  if (!(budget.epsilon > 0.0)) throw InvalidBudget("epsilon must be positive");
  if (budget.delta < 0.0 || budget.delta >= 1.0) throw InvalidBudget("delta must be in [0, 1)");
  if (k < 1) throw InvalidBudget("composition count must be >= 1");
  return {budget.epsilon / k, budget.delta / k};
}

SymmetricMatrix sample_symmetric_gaussian(int dim, double sigma, std::uint64_t seed) {
  SymmetricMatrix m(dim);
  if (sigma == 0.0) return m;
  Rng rng(seed);
  std::vector<double> z(static_cast<std::size_t>(dim) * dim);
  for (double& v : z) v = rng.next_gaussian(sigma);
  const double inv = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j)
      m.set(i, j, (z[static_cast<std::size_t>(i) * dim + j] + z[static_cast<std::size_t>(j) * dim + i]) * inv);
  return m;
}

SymmetricMatrix sample_symmetric_laplace(int dim, double b, std::uint64_t seed) {
  SymmetricMatrix m(dim);
  if (b == 0.0) return m;
  Rng rng(seed);
  std::vector<double> z(static_cast<std::size_t>(dim) * dim);
  for (double& v : z) v = rng.next_laplace(b);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j)
      m.set(i, j, 0.5 * (z[static_cast<std::size_t>(i) * dim + j] + z[static_cast<std::size_t>(j) * dim + i]));
  return m;
}

Vec sample_gaussian_vector(int dim, double sigma, std::uint64_t seed) {
  Vec v(dim, 0.0);
  if (sigma == 0.0) return v;
  Rng rng(seed);
  for (double& x : v) x = rng.next_gaussian(sigma);
  return v;
}

Vec sample_laplace_vector(int dim, double b, std::uint64_t seed) {
  Vec v(dim, 0.0);
  if (b == 0.0) return v;
  Rng rng(seed);
  for (double& x : v) x = rng.next_laplace(b);
  return v;
}

double gauss_matrix_eigen_bound(int d, double sigma, int count, double alpha) {
  return sigma * std::sqrt(static_cast<double>(count)) *
         (4.0 * std::sqrt(static_cast<double>(d)) + 2.0 * std::log(1.0 / alpha));
}

double gauss_vector_bound(int d, double sigma, int count, double alpha) {
  return sigma * std::sqrt(static_cast<double>(count)) *
         (std::sqrt(static_cast<double>(d)) + 2.0 * std::sqrt(std::log(1.0 / alpha)));
}

double laplace_matrix_eigen_bound(int d, double sigma, int count, double alpha) {
  const double logterm = std::log(d / alpha);
  return sigma * std::sqrt(static_cast<double>(count)) *
         (2.0 * d + 2.0 * std::sqrt(d * logterm) + logterm);
}

double laplace_vector_bound(int d, double sigma, int count, double alpha) {
  return sigma * std::sqrt(static_cast<double>(count)) * std::sqrt(static_cast<double>(d)) *
         std::log(d / alpha);
}

long long ceil_robust(double x) {
  const double nudge = 1e-12 * std::max(1.0, std::fabs(x));
  return static_cast<long long>(std::ceil(x - nudge));
}

}  // namespace pprl
