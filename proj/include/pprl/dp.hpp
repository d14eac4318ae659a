#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "pprl/linalg.hpp"
#include "pprl/rng.hpp"

namespace pprl {

struct InvalidBudget : std::runtime_error {
  explicit InvalidBudget(const std::string& what) : std::runtime_error(what) {}
};
struct PureDpUnsupported : std::runtime_error {
  explicit PureDpUnsupported(const std::string& what) : std::runtime_error(what) {}
};

// delta == 0 selects pure DP (Laplace calibration path only).
struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
  bool pure() const { return delta == 0.0; }
};

// Gaussian mechanism scale: sigma = sensitivity * sqrt(2 ln(2/delta)) / epsilon.
// Valid for epsilon in (0, 1] and delta in (0, 1).
double gaussian_sigma(double sensitivity_l2, const PrivacyBudget& budget);

// Laplace mechanism scale: b = sensitivity / epsilon, epsilon > 0.
double laplace_scale(double sensitivity_l1, double epsilon);

// Per-mechanism budget such that k-fold (adaptive) composition of
// (eps', delta')-DP mechanisms is (eps, delta)-DP:
//   eps' = eps / sqrt(8 k ln(2/delta)),  delta' = delta / (2k).
PrivacyBudget advanced_composition_split(const PrivacyBudget& budget, int k);

// eps' = eps / k, delta' = delta / k. Works for pure budgets too.
PrivacyBudget simple_composition_split(const PrivacyBudget& budget, int k);

// (Z' + Z'ᵀ)/sqrt(2) with Z' i.i.d. N(0, sigma²); per-entry variance sigma²
// off the diagonal.
SymmetricMatrix sample_symmetric_gaussian(int dim, double sigma, std::uint64_t seed);
// (Z' + Z'ᵀ)/2 with Z' i.i.d. Lap(0, b); the construction the Laplace
// eigenvalue bound is stated for.
SymmetricMatrix sample_symmetric_laplace(int dim, double b, std::uint64_t seed);

Vec sample_gaussian_vector(int dim, double sigma, std::uint64_t seed);
Vec sample_laplace_vector(int dim, double b, std::uint64_t seed);

// High-probability bounds (level alpha) for noise aggregates built from
// `count` i.i.d. samples at per-entry scale `sigma`.
// Operator norm of a symmetric Gaussian matrix: sigma*sqrt(count)*(4 sqrt(d) + 2 ln(1/alpha)).
double gauss_matrix_eigen_bound(int d, double sigma, int count, double alpha);
// l2 norm of a Gaussian vector: sigma*sqrt(count)*(sqrt(d) + 2 sqrt(ln(1/alpha))).
double gauss_vector_bound(int d, double sigma, int count, double alpha);
// Laplace analogues: sigma*sqrt(count)*(2d + 2 sqrt(d ln(d/alpha)) + ln(d/alpha))
// and sigma*sqrt(count)*sqrt(d)*ln(d/alpha).
double laplace_matrix_eigen_bound(int d, double sigma, int count, double alpha);
double laplace_vector_bound(int d, double sigma, int count, double alpha);

// ceil with a 1e-12 relative snap so values that land on an integer up to
// floating-point error do not spill into the next bucket.
long long ceil_robust(double x);

}  // namespace pprl
