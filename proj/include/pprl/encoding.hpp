#pragma once

#include <vector>

#include "pprl/linalg.hpp"
#include "pprl/mdp.hpp"

namespace pprl {

// Linear-mixture realization of a finite MDP: p_h(s'|s,a) = <phi(s'|s,a), w_h>
// with phi(s'|s,a) = rho * e_{(s,a,s')}, rho = 1/sqrt(S). The scaling keeps
// ||phi_v|| <= 1 for v in [0,1]^S and ||w_h|| <= C_w = S sqrt(A).
class MixtureEncoding {
 public:
  explicit MixtureEncoding(const TabularMDP& mdp);

  int dim() const { return d_; }
  double rho() const { return rho_; }
  double c_w() const { return c_w_; }
  const Vec& true_w(int h) const { return w_[h]; }

  int coord(int s, int a, int s_next) const {
    return (s * A_ + a) * S_ + s_next;
  }

  // phi_v(s,a): entry rho*v(s') at coordinate (s,a,s'), zero elsewhere.
  Vec phi_v(const std::vector<double>& v, int s, int a) const;
  // <phi_v(s,a), w> without materializing the dense vector.
  double expected_value(const std::vector<double>& v, int s, int a, const Vec& w) const;

 private:
  int S_, A_, d_;
  double rho_, c_w_;
  std::vector<Vec> w_;
};

// Tabular linear-MDP realization: phi(s,a) = e_{(s,a)}, theta_h[(s,a)] = r_h,
// mu_h(s')[(s,a)] = p_h(s'|s,a). Satisfies the linear-MDP norm bounds exactly.
class LinearEncoding {
 public:
  explicit LinearEncoding(const TabularMDP& mdp);

  int dim() const { return d_; }
  int coord(int s, int a) const { return s * A_ + a; }
  Vec phi(int s, int a) const;
  const Vec& theta(int h) const { return theta_[h]; }
  // mu_h(s') as a dense d-vector.
  Vec mu(int h, int s_next) const;

 private:
  int S_, A_, d_;
  const TabularMDP* mdp_;
  std::vector<Vec> theta_;
};

}  // namespace pprl
