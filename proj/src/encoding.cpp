#include "pprl/encoding.hpp"

#include <cmath>

namespace pprl {

MixtureEncoding::MixtureEncoding(const TabularMDP& mdp)
    : S_(mdp.S), A_(mdp.A), d_(mdp.S * mdp.S * mdp.A), rho_(1.0 / std::sqrt(mdp.S)),
      c_w_(mdp.S * std::sqrt(static_cast<double>(mdp.A))) {
  w_.assign(mdp.H, Vec(d_, 0.0));
  for (int h = 0; h < mdp.H; ++h)
    for (int s = 0; s < S_; ++s)
      for (int a = 0; a < A_; ++a) {
        const double* p = mdp.row(h, s, a);
        for (int sn = 0; sn < S_; ++sn) w_[h][coord(s, a, sn)] = p[sn] / rho_;
      }
}

Vec MixtureEncoding::phi_v(const std::vector<double>& v, int s, int a) const {
  Vec out(d_, 0.0);
  const int base = (s * A_ + a) * S_;
  for (int sn = 0; sn < S_; ++sn) out[base + sn] = rho_ * v[sn];
  return out;
}

double MixtureEncoding::expected_value(const std::vector<double>& v, int s, int a, const Vec& w) const {
  const int base = (s * A_ + a) * S_;
  double out = 0.0;
  for (int sn = 0; sn < S_; ++sn) out += rho_ * v[sn] * w[base + sn];
  return out;
}

LinearEncoding::LinearEncoding(const TabularMDP& mdp)
    : S_(mdp.S), A_(mdp.A), d_(mdp.S * mdp.A), mdp_(&mdp) {
  theta_.assign(mdp.H, Vec(d_, 0.0));
  for (int h = 0; h < mdp.H; ++h)
    for (int s = 0; s < S_; ++s)
      for (int a = 0; a < A_; ++a) theta_[h][coord(s, a)] = mdp.reward(h, s, a);
}

Vec LinearEncoding::phi(int s, int a) const {
  Vec out(d_, 0.0);
  out[coord(s, a)] = 1.0;
  return out;
}

Vec LinearEncoding::mu(int h, int s_next) const {
  Vec out(d_, 0.0);
  for (int s = 0; s < S_; ++s)
    for (int a = 0; a < A_; ++a) out[coord(s, a)] = mdp_->row(h, s, a)[s_next];
  return out;
}

}  // namespace pprl
