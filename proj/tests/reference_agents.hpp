#pragma once

// Plain non-private implementations of the two optimistic algorithms, written
// against the public linalg/encoding primitives only. They are the oracles
// the zero-noise framework runs must reproduce state-for-state.

#include <vector>

#include "pprl/encoding.hpp"
#include "pprl/linalg.hpp"
#include "pprl/mdp.hpp"

namespace refimpl {

using pprl::Cholesky;
using pprl::LinearEncoding;
using pprl::MixtureEncoding;
using pprl::Policy;
using pprl::SymmetricMatrix;
using pprl::TabularMDP;
using pprl::Vec;

struct ReferenceVtr {
  const TabularMDP& mdp;
  MixtureEncoding enc;
  double lambda;
  double beta;
  std::vector<SymmetricMatrix> design;
  std::vector<Vec> target;
  std::vector<Vec> weights;
  std::vector<std::vector<double>> v;  // [h][s], h in [0, H]
  Policy policy;

  ReferenceVtr(const TabularMDP& m, double beta_width)
      : mdp(m), enc(m), lambda(static_cast<double>(m.H) * m.H), beta(beta_width) {
    design.assign(m.H, SymmetricMatrix::identity(enc.dim(), lambda));
    target.assign(m.H, Vec(enc.dim(), 0.0));
    weights.assign(m.H, Vec(enc.dim(), 0.0));
    v.assign(m.H + 1, std::vector<double>(m.S, 0.0));
    policy.assign(m.H, std::vector<int>(m.S, 0));
  }

  void plan() {
    for (int h = mdp.H - 1; h >= 0; --h) {
      Cholesky chol = Cholesky::factor(design[h]);
      for (int s = 0; s < mdp.S; ++s) {
        double best = -1.0;
        int best_a = 0;
        for (int a = 0; a < mdp.A; ++a) {
          Vec phi = enc.phi_v(v[h + 1], s, a);
          double q = mdp.reward(h, s, a) + pprl::dot(phi, weights[h]) +
                     beta * std::sqrt(std::max(0.0, chol.inv_quadratic(phi)));
          q = std::min(static_cast<double>(mdp.H), q);
          q = std::max(0.0, q);
          if (q > best) {
            best = q;
            best_a = a;
          }
        }
        v[h][s] = best;
        policy[h][s] = best_a;
      }
    }
  }

  void update(const pprl::Trajectory& traj) {
    for (int h = 0; h < mdp.H; ++h) {
      const auto& t = traj[h];
      Vec x = enc.phi_v(v[h + 1], t.s, t.a);
      const double y = v[h + 1][t.s_next];
      design[h].add_outer(x);
      pprl::axpy(y, x, target[h]);
      weights[h] = pprl::psd_solve(design[h], target[h]);
    }
  }
};

struct ReferenceLsviBatch {
  const TabularMDP& mdp;
  LinearEncoding enc;
  double lambda;
  double beta;
  long long B;
  std::vector<int> batch_starts;
  std::vector<SymmetricMatrix> design;
  std::vector<Vec> weights;
  std::vector<std::vector<double>> q;  // [h][s*A+a]
  Policy policy;
  std::vector<pprl::Trajectory> history;
  int b = 0;
  int episodes = 0;

  ReferenceLsviBatch(const TabularMDP& m, double beta_width, long long batches,
                     std::vector<int> starts)
      : mdp(m), enc(m), lambda(static_cast<double>(enc.dim())), beta(beta_width), B(batches),
        batch_starts(std::move(starts)) {
    design.assign(m.H, SymmetricMatrix::identity(enc.dim(), lambda));
    weights.assign(m.H, Vec(enc.dim(), 0.0));
    q.assign(m.H, std::vector<double>(static_cast<std::size_t>(m.S) * m.A, 0.0));
    policy.assign(m.H, std::vector<int>(m.S, 0));
    greedy_from_state();
  }

  void greedy_from_state() {
    for (int h = mdp.H - 1; h >= 0; --h) {
      Cholesky chol = Cholesky::factor(design[h]);
      for (int s = 0; s < mdp.S; ++s) {
        double best = -1.0;
        int best_a = 0;
        for (int a = 0; a < mdp.A; ++a) {
          Vec phi = enc.phi(s, a);
          double score = pprl::dot(phi, weights[h]) +
                         beta * std::sqrt(std::max(0.0, chol.inv_quadratic(phi)));
          score = std::min(static_cast<double>(mdp.H), std::max(0.0, score));
          q[h][static_cast<std::size_t>(s) * mdp.A + a] = score;
          if (score > best) {
            best = score;
            best_a = a;
          }
        }
        policy[h][s] = best_a;
      }
    }
  }

  void observe(const pprl::Trajectory& traj) {
    history.push_back(traj);
    ++episodes;
    if (b + 1 < B && episodes == batch_starts[b + 1] - 1) {
      ++b;
      std::vector<std::vector<double>> v_next(mdp.H + 1, std::vector<double>(mdp.S, 0.0));
      for (int h = mdp.H - 1; h >= 0; --h) {
        design[h] = SymmetricMatrix::identity(enc.dim(), lambda);
        for (const auto& tr : history) {
          Vec phi = enc.phi(tr[h].s, tr[h].a);
          design[h].add_outer(phi);
        }
        Vec u(enc.dim(), 0.0);
        for (const auto& tr : history) u[enc.coord(tr[h].s, tr[h].a)] += tr[h].r + v_next[h + 1][tr[h].s_next];
        weights[h] = pprl::psd_solve(design[h], u);
        Cholesky chol = Cholesky::factor(design[h]);
        for (int s = 0; s < mdp.S; ++s) {
          double best = -1.0;
          for (int a = 0; a < mdp.A; ++a) {
            Vec phi = enc.phi(s, a);
            double score = pprl::dot(phi, weights[h]) +
                           beta * std::sqrt(std::max(0.0, chol.inv_quadratic(phi)));
            score = std::min(static_cast<double>(mdp.H), std::max(0.0, score));
            if (score > best) best = score;
          }
          v_next[h][s] = best;
        }
      }
      greedy_from_state();
    }
  }
};

struct ReferenceVtrPlus {
  const TabularMDP& mdp;
  MixtureEncoding enc;
  double lambda = 1.0;
  double bhat, bcheck, btilde;
  std::vector<SymmetricMatrix> d1, d2;
  std::vector<Vec> u1, u2, w1, w2;
  std::vector<std::vector<double>> v;
  Policy policy;

  // widths are episode-dependent; call set_widths before each plan
  void set_widths(double beta_hat, double beta_check, double beta_tilde) {
    bhat = beta_hat;
    bcheck = beta_check;
    btilde = beta_tilde;
  }

  ReferenceVtrPlus(const TabularMDP& m, double beta_hat, double beta_check, double beta_tilde)
      : mdp(m), enc(m), bhat(beta_hat), bcheck(beta_check), btilde(beta_tilde) {
    d1.assign(m.H, SymmetricMatrix::identity(enc.dim(), lambda));
    d2.assign(m.H, SymmetricMatrix::identity(enc.dim(), lambda));
    u1.assign(m.H, Vec(enc.dim(), 0.0));
    u2.assign(m.H, Vec(enc.dim(), 0.0));
    w1.assign(m.H, Vec(enc.dim(), 0.0));
    w2.assign(m.H, Vec(enc.dim(), 0.0));
    v.assign(m.H + 1, std::vector<double>(m.S, 0.0));
    policy.assign(m.H, std::vector<int>(m.S, 0));
  }

  void plan() {
    for (int h = mdp.H - 1; h >= 0; --h) {
      Cholesky chol = Cholesky::factor(d1[h]);
      for (int s = 0; s < mdp.S; ++s) {
        double best = -1.0;
        int best_a = 0;
        for (int a = 0; a < mdp.A; ++a) {
          Vec phi = enc.phi_v(v[h + 1], s, a);
          double q = mdp.reward(h, s, a) + pprl::dot(phi, w1[h]) +
                     bhat * std::sqrt(std::max(0.0, chol.inv_quadratic(phi)));
          q = std::min(static_cast<double>(mdp.H), q);
          q = std::max(0.0, q);
          if (q > best) {
            best = q;
            best_a = a;
          }
        }
        v[h][s] = best;
        policy[h][s] = best_a;
      }
    }
  }

  void update(const pprl::Trajectory& traj) {
    const double h2 = static_cast<double>(mdp.H) * mdp.H;
    std::vector<double> vsq(mdp.S);
    for (int h = 0; h < mdp.H; ++h) {
      const auto& t = traj[h];
      for (int s = 0; s < mdp.S; ++s) vsq[s] = v[h + 1][s] * v[h + 1][s];
      Vec phi1 = enc.phi_v(v[h + 1], t.s, t.a);
      Vec phi2 = enc.phi_v(vsq, t.s, t.a);
      Cholesky c1 = Cholesky::factor(d1[h]);
      Cholesky c2 = Cholesky::factor(d2[h]);
      const double second = std::clamp(pprl::dot(phi2, w2[h]), 0.0, h2);
      const double first = std::clamp(pprl::dot(phi1, w1[h]), 0.0, static_cast<double>(mdp.H));
      const double vbar = second - first * first;
      const double e1 = std::min(h2, 2.0 * mdp.H * bcheck * std::sqrt(std::max(0.0, c1.inv_quadratic(phi1))));
      const double e2 = std::min(h2, btilde * std::sqrt(std::max(0.0, c2.inv_quadratic(phi2))));
      const double e_term = e1 + e2;
      const double sigma_bar = std::sqrt(std::max(h2 / enc.dim(), vbar + e_term));
      const double weight = 1.0 / (sigma_bar * sigma_bar);
      d1[h].add_outer(phi1, weight);
      pprl::axpy(weight * v[h + 1][t.s_next], phi1, u1[h]);
      d2[h].add_outer(phi2);
      pprl::axpy(vsq[t.s_next], phi2, u2[h]);
      w1[h] = pprl::psd_solve(d1[h], u1[h]);
      w2[h] = pprl::psd_solve(d2[h], u2[h]);
    }
  }
};

}  // namespace refimpl
