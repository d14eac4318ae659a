#include "pprl/vtr.hpp"

#include <algorithm>
#include <cmath>

namespace pprl {

double vtr_sn_term(int d, int H, int K, double p) {
  // log kept in sum form so (1+KH)^{d/2} never materializes
  const double logterm = std::log(3.0 * H / p) + 0.5 * d * std::log1p(static_cast<double>(K) * H);
  return std::sqrt(2.0 * H * static_cast<double>(H) * logterm);
}

double vtr_beta_generic(double lambda, double c_w, double ups_low, double ups_high,
                        double c_vec, double sn_term) {
  return ((lambda + ups_high) * c_w + c_vec) / std::sqrt(lambda + ups_low) + sn_term;
}

void check_beta_condition(double beta, double lambda, double c_w, double ups_low,
                          double ups_high, double c_vec, double sn_term) {
  const double required = vtr_beta_generic(lambda, c_w, ups_low, ups_high, c_vec, sn_term);
  if (beta < required * (1.0 - 1e-12))
    throw BetaTooSmall("beta " + std::to_string(beta) + " below required " + std::to_string(required));
}

VtrCalibration calibrate_vtr(const VtrConfig& cfg, int d, int H, double c_w) {
  VtrCalibration cal;
  cal.regime = cfg.regime;
  cal.dist = cfg.dist;
  cal.lambda = static_cast<double>(H) * H;
  cal.sn_term = vtr_sn_term(d, H, cfg.K, cfg.p);
  if (cfg.regime == Regime::None) {
    cal.beta = 3.0 * (c_w + 1.0) * std::sqrt(cal.lambda) + cal.sn_term;
    return cal;
  }

  const double eps = cfg.budget.epsilon;
  const double delta = cfg.budget.delta;
  const double sens = 2.0 * H * static_cast<double>(H);  // Frobenius/l2 per-term sensitivity
  const int k0 = static_cast<int>(ceil_robust(std::log2(static_cast<double>(cfg.K)) + 1.0));
  const double alpha = cfg.p / (6.0 * cfg.K * H);

  if (cfg.dist == NoiseDist::Gaussian) {
    if (cfg.budget.pure()) throw InvalidBudget("gaussian noise requires delta > 0");
    if (cfg.regime == Regime::Jdp) {
      cal.sigma = (32.0 * H * H / eps) *
                  std::sqrt(2.0 * H * k0 * std::log(8.0 * H / delta) * std::log(4.0 / delta) *
                            std::log(16.0 * H * k0 / delta)) *
                  cfg.scale_override;
      cal.aggregate_count = k0;
    } else {
      cal.sigma = (4.0 * H * H * H / eps) * std::sqrt(2.0 * std::log(4.0 * H / delta)) *
                  cfg.scale_override;
      cal.aggregate_count = cfg.K;
    }
    cal.upsilon = gauss_matrix_eigen_bound(d, cal.sigma, cal.aggregate_count, alpha);
    cal.c_vec = gauss_vector_bound(d, cal.sigma, cal.aggregate_count, alpha);
    cal.beta = 3.0 * (c_w + 1.0) * std::sqrt(cal.lambda + cal.upsilon) + cal.sn_term;
  } else {
    // Pure-DP path: simple composition everywhere, Laplace tail bounds.
    if (!cfg.budget.pure()) throw InvalidBudget("laplace (pure DP) path requires delta == 0");
    if (cfg.regime == Regime::Jdp) {
      cal.sigma =
          laplace_scale(sens, simple_composition_split({eps / 2.0, 0.0}, H * k0).epsilon) *
          cfg.scale_override;
      cal.aggregate_count = k0;
    } else {
      cal.sigma = laplace_scale(sens, simple_composition_split({eps / 2.0, 0.0}, H).epsilon) *
                  cfg.scale_override;
      cal.aggregate_count = cfg.K;
    }
    cal.upsilon = laplace_matrix_eigen_bound(d, cal.sigma, cal.aggregate_count, alpha);
    cal.c_vec = laplace_vector_bound(d, cal.sigma, cal.aggregate_count, alpha);
    // The 3(C_w+1) shorthand assumes upsilon >= c_vec, which the Laplace
    // bounds do not always satisfy; use the generic condition directly.
    cal.beta = vtr_beta_generic(cal.lambda, c_w, cal.upsilon, 3.0 * cal.upsilon, cal.c_vec,
                                cal.sn_term);
  }
  cal.shift = 2.0 * cal.upsilon;
  check_beta_condition(cal.beta, cal.lambda, c_w, cal.upsilon, 3.0 * cal.upsilon, cal.c_vec,
                       cal.sn_term);
  return cal;
}

VtrAgent::VtrAgent(const TabularMDP& mdp, const VtrConfig& cfg, std::uint64_t run_seed)
    : mdp_(mdp), enc_(mdp), cfg_(cfg), cal_(calibrate_vtr(cfg, enc_.dim(), mdp.H, enc_.c_w())),
      run_seed_(run_seed) {
  const int d = enc_.dim();
  lambda_acc_.assign(mdp.H, SymmetricMatrix::identity(d, cal_.lambda));
  u_acc_.assign(mdp.H, Vec(d, 0.0));
  lambda_tilde_ = lambda_acc_;
  u_tilde_ = u_acc_;
  w_tilde_.assign(mdp.H, Vec(d, 0.0));
  if (cfg.regime == Regime::Jdp) {
    const TreePayload mat_kind = (cfg.dist == NoiseDist::Gaussian) ? TreePayload::GaussianMatrix
                                                                   : TreePayload::LaplaceMatrix;
    const TreePayload vec_kind = (cfg.dist == NoiseDist::Gaussian) ? TreePayload::GaussianVector
                                                                   : TreePayload::LaplaceVector;
    for (int h = 0; h < mdp.H; ++h) {
      mat_trees_.emplace_back(mat_kind, d, cal_.sigma,
                              mix_seed({run_seed, rng_role::kTree, static_cast<std::uint64_t>(h), 0}),
                              cfg.K);
      vec_trees_.emplace_back(vec_kind, d, cal_.sigma,
                              mix_seed({run_seed, rng_role::kTree, static_cast<std::uint64_t>(h), 1}),
                              cfg.K);
    }
  }
  q_.assign(mdp.H, std::vector<double>(static_cast<std::size_t>(mdp.S) * mdp.A, 0.0));
  v_.assign(mdp.H + 1, std::vector<double>(mdp.S, 0.0));
  policy_.assign(mdp.H, std::vector<int>(mdp.S, 0));
  beta_running_ = cal_.beta;
}

Vec VtrAgent::stage_feature(int h, const Transition& t) const {
  return enc_.phi_v(v_[h + 1], t.s, t.a);
}

double VtrAgent::stage_target(int h, const Transition& t) const { return v_[h + 1][t.s_next]; }

void VtrAgent::inject_weights(const std::vector<Vec>& w, double beta) {
  w_tilde_ = w;
  beta_running_ = beta;
  injected_ = true;
  plan();
}

void VtrAgent::plan() {
  const int H = mdp_.H;
  const int S = mdp_.S;
  const int A = mdp_.A;
  std::fill(v_[H].begin(), v_[H].end(), 0.0);
  stage_coverage_.assign(H, true);
  double worst = 0.0;
  for (int h = H - 1; h >= 0; --h) {
    Cholesky chol = Cholesky::factor(lambda_tilde_[h]);
    for (int s = 0; s < S; ++s) {
      double best = -1.0;
      int best_a = 0;
      for (int a = 0; a < A; ++a) {
        Vec phi = enc_.phi_v(v_[h + 1], s, a);
        double qv = mdp_.reward(h, s, a) + dot(phi, w_tilde_[h]) +
                    beta_running_ * std::sqrt(std::max(0.0, chol.inv_quadratic(phi)));
        qv = std::min(static_cast<double>(H), qv);
        qv = std::max(0.0, qv);
        q_[h][static_cast<std::size_t>(s) * A + a] = qv;
        if (qv > best) {
          best = qv;
          best_a = a;
        }
      }
      v_[h][s] = best;
      policy_[h][s] = best_a;
    }
    // coverage of the true parameter by the current ellipsoid
    Vec diff = enc_.true_w(h);
    axpy(-1.0, w_tilde_[h], diff);
    const double n2 = dot(diff, lambda_tilde_[h].multiply(diff));
    stage_coverage_[h] = n2 <= beta_running_ * beta_running_ * (1.0 + 1e-12);
    worst = std::max(worst, n2);
  }
  coverage_ok_ = worst <= beta_running_ * beta_running_ * (1.0 + 1e-12);
}

void VtrAgent::begin_episode() { plan(); }

int VtrAgent::act(int h, int s) const { return policy_[h][s]; }

void VtrAgent::complete_episode(const Trajectory& traj) {
  const int H = mdp_.H;
  const int d = enc_.dim();
  const int k = k_done_ + 1;
  last_payload_.clear();
  last_payload_.reserve(H);
  for (int h = 0; h < H; ++h) {
    const Transition& t = traj[h];
    Vec x = enc_.phi_v(v_[h + 1], t.s, t.a);
    const double y = v_[h + 1][t.s_next];
    StagePayload pay{SymmetricMatrix(d), Vec(d, 0.0)};
    pay.design.add_outer(x);
    pay.response = x;
    for (double& e : pay.response) e *= y;
    if (cfg_.regime == Regime::Ldp) {
      const std::uint64_t mseed = mix_seed({run_seed_, rng_role::kUser, static_cast<std::uint64_t>(k),
                                            static_cast<std::uint64_t>(h), 0});
      const std::uint64_t vseed = mix_seed({run_seed_, rng_role::kUser, static_cast<std::uint64_t>(k),
                                            static_cast<std::uint64_t>(h), 1});
      if (cfg_.dist == NoiseDist::Gaussian) {
        pay.design += sample_symmetric_gaussian(d, cal_.sigma, mseed);
        axpy(1.0, sample_gaussian_vector(d, cal_.sigma, vseed), pay.response);
      } else {
        pay.design += sample_symmetric_laplace(d, cal_.sigma, mseed);
        axpy(1.0, sample_laplace_vector(d, cal_.sigma, vseed), pay.response);
      }
    }
    lambda_acc_[h] += pay.design;
    axpy(1.0, pay.response, u_acc_[h]);
    last_payload_.push_back(std::move(pay));
  }
  for (int h = 0; h < H; ++h) {
    lambda_tilde_[h] = lambda_acc_[h];
    u_tilde_[h] = u_acc_[h];
    if (cfg_.regime == Regime::Jdp) {
      lambda_tilde_[h] += mat_trees_[h].prefix_matrix(k);
      lambda_tilde_[h].add_diagonal(cal_.shift);
      axpy(1.0, vec_trees_[h].prefix_vector(k), u_tilde_[h]);
    } else if (cfg_.regime == Regime::Ldp) {
      lambda_tilde_[h].add_diagonal(cal_.shift);
    }
    w_tilde_[h] = psd_solve(lambda_tilde_[h], u_tilde_[h]);
  }
  k_done_ = k;
  // constant schedule; the running max keeps the monotone contract explicit
  beta_running_ = std::max(beta_running_, cal_.beta);
  injected_ = false;
}

}  // namespace pprl
