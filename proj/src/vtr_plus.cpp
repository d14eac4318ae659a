#include "pprl/vtr_plus.hpp"

#include <algorithm>
#include <cmath>

namespace pprl {

namespace {
double bernstein_log(int k, int H, double p) { return std::log(24.0 * k * static_cast<double>(k) * H / p); }
}  // namespace

double VtrPlusCalibration::beta_check(int k) const {
  const double lk = bernstein_log(k, H, p);
  return 3.0 * (c_w + 1.0) * std::sqrt(lambda + upsilon1) +
         8.0 * d * std::sqrt(std::log(1.0 + K / lambda) * lk) + 4.0 * std::sqrt(static_cast<double>(d)) * lk;
}

double VtrPlusCalibration::beta_hat(int k) const {
  const double lk = bernstein_log(k, H, p);
  return 3.0 * (c_w + 1.0) * std::sqrt(lambda + upsilon1) +
         8.0 * std::sqrt(d * std::log(1.0 + K / lambda) * lk) + 4.0 * std::sqrt(static_cast<double>(d)) * lk;
}

double VtrPlusCalibration::beta_tilde(int k) const {
  const double lk = bernstein_log(k, H, p);
  const double h4 = static_cast<double>(H) * H * H * H;
  return 3.0 * (c_w + 1.0) * std::sqrt(lambda + upsilon2) +
         8.0 * std::sqrt(d * h4 * std::log(1.0 + K * h4 / (d * lambda)) * lk) + 4.0 * H * H * lk;
}

VtrPlusCalibration calibrate_vtr_plus(const VtrPlusConfig& cfg, int d, int H, double c_w) {
  VtrPlusCalibration cal;
  cal.lambda = 1.0;
  cal.K = cfg.K;
  cal.d = d;
  cal.H = H;
  cal.p = cfg.p;
  cal.c_w = c_w;
  if (cfg.regime == Regime::None) return cal;

  const double eps = cfg.budget.epsilon;
  const double delta = cfg.budget.delta;
  if (cfg.budget.pure()) throw InvalidBudget("variance-aware agent supports approximate DP only");
  const double h4 = static_cast<double>(H) * H * H * H;
  const double alpha = cfg.p / (24.0 * cfg.K * H);
  if (cfg.regime == Regime::Jdp) {
    const int k0 = static_cast<int>(ceil_robust(std::log2(static_cast<double>(cfg.K)) + 1.0));
    const double logs = std::sqrt(2.0 * H * k0 * std::log(16.0 * H / delta) * std::log(8.0 / delta) *
                                  std::log(32.0 * H * k0 / delta));
    cal.sigma1 = (64.0 * d / eps) * logs * cfg.scale_override;
    cal.sigma2 = (64.0 * h4 / eps) * logs * cfg.scale_override;
    cal.aggregate_count = k0;
  } else {
    const double logs = std::sqrt(2.0 * std::log(8.0 * H / delta));
    cal.sigma1 = (8.0 * d * H / eps) * logs * cfg.scale_override;
    cal.sigma2 = (8.0 * h4 * H / eps) * logs * cfg.scale_override;
    cal.aggregate_count = cfg.K;
  }
  cal.upsilon1 = gauss_matrix_eigen_bound(d, cal.sigma1, cal.aggregate_count, alpha);
  cal.upsilon2 = gauss_matrix_eigen_bound(d, cal.sigma2, cal.aggregate_count, alpha);
  cal.cvec1 = gauss_vector_bound(d, cal.sigma1, cal.aggregate_count, alpha);
  cal.cvec2 = gauss_vector_bound(d, cal.sigma2, cal.aggregate_count, alpha);
  cal.shift1 = 2.0 * cal.upsilon1;
  cal.shift2 = 2.0 * cal.upsilon2;
  return cal;
}

VtrPlusAgent::VtrPlusAgent(const TabularMDP& mdp, const VtrPlusConfig& cfg, std::uint64_t run_seed)
    : mdp_(mdp), enc_(mdp), cfg_(cfg), cal_(calibrate_vtr_plus(cfg, enc_.dim(), mdp.H, enc_.c_w())),
      run_seed_(run_seed) {
  const int d = enc_.dim();
  lam1_acc_.assign(mdp.H, SymmetricMatrix::identity(d, cal_.lambda));
  lam2_acc_.assign(mdp.H, SymmetricMatrix::identity(d, cal_.lambda));
  u1_acc_.assign(mdp.H, Vec(d, 0.0));
  u2_acc_.assign(mdp.H, Vec(d, 0.0));
  lam1_tilde_ = lam1_acc_;
  lam2_tilde_ = lam2_acc_;
  u1_ = u1_acc_;
  u2_ = u2_acc_;
  w1_.assign(mdp.H, Vec(d, 0.0));
  w2_.assign(mdp.H, Vec(d, 0.0));
  if (cfg.regime == Regime::Jdp) {
    for (int h = 0; h < mdp.H; ++h) {
      const auto hh = static_cast<std::uint64_t>(h);
      trees_mat1_.emplace_back(TreePayload::GaussianMatrix, d, cal_.sigma1,
                               mix_seed({run_seed, rng_role::kTree, hh, 10}), cfg.K);
      trees_vec1_.emplace_back(TreePayload::GaussianVector, d, cal_.sigma1,
                               mix_seed({run_seed, rng_role::kTree, hh, 11}), cfg.K);
      trees_mat2_.emplace_back(TreePayload::GaussianMatrix, d, cal_.sigma2,
                               mix_seed({run_seed, rng_role::kTree, hh, 12}), cfg.K);
      trees_vec2_.emplace_back(TreePayload::GaussianVector, d, cal_.sigma2,
                               mix_seed({run_seed, rng_role::kTree, hh, 13}), cfg.K);
    }
  }
  q_.assign(mdp.H, std::vector<double>(static_cast<std::size_t>(mdp.S) * mdp.A, 0.0));
  v_.assign(mdp.H + 1, std::vector<double>(mdp.S, 0.0));
  policy_.assign(mdp.H, std::vector<int>(mdp.S, 0));
}

void VtrPlusAgent::inject_weights(const std::vector<Vec>& w1, const std::vector<Vec>& w2,
                                  double beta_hat, double beta_check, double beta_tilde) {
  w1_ = w1;
  w2_ = w2;
  beta_hat_now_ = beta_hat;
  beta_check_now_ = beta_check;
  beta_tilde_now_ = beta_tilde;
  injected_ = true;
  chol1_.clear();
  chol2_.clear();
  for (int h = 0; h < mdp_.H; ++h) {
    chol1_.push_back(Cholesky::factor(lam1_tilde_[h]));
    chol2_.push_back(Cholesky::factor(lam2_tilde_[h]));
  }
  plan();
}

void VtrPlusAgent::plan() {
  const int H = mdp_.H;
  const int S = mdp_.S;
  const int A = mdp_.A;
  std::fill(v_[H].begin(), v_[H].end(), 0.0);
  double worst1 = 0.0, worst2 = 0.0;
  for (int h = H - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      double best = -1.0;
      int best_a = 0;
      for (int a = 0; a < A; ++a) {
        Vec phi = enc_.phi_v(v_[h + 1], s, a);
        double qv = mdp_.reward(h, s, a) + dot(phi, w1_[h]) +
                    beta_hat_now_ * std::sqrt(std::max(0.0, chol1_[h].inv_quadratic(phi)));
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
    Vec diff1 = enc_.true_w(h);
    axpy(-1.0, w1_[h], diff1);
    worst1 = std::max(worst1, dot(diff1, lam1_tilde_[h].multiply(diff1)));
    Vec diff2 = enc_.true_w(h);
    axpy(-1.0, w2_[h], diff2);
    worst2 = std::max(worst2, dot(diff2, lam2_tilde_[h].multiply(diff2)));
  }
  coverage_ok_ = worst1 <= beta_hat_now_ * beta_hat_now_ * (1.0 + 1e-12) &&
                 worst2 <= beta_tilde_now_ * beta_tilde_now_ * (1.0 + 1e-12);
}

void VtrPlusAgent::begin_episode() {
  const int k = k_done_ + 1;
  if (!injected_) {
    beta_hat_now_ = cal_.beta_hat(k);
    beta_check_now_ = cal_.beta_check(k);
    beta_tilde_now_ = cal_.beta_tilde(k);
  }
  chol1_.clear();
  chol2_.clear();
  for (int h = 0; h < mdp_.H; ++h) {
    chol1_.push_back(Cholesky::factor(lam1_tilde_[h]));
    chol2_.push_back(Cholesky::factor(lam2_tilde_[h]));
  }
  plan();
}

int VtrPlusAgent::act(int h, int s) const { return policy_[h][s]; }

VtrPlusAgent::StageStats VtrPlusAgent::variance_stats(int h, const Transition& t) const {
  const int H = mdp_.H;
  const int d = enc_.dim();
  std::vector<double> vsq(mdp_.S);
  for (int s = 0; s < mdp_.S; ++s) vsq[s] = v_[h + 1][s] * v_[h + 1][s];
  Vec phi1 = enc_.phi_v(v_[h + 1], t.s, t.a);
  Vec phi2 = enc_.phi_v(vsq, t.s, t.a);
  const double h2 = static_cast<double>(H) * H;
  StageStats st;
  const double second = std::clamp(dot(phi2, w2_[h]), 0.0, h2);
  const double first = std::clamp(dot(phi1, w1_[h]), 0.0, static_cast<double>(H));
  st.vbar = second - first * first;
  const double e1 = std::min(h2, 2.0 * H * beta_check_now_ *
                                     std::sqrt(std::max(0.0, chol1_[h].inv_quadratic(phi1))));
  const double e2 = std::min(h2, beta_tilde_now_ *
                                     std::sqrt(std::max(0.0, chol2_[h].inv_quadratic(phi2))));
  st.e_term = e1 + e2;
  st.sigma_bar = std::sqrt(std::max(h2 / d, st.vbar + st.e_term));
  return st;
}

void VtrPlusAgent::complete_episode(const Trajectory& traj) {
  const int H = mdp_.H;
  const int d = enc_.dim();
  const int k = k_done_ + 1;
  last_payload_.clear();
  last_payload_.reserve(H);
  std::vector<double> vsq(mdp_.S);
  for (int h = 0; h < H; ++h) {
    const Transition& t = traj[h];
    for (int s = 0; s < mdp_.S; ++s) vsq[s] = v_[h + 1][s] * v_[h + 1][s];
    Vec phi1 = enc_.phi_v(v_[h + 1], t.s, t.a);
    Vec phi2 = enc_.phi_v(vsq, t.s, t.a);
    const StageStats st = variance_stats(h, t);
    const double weight = 1.0 / (st.sigma_bar * st.sigma_bar);

    StagePayload pay{SymmetricMatrix(d), Vec(d, 0.0), SymmetricMatrix(d), Vec(d, 0.0)};
    pay.design1.add_outer(phi1, weight);
    pay.response1 = phi1;
    for (double& e : pay.response1) e *= weight * v_[h + 1][t.s_next];
    pay.design2.add_outer(phi2);
    pay.response2 = phi2;
    for (double& e : pay.response2) e *= vsq[t.s_next];

    if (cfg_.regime == Regime::Ldp) {
      const auto kk = static_cast<std::uint64_t>(k);
      const auto hh = static_cast<std::uint64_t>(h);
      pay.design1 += sample_symmetric_gaussian(d, cal_.sigma1,
                                               mix_seed({run_seed_, rng_role::kUser, kk, hh, 0}));
      axpy(1.0, sample_gaussian_vector(d, cal_.sigma1, mix_seed({run_seed_, rng_role::kUser, kk, hh, 1})),
           pay.response1);
      pay.design2 += sample_symmetric_gaussian(d, cal_.sigma2,
                                               mix_seed({run_seed_, rng_role::kUser, kk, hh, 2}));
      axpy(1.0, sample_gaussian_vector(d, cal_.sigma2, mix_seed({run_seed_, rng_role::kUser, kk, hh, 3})),
           pay.response2);
    }
    lam1_acc_[h] += pay.design1;
    axpy(1.0, pay.response1, u1_acc_[h]);
    lam2_acc_[h] += pay.design2;
    axpy(1.0, pay.response2, u2_acc_[h]);
    last_payload_.push_back(std::move(pay));
  }
  for (int h = 0; h < H; ++h) {
    lam1_tilde_[h] = lam1_acc_[h];
    lam2_tilde_[h] = lam2_acc_[h];
    u1_[h] = u1_acc_[h];
    u2_[h] = u2_acc_[h];
    if (cfg_.regime == Regime::Jdp) {
      lam1_tilde_[h] += trees_mat1_[h].prefix_matrix(k);
      lam1_tilde_[h].add_diagonal(cal_.shift1);
      lam2_tilde_[h] += trees_mat2_[h].prefix_matrix(k);
      lam2_tilde_[h].add_diagonal(cal_.shift2);
      axpy(1.0, trees_vec1_[h].prefix_vector(k), u1_[h]);
      axpy(1.0, trees_vec2_[h].prefix_vector(k), u2_[h]);
    } else if (cfg_.regime == Regime::Ldp) {
      lam1_tilde_[h].add_diagonal(cal_.shift1);
      lam2_tilde_[h].add_diagonal(cal_.shift2);
    }
    w1_[h] = psd_solve(lam1_tilde_[h], u1_[h]);
    w2_[h] = psd_solve(lam2_tilde_[h], u2_[h]);
  }
  k_done_ = k;
  injected_ = false;
}

}  // namespace pprl
