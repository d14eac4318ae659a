#pragma once

#include <cstdint>
#include <vector>

#include "pprl/agent.hpp"
#include "pprl/dp.hpp"
#include "pprl/encoding.hpp"
#include "pprl/noise_tree.hpp"

namespace pprl {

struct VtrPlusConfig {
  Regime regime = Regime::None;
  PrivacyBudget budget;
  double p = 0.1;
  double scale_override = 1.0;
  int K = 1;
};

struct VtrPlusCalibration {
  double lambda = 1.0;
  double sigma1 = 0.0, sigma2 = 0.0;      // first/second-moment noise scales
  int aggregate_count = 0;                // K0 (JDP) or K (LDP)
  double upsilon1 = 0.0, upsilon2 = 0.0;  // eigenvalue bounds for D1, D2
  double cvec1 = 0.0, cvec2 = 0.0;        // bounds on f, g
  double shift1 = 0.0, shift2 = 0.0;      // 2*upsilon
  // k-dependent width schedules (1-based k)
  double beta_hat(int k) const;
  double beta_check(int k) const;
  double beta_tilde(int k) const;

  int K = 1, d = 1, H = 1;
  double p = 0.1, c_w = 0.0;
};

VtrPlusCalibration calibrate_vtr_plus(const VtrPlusConfig& cfg, int d, int H, double c_w);

// Variance-aware variant: a sigma^-2-weighted first-moment regression drives
// the optimistic policy while a second-moment regression feeds the variance
// estimate; four payload streams, each with its own noise channel.
class VtrPlusAgent : public Agent {
 public:
  VtrPlusAgent(const TabularMDP& mdp, const VtrPlusConfig& cfg, std::uint64_t run_seed);

  void begin_episode() override;
  int act(int h, int s) const override;
  void complete_episode(const Trajectory& traj) override;
  const Policy& greedy_policy() const override { return policy_; }
  double width() const override { return cal_.beta_hat(std::max(1, k_done_ + 1)); }
  bool coverage_ok() const override { return coverage_ok_; }
  std::string name() const override { return "ucrl_vtr_plus"; }

  const VtrPlusCalibration& calibration() const { return cal_; }
  const MixtureEncoding& encoding() const { return enc_; }
  int episodes_done() const { return k_done_; }
  const SymmetricMatrix& lambda_hat(int h) const { return lam1_tilde_[h]; }
  const SymmetricMatrix& lambda_second(int h) const { return lam2_tilde_[h]; }
  const Vec& w_hat(int h) const { return w1_[h]; }
  const Vec& w_second(int h) const { return w2_[h]; }
  const std::vector<double>& v_table(int h) const { return v_[h]; }

  struct StageStats {
    double vbar = 0.0;       // clipped variance estimate
    double e_term = 0.0;     // optimistic correction
    double sigma_bar = 0.0;  // regression weight^-1/2
  };
  // sigma-bar pieces for a (stage, transition) pair under the current state.
  StageStats variance_stats(int h, const Transition& t) const;

  struct StagePayload {
    SymmetricMatrix design1;  // sigma^-2 phi phiᵀ (+ noise under LDP)
    Vec response1;
    SymmetricMatrix design2;  // phi2 phi2ᵀ (+ noise under LDP)
    Vec response2;
  };
  const std::vector<StagePayload>& last_payload() const { return last_payload_; }

  void inject_weights(const std::vector<Vec>& w1, const std::vector<Vec>& w2,
                      double beta_hat, double beta_check, double beta_tilde);

 private:
  void plan();

  const TabularMDP& mdp_;
  MixtureEncoding enc_;
  VtrPlusConfig cfg_;
  VtrPlusCalibration cal_;
  std::uint64_t run_seed_;

  std::vector<SymmetricMatrix> lam1_acc_, lam2_acc_;
  std::vector<Vec> u1_acc_, u2_acc_;
  std::vector<SymmetricMatrix> lam1_tilde_, lam2_tilde_;
  std::vector<Vec> u1_, u2_, w1_, w2_;
  std::vector<Cholesky> chol1_, chol2_;
  std::vector<NoiseTree> trees_mat1_, trees_vec1_, trees_mat2_, trees_vec2_;

  std::vector<std::vector<double>> q_;
  std::vector<std::vector<double>> v_;
  Policy policy_;
  std::vector<StagePayload> last_payload_;

  int k_done_ = 0;
  bool coverage_ok_ = true;
  double beta_hat_now_ = 0.0, beta_check_now_ = 0.0, beta_tilde_now_ = 0.0;
  bool injected_ = false;
};

}  // namespace pprl
