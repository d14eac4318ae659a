#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pprl/agent.hpp"
#include "pprl/dp.hpp"
#include "pprl/encoding.hpp"
#include "pprl/noise_tree.hpp"

namespace pprl {

struct BetaTooSmall : std::runtime_error {
  explicit BetaTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct VtrConfig {
  Regime regime = Regime::None;
  NoiseDist dist = NoiseDist::Gaussian;
  PrivacyBudget budget;  // ignored for regime None
  double p = 0.1;
  double scale_override = 1.0;
  int K = 1;
};

// Self-normalized width term sqrt(2 H^2 log(3H (1+KH)^{d/2} / p)).
double vtr_sn_term(int d, int H, int K, double p);

// Minimal width the regret analysis accepts for bounded perturbations:
//   beta >= ((lambda + ups_high) C_w + c_vec) / sqrt(lambda + ups_low) + sn.
double vtr_beta_generic(double lambda, double c_w, double ups_low, double ups_high,
                        double c_vec, double sn_term);
// Throws BetaTooSmall when `beta` violates the condition above.
void check_beta_condition(double beta, double lambda, double c_w, double ups_low,
                          double ups_high, double c_vec, double sn_term);

// All derived noise quantities for one agent configuration. `sigma` is the
// per-sample scale after scale_override; all downstream bounds inherit it.
struct VtrCalibration {
  Regime regime = Regime::None;
  NoiseDist dist = NoiseDist::Gaussian;
  double lambda = 0.0;       // H^2
  double sigma = 0.0;        // per-sample noise scale (Gaussian sigma or Laplace b)
  int aggregate_count = 0;   // samples aggregated in the worst prefix: K0 or K
  double upsilon = 0.0;      // high-prob bound on aggregate eigenvalues
  double c_vec = 0.0;        // high-prob bound on the response perturbation
  double shift = 0.0;        // deterministic diagonal added server-side (2*upsilon)
  double beta = 0.0;         // constant width schedule
  double sn_term = 0.0;
};

VtrCalibration calibrate_vtr(const VtrConfig& cfg, int d, int H, double c_w);

// Privacy-preserving value-targeted-regression agent over a finite MDP; the
// regime selects which of the two noise channels (user-side, server-side
// tree) is active.
class VtrAgent : public Agent {
 public:
  VtrAgent(const TabularMDP& mdp, const VtrConfig& cfg, std::uint64_t run_seed);

  void begin_episode() override;
  int act(int h, int s) const override;
  void complete_episode(const Trajectory& traj) override;
  const Policy& greedy_policy() const override { return policy_; }
  double width() const override { return beta_running_; }
  bool coverage_ok() const override { return coverage_ok_; }
  std::string name() const override { return "ucrl_vtr"; }

  const VtrCalibration& calibration() const { return cal_; }
  const MixtureEncoding& encoding() const { return enc_; }
  int episodes_done() const { return k_done_; }
  const SymmetricMatrix& lambda_tilde(int h) const { return lambda_tilde_[h]; }
  const Vec& u_tilde(int h) const { return u_tilde_[h]; }
  const Vec& w_tilde(int h) const { return w_tilde_[h]; }
  double q_value(int h, int s, int a) const { return q_[h][static_cast<std::size_t>(s) * mdp_.A + a]; }
  const std::vector<double>& v_table(int h) const { return v_[h]; }  // h in [0, H]
  // per-stage indicator of ||w_h - w~_{k,h}||_{Lambda~} <= beta_k this episode
  const std::vector<bool>& stage_coverage() const { return stage_coverage_; }

  struct StagePayload {
    SymmetricMatrix design;  // X Xᵀ (+ user noise under LDP)
    Vec response;            // X y (+ user noise under LDP)
  };
  const std::vector<StagePayload>& last_payload() const { return last_payload_; }

  // Test hooks.
  void inject_weights(const std::vector<Vec>& w, double beta);
  Vec stage_feature(int h, const Transition& t) const;  // X_{k,h}
  double stage_target(int h, const Transition& t) const;

 private:
  void plan();

  const TabularMDP& mdp_;
  MixtureEncoding enc_;
  VtrConfig cfg_;
  VtrCalibration cal_;
  std::uint64_t run_seed_;

  std::vector<SymmetricMatrix> lambda_acc_;  // lambda I + sum of design payloads
  std::vector<Vec> u_acc_;
  std::vector<SymmetricMatrix> lambda_tilde_;
  std::vector<Vec> u_tilde_;
  std::vector<Vec> w_tilde_;
  std::vector<NoiseTree> mat_trees_;  // per h, JDP only
  std::vector<NoiseTree> vec_trees_;

  std::vector<std::vector<double>> q_;  // [h][s*A+a]
  std::vector<std::vector<double>> v_;  // [h][s], h in [0, H]
  Policy policy_;
  std::vector<StagePayload> last_payload_;

  int k_done_ = 0;
  double beta_running_ = 0.0;
  bool coverage_ok_ = true;
  std::vector<bool> stage_coverage_;
  bool injected_ = false;
};

}  // namespace pprl
