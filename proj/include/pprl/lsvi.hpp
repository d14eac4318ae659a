#pragma once

#include <cstdint>
#include <vector>

#include "pprl/agent.hpp"
#include "pprl/dp.hpp"
#include "pprl/encoding.hpp"
#include "pprl/noise_tree.hpp"

namespace pprl {

enum class LsviVariant { ApproxJdp, PureJdp, NonBatched };

// Everything derived from (K, H, d, budget, p): batch count and schedule,
// noise scales, spectral bounds, the regularizer shift and the bonus width.
struct LsviParams {
  int K = 1, H = 1, d = 1;
  PrivacyBudget budget;
  double p = 0.1;
  LsviVariant variant = LsviVariant::ApproxJdp;
  Regime regime = Regime::Jdp;  // Regime::None zeroes all noise
  double scale_override = 1.0;

  long long B = 1;   // number of batches (and policy switches)
  long long B0 = 1;  // tree depth bound ceil(log2 B + 1)
  double lambda = 1.0;
  double sigma_lambda = 0.0;  // design-tree node scale
  double sigma_u = 0.0;       // response noise scale
  double upsilon = 0.0;       // bound on tree-prefix operator norm
  double c_k = 0.0;           // d * upsilon, extra regularization
  double c_vec = 0.0;         // bound on ||eta||
  double u_bound = 0.0;       // U_K weight-norm bound
  double chi = 0.0;
  double beta = 0.0;
  std::vector<int> batch_starts;  // k_i = i*ceil(K/B)+1, 1-based episodes
};

LsviParams lsvi_params(int K, int H, int d, const PrivacyBudget& budget, double p,
                       LsviVariant variant, Regime regime, double scale_override);

// Batched least-squares value iteration with optimistic bonuses; the policy
// switches only at the static batch boundaries, so the privacy composition
// runs over B releases rather than K.
class LsviAgent : public Agent {
 public:
  LsviAgent(const TabularMDP& mdp, const LsviParams& params, std::uint64_t run_seed);

  void begin_episode() override {}
  int act(int h, int s) const override;
  void complete_episode(const Trajectory& traj) override;
  const Policy& greedy_policy() const override { return policy_; }
  double width() const override { return par_.beta; }
  int batch_index() const override { return b_; }
  bool coverage_ok() const override { return good_event_; }
  std::string name() const override { return "lsvi_ucb_batch"; }

  const LsviParams& params() const { return par_; }
  const LinearEncoding& encoding() const { return enc_; }
  int episodes_done() const { return k_done_; }
  const SymmetricMatrix& lambda_tilde(int h) const { return lambda_tilde_[h]; }
  const Vec& w_tilde(int h) const { return w_tilde_[h]; }
  double q_value(int h, int s, int a) const { return q_[h][static_cast<std::size_t>(s) * mdp_.A + a]; }
  const std::vector<double>& v_table(int h) const { return v_[h]; }
  // sum over h of min(H, 2 beta ||phi||_{Lambda^-1}) for the last episode
  double last_bonus_sum() const { return last_bonus_sum_; }

  void inject_weights(const std::vector<Vec>& w, double beta);

 private:
  void refresh_tables();
  void batch_update();

  const TabularMDP& mdp_;
  LinearEncoding enc_;
  LsviParams par_;
  std::uint64_t run_seed_;

  std::vector<SymmetricMatrix> lambda_acc_;  // lambda I + sum phi phiᵀ
  std::vector<SymmetricMatrix> lambda_tilde_;
  std::vector<Cholesky> chol_;
  std::vector<Vec> w_tilde_;
  std::vector<NoiseTree> trees_;
  std::vector<std::vector<Vec>> eta_;  // [B][H], pre-sampled at construction

  std::vector<Trajectory> history_;
  std::vector<std::vector<double>> q_;  // [h][s*A+a]
  std::vector<std::vector<double>> v_;  // [h][s], h in [0, H]
  Policy policy_;

  int b_ = 0;
  int k_done_ = 0;
  double last_bonus_sum_ = 0.0;
  bool good_event_ = true;
  double beta_now_ = 0.0;
  bool injected_ = false;
};

}  // namespace pprl
