#include "pprl/lsvi.hpp"

#include <algorithm>
#include <cmath>

namespace pprl {

LsviParams lsvi_params(int K, int H, int d, const PrivacyBudget& budget, double p,
                       LsviVariant variant, Regime regime, double scale_override) {
  if (K < 1) throw InvalidBudget("K must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw InvalidBudget("p must be in (0,1)");
  const double eps = budget.epsilon;
  const double delta = budget.delta;
  if (regime != Regime::None) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidBudget("epsilon must be in (0,1]");
    if (variant == LsviVariant::PureJdp) {
      if (!budget.pure()) throw InvalidBudget("pure variant requires delta == 0");
    } else if (!(delta > 0.0 && delta < 1.0)) {
      throw InvalidBudget("delta must be in (0,1)");
    }
  }
  if (regime == Regime::Ldp) throw InvalidBudget("local DP is not supported in the linear setting");

  LsviParams par;
  par.K = K;
  par.H = H;
  par.d = d;
  par.budget = budget;
  par.p = p;
  par.variant = variant;
  par.regime = regime;
  par.scale_override = scale_override;
  par.lambda = static_cast<double>(d);

  const double eff_eps = (regime == Regime::None && !(eps > 0.0)) ? 1.0 : eps;
  switch (variant) {
    case LsviVariant::ApproxJdp:
      par.B = ceil_robust(std::pow(K * eff_eps, 0.4) /
                          (std::pow(static_cast<double>(d), 0.6) * std::pow(static_cast<double>(H), 0.2)));
      break;
    case LsviVariant::PureJdp:
      par.B = ceil_robust(std::pow(K * eff_eps, 1.0 / 3.0) /
                          (std::pow(static_cast<double>(d), 2.0 / 3.0) *
                           std::pow(static_cast<double>(H), 1.0 / 3.0)));
      break;
    case LsviVariant::NonBatched:
      par.B = K;
      break;
  }
  par.B = std::max(1LL, std::min<long long>(par.B, K));
  par.B0 = ceil_robust(std::log2(static_cast<double>(par.B)) + 1.0);

  if (regime != Regime::None) {
    if (variant == LsviVariant::PureJdp) {
      // simple composition all the way down: 2 streams, H stages, B releases,
      // B0 tree levels for the design stream
      par.sigma_lambda =
          laplace_scale(2.0, eps / (2.0 * H * par.B * par.B0)) * scale_override;
      par.sigma_u = laplace_scale(4.0 * H, eps / (2.0 * H * par.B)) * scale_override;
      const double lg = std::log(6.0 * K * H * d / p);
      par.upsilon = par.sigma_lambda * par.B0 * (2.0 * d + 2.0 * std::sqrt(d * lg) + lg);
      par.c_vec = par.sigma_u * std::sqrt(static_cast<double>(d)) * lg;
    } else {
      const double lg2 = std::log(32.0 * H * par.B0 * par.B / delta);
      par.sigma_lambda = (128.0 / eps) * std::sqrt(static_cast<double>(par.B) * H * par.B0) * lg2 * lg2 *
                         scale_override;
      par.sigma_u = (128.0 / eps) * H * std::sqrt(static_cast<double>(H) * par.B) * lg2 * lg2 *
                    scale_override;
      par.upsilon = par.sigma_lambda * par.B0 *
                    (4.0 * std::sqrt(static_cast<double>(d)) + 2.0 * std::log(6.0 * K * H / p));
      par.c_vec = par.sigma_u * (std::sqrt(static_cast<double>(d)) +
                                 2.0 * std::sqrt(std::log(6.0 * K * H * d / p)));
    }
    par.c_k = d * par.upsilon;
  }

  par.u_bound = std::max(1.0, 2.0 * H * std::sqrt(d * K / (par.lambda + par.c_k)) +
                                  par.c_vec / (par.lambda + par.c_k));
  par.chi = 24.0 * 24.0 * 18.0 * static_cast<double>(K) * K * d * par.u_bound * H / p;
  par.beta = 24.0 * H * std::sqrt(d * (par.lambda + par.c_k)) * std::log(par.chi);

  const long long stride = (K + par.B - 1) / par.B;  // ceil(K/B)
  par.batch_starts.reserve(par.B);
  for (long long i = 0; i < par.B; ++i) par.batch_starts.push_back(static_cast<int>(i * stride + 1));
  return par;
}

LsviAgent::LsviAgent(const TabularMDP& mdp, const LsviParams& params, std::uint64_t run_seed)
    : mdp_(mdp), enc_(mdp), par_(params), run_seed_(run_seed) {
  const int d = enc_.dim();
  lambda_acc_.assign(mdp.H, SymmetricMatrix::identity(d, par_.lambda));
  lambda_tilde_ = lambda_acc_;
  w_tilde_.assign(mdp.H, Vec(d, 0.0));
  beta_now_ = par_.beta;
  if (par_.regime != Regime::None) {
    const TreePayload kind = (par_.variant == LsviVariant::PureJdp) ? TreePayload::LaplaceMatrix
                                                                    : TreePayload::GaussianMatrix;
    for (int h = 0; h < mdp.H; ++h)
      trees_.emplace_back(kind, d, par_.sigma_lambda,
                          mix_seed({run_seed, rng_role::kTree, static_cast<std::uint64_t>(h)}),
                          static_cast<int>(par_.B));
  }
  eta_.assign(par_.B + 1, std::vector<Vec>(mdp.H, Vec(d, 0.0)));
  for (long long i = 1; i <= par_.B; ++i)
    for (int h = 0; h < mdp.H; ++h) {
      const std::uint64_t seed = mix_seed({run_seed, rng_role::kPresample, static_cast<std::uint64_t>(i),
                                           static_cast<std::uint64_t>(h)});
      if (par_.regime == Regime::None) continue;
      eta_[i][h] = (par_.variant == LsviVariant::PureJdp)
                       ? sample_laplace_vector(d, par_.sigma_u, seed)
                       : sample_gaussian_vector(d, par_.sigma_u, seed);
    }
  q_.assign(mdp.H, std::vector<double>(static_cast<std::size_t>(mdp.S) * mdp.A, 0.0));
  v_.assign(mdp.H + 1, std::vector<double>(mdp.S, 0.0));
  policy_.assign(mdp.H, std::vector<int>(mdp.S, 0));
  refresh_tables();
}

void LsviAgent::inject_weights(const std::vector<Vec>& w, double beta) {
  w_tilde_ = w;
  beta_now_ = beta;
  injected_ = true;
  refresh_tables();
}

void LsviAgent::refresh_tables() {
  const int H = mdp_.H;
  const int S = mdp_.S;
  const int A = mdp_.A;
  chol_.clear();
  for (int h = 0; h < H; ++h) chol_.push_back(Cholesky::factor(lambda_tilde_[h]));
  std::fill(v_[H].begin(), v_[H].end(), 0.0);
  for (int h = H - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      double best = -1.0;
      int best_a = 0;
      for (int a = 0; a < A; ++a) {
        Vec phi = enc_.phi(s, a);
        double score = dot(phi, w_tilde_[h]) +
                       beta_now_ * std::sqrt(std::max(0.0, chol_[h].inv_quadratic(phi)));
        score = std::min(static_cast<double>(H), std::max(0.0, score));
        q_[h][static_cast<std::size_t>(s) * A + a] = score;
        if (score > best) {
          best = score;
          best_a = a;
        }
      }
      v_[h][s] = best;
      policy_[h][s] = best_a;
    }
  }
}

int LsviAgent::act(int h, int s) const { return policy_[h][s]; }

void LsviAgent::complete_episode(const Trajectory& traj) {
  const int H = mdp_.H;
  last_bonus_sum_ = 0.0;
  for (int h = 0; h < H; ++h) {
    const Transition& t = traj[h];
    Vec phi = enc_.phi(t.s, t.a);
    const double bonus = 2.0 * par_.beta * std::sqrt(std::max(0.0, chol_[h].inv_quadratic(phi)));
    last_bonus_sum_ += std::min(static_cast<double>(H), bonus);
    lambda_acc_[h].add_outer(phi);
  }
  history_.push_back(traj);
  ++k_done_;
  if (b_ + 1 < par_.B && k_done_ == par_.batch_starts[b_ + 1] - 1) batch_update();
}

void LsviAgent::batch_update() {
  const int H = mdp_.H;
  const int S = mdp_.S;
  const int A = mdp_.A;
  const int d = enc_.dim();
  const int b_next = b_ + 1;

  std::vector<std::vector<double>> v_next(H + 1, std::vector<double>(S, 0.0));
  for (int h = H - 1; h >= 0; --h) {
    lambda_tilde_[h] = lambda_acc_[h];
    if (par_.regime != Regime::None) {
      lambda_tilde_[h].add_diagonal(par_.c_k + par_.upsilon);
      lambda_tilde_[h] += trees_[h].prefix_matrix(b_next);
    }
    // response vector rebuilt from scratch with the stage-(h+1) value table
    // that this same backward pass just produced
    Vec u(d, 0.0);
    for (const Trajectory& traj : history_) {
      const Transition& t = traj[h];
      u[enc_.coord(t.s, t.a)] += t.r + v_next[h + 1][t.s_next];
    }
    axpy(1.0, eta_[b_next][h], u);
    w_tilde_[h] = psd_solve(lambda_tilde_[h], u);
    Cholesky chol = Cholesky::factor(lambda_tilde_[h]);
    for (int s = 0; s < S; ++s) {
      double best = -1.0;
      for (int a = 0; a < A; ++a) {
        Vec phi = enc_.phi(s, a);
        double score = dot(phi, w_tilde_[h]) +
                       par_.beta * std::sqrt(std::max(0.0, chol.inv_quadratic(phi)));
        score = std::min(static_cast<double>(H), std::max(0.0, score));
        if (score > best) best = score;
      }
      v_next[h][s] = best;
    }
  }
  b_ = b_next;
  // greedy tables and cholesky cache from the committed state
  refresh_tables();
  if (par_.regime != Regime::None) {
    for (int h = 0; h < H; ++h) {
      if (norm2(eta_[b_next][h]) > par_.c_vec) good_event_ = false;
      if (operator_norm(trees_[h].prefix_matrix(b_next)) > par_.upsilon) good_event_ = false;
    }
  }
}

}  // namespace pprl
