#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pprl/rng.hpp"

namespace pprl {

// Deterministic per-(h,s) action choice.
using Policy = std::vector<std::vector<int>>;  // [h][s], h in 0..H-1

// Time-inhomogeneous finite-horizon MDP with known deterministic rewards in
// [0,1] and per-stage stochastic transition matrices.
struct TabularMDP {
  int S = 0;
  int A = 0;
  int H = 0;
  // rewards[h][s*A + a]
  std::vector<std::vector<double>> rewards;
  // transitions[h][(s*A + a)*S + s_next]
  std::vector<std::vector<double>> transitions;
  // initial state distribution
  std::vector<double> initial;

  double reward(int h, int s, int a) const { return rewards[h][static_cast<std::size_t>(s) * A + a]; }
  const double* row(int h, int s, int a) const {
    return &transitions[h][(static_cast<std::size_t>(s) * A + a) * S];
  }
  void validate() const;  // rows sum to one, rewards in [0,1]
};

// Hard-exploration chain: action 0 drifts back deterministically with a small
// reward at the leftmost state, action 1 pushes right with low success
// probability and pays 1 at the rightmost state. Requires A == 2.
TabularMDP make_riverswim(int S, int A, int H);
// Dense random transitions (normalized positive draws) and U[0,1] rewards.
TabularMDP make_random_dense(int S, int A, int H, std::uint64_t seed);
TabularMDP make_env(const std::string& family, int S, int A, int H, std::uint64_t seed);

// V*[h][s] for h in 0..H (V*[H] == 0), values in [0, H].
std::vector<std::vector<double>> optimal_values(const TabularMDP& mdp);
std::vector<std::vector<double>> policy_values(const TabularMDP& mdp, const Policy& pi);

int sample_initial_state(const TabularMDP& mdp, Rng& rng);
// Inverse-CDF transition on a single uniform draw; returns (s', r).
std::pair<int, double> step(const TabularMDP& mdp, int s, int a, int h, Rng& rng);

}  // namespace pprl
