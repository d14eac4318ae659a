#include "pprl/mdp.hpp"

#include <cmath>
#include <stdexcept>

namespace pprl {

void TabularMDP::validate() const {
  if (S < 1 || A < 1 || H < 1) throw std::invalid_argument("mdp dimensions must be positive");
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const double r = reward(h, s, a);
        if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("reward outside [0,1]");
        double sum = 0.0;
        const double* p = row(h, s, a);
        for (int sn = 0; sn < S; ++sn) {
          if (p[sn] < 0.0) throw std::invalid_argument("negative transition probability");
          sum += p[sn];
        }
        if (std::fabs(sum - 1.0) > 1e-12) throw std::invalid_argument("transition row does not sum to 1");
      }
    }
  }
  double isum = 0.0;
  for (double x : initial) isum += x;
  if (std::fabs(isum - 1.0) > 1e-12) throw std::invalid_argument("initial distribution does not sum to 1");
}

TabularMDP make_riverswim(int S, int A, int H) {
  if (A != 2) throw std::invalid_argument("riverswim requires A == 2");
  if (S < 2) throw std::invalid_argument("riverswim requires S >= 2");
  TabularMDP m;
  m.S = S;
  m.A = A;
  m.H = H;
  m.rewards.assign(H, std::vector<double>(static_cast<std::size_t>(S) * A, 0.0));
  m.transitions.assign(H, std::vector<double>(static_cast<std::size_t>(S) * A * S, 0.0));
  m.initial.assign(S, 0.0);
  m.initial[0] = 1.0;
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      // action 0: swim left, deterministic
      const int left = (s > 0) ? s - 1 : 0;
      m.transitions[h][(static_cast<std::size_t>(s) * A + 0) * S + left] = 1.0;
      if (s == 0) m.rewards[h][static_cast<std::size_t>(s) * A + 0] = 0.005;
      // action 1: swim right against the current
      std::size_t base = (static_cast<std::size_t>(s) * A + 1) * S;
      if (s == 0) {
        m.transitions[h][base + 1] = 0.35;
        m.transitions[h][base + 0] = 0.65;
      } else if (s == S - 1) {
        m.transitions[h][base + s] = 0.95;
        m.transitions[h][base + s - 1] = 0.05;
        m.rewards[h][static_cast<std::size_t>(s) * A + 1] = 1.0;
      } else {
        m.transitions[h][base + s + 1] = 0.35;
        m.transitions[h][base + s] = 0.60;
        m.transitions[h][base + s - 1] = 0.05;
      }
    }
  }
  m.validate();
  return m;
}

TabularMDP make_random_dense(int S, int A, int H, std::uint64_t seed) {
  TabularMDP m;
  m.S = S;
  m.A = A;
  m.H = H;
  m.rewards.assign(H, std::vector<double>(static_cast<std::size_t>(S) * A, 0.0));
  m.transitions.assign(H, std::vector<double>(static_cast<std::size_t>(S) * A * S, 0.0));
  m.initial.assign(S, 1.0 / S);
  Rng rng(mix_seed({seed, 0xE17ULL}));
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        m.rewards[h][static_cast<std::size_t>(s) * A + a] = rng.next_double();
        std::size_t base = (static_cast<std::size_t>(s) * A + a) * S;
        double sum = 0.0;
        for (int sn = 0; sn < S; ++sn) {
          // Exp(1) draws normalize to a flat Dirichlet row, strictly dense
          const double e = -std::log(rng.next_double_pos());
          m.transitions[h][base + sn] = e;
          sum += e;
        }
        for (int sn = 0; sn < S; ++sn) m.transitions[h][base + sn] /= sum;
        // renormalize exactly against accumulated rounding
        double check = 0.0;
        for (int sn = 0; sn < S; ++sn) check += m.transitions[h][base + sn];
        m.transitions[h][base + S - 1] += 1.0 - check;
      }
    }
  }
  m.validate();
  return m;
}

TabularMDP make_env(const std::string& family, int S, int A, int H, std::uint64_t seed) {
  if (family == "riverswim") return make_riverswim(S, A, H);
  if (family == "random_dense") return make_random_dense(S, A, H, seed);
  throw std::invalid_argument("unknown env family: " + family);
}

std::vector<std::vector<double>> optimal_values(const TabularMDP& mdp) {
  std::vector<std::vector<double>> v(mdp.H + 1, std::vector<double>(mdp.S, 0.0));
  for (int h = mdp.H - 1; h >= 0; --h) {
    for (int s = 0; s < mdp.S; ++s) {
      double best = -1.0;
      for (int a = 0; a < mdp.A; ++a) {
        double q = mdp.reward(h, s, a);
        const double* p = mdp.row(h, s, a);
        for (int sn = 0; sn < mdp.S; ++sn) q += p[sn] * v[h + 1][sn];
        if (q > best) best = q;
      }
      v[h][s] = best;
    }
  }
  return v;
}

std::vector<std::vector<double>> policy_values(const TabularMDP& mdp, const Policy& pi) {
  std::vector<std::vector<double>> v(mdp.H + 1, std::vector<double>(mdp.S, 0.0));
  for (int h = mdp.H - 1; h >= 0; --h) {
    for (int s = 0; s < mdp.S; ++s) {
      const int a = pi[h][s];
      double q = mdp.reward(h, s, a);
      const double* p = mdp.row(h, s, a);
      for (int sn = 0; sn < mdp.S; ++sn) q += p[sn] * v[h + 1][sn];
      v[h][s] = q;
    }
  }
  return v;
}

int sample_initial_state(const TabularMDP& mdp, Rng& rng) {
  const double u = rng.next_double();
  double acc = 0.0;
  for (int s = 0; s < mdp.S; ++s) {
    acc += mdp.initial[s];
    if (u < acc) return s;
  }
  return mdp.S - 1;
}

std::pair<int, double> step(const TabularMDP& mdp, int s, int a, int h, Rng& rng) {
  const double u = rng.next_double();
  const double* p = mdp.row(h, s, a);
  double acc = 0.0;
  int sn = mdp.S - 1;
  for (int i = 0; i < mdp.S; ++i) {
    acc += p[i];
    if (u < acc) {
      sn = i;
      break;
    }
  }
  return {sn, mdp.reward(h, s, a)};
}

}  // namespace pprl
