#pragma once

#include <string>
#include <vector>

#include "pprl/mdp.hpp"

namespace pprl {

struct Transition {
  int s = 0;
  int a = 0;
  int s_next = 0;
  double r = 0.0;
};
using Trajectory = std::vector<Transition>;  // one entry per stage h

enum class Regime { None, Jdp, Ldp };
enum class NoiseDist { Gaussian, Laplace };

// Episode protocol shared by all agents: plan, act greedily along the
// trajectory, then fold the (possibly privatized) episode statistics back in.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual void begin_episode() = 0;
  virtual int act(int h, int s) const = 0;  // h in [0, H)
  virtual void complete_episode(const Trajectory& traj) = 0;
  // Full greedy table of the policy played this episode, for exact evaluation.
  virtual const Policy& greedy_policy() const = 0;
  virtual double width() const = 0;  // confidence width in force this episode
  virtual int batch_index() const { return 0; }
  virtual bool coverage_ok() const = 0;  // good-event indicator this episode
  virtual std::string name() const = 0;
};

}  // namespace pprl
