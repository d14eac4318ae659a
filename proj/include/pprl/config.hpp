#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pprl/agent.hpp"

namespace pprl {

struct EnvSpec {
  std::string family = "random_dense";
  int S = 2, A = 2, H = 2;
  std::uint64_t seed = 0;
};

struct AgentSpec {
  std::string algorithm = "ucrl_vtr";  // ucrl_vtr | ucrl_vtr_plus | lsvi_ucb_batch
  std::string regime = "none";         // none | jdp | ldp
  std::string dist = "gaussian";       // gaussian | laplace
  std::string variant = "approx_jdp";  // lsvi only: approx_jdp | pure_jdp | non_batched
  double epsilon = 0.5;
  double delta = 0.1;
  double p = 0.1;
  double scale_override = 1.0;
};

struct ExperimentConfig {
  EnvSpec env;
  AgentSpec agent;
  int K = 1;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> emit = {"csv", "json"};
  std::string name = "experiment";
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);

TabularMDP build_env(const EnvSpec& spec);
std::unique_ptr<Agent> build_agent(const TabularMDP& mdp, const AgentSpec& spec, int K,
                                   std::uint64_t run_seed);
// Derived calibration/parameter dump for the `params` subcommand and the
// JSON config echo.
std::string derived_params_json(const ExperimentConfig& cfg);

Regime parse_regime(const std::string& s);
NoiseDist parse_dist(const std::string& s);

}  // namespace pprl
