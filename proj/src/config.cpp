#include "pprl/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pprl/lsvi.hpp"
#include "pprl/vtr.hpp"
#include "pprl/vtr_plus.hpp"

namespace pprl {

using nlohmann::json;

Regime parse_regime(const std::string& s) {
  if (s == "none") return Regime::None;
  if (s == "jdp") return Regime::Jdp;
  if (s == "ldp") return Regime::Ldp;
  throw std::invalid_argument("unknown regime: " + s);
}

NoiseDist parse_dist(const std::string& s) {
  if (s == "gaussian") return NoiseDist::Gaussian;
  if (s == "laplace") return NoiseDist::Laplace;
  throw std::invalid_argument("unknown noise distribution: " + s);
}

static LsviVariant parse_variant(const std::string& s) {
  if (s == "approx_jdp") return LsviVariant::ApproxJdp;
  if (s == "pure_jdp") return LsviVariant::PureJdp;
  if (s == "non_batched") return LsviVariant::NonBatched;
  throw std::invalid_argument("unknown lsvi variant: " + s);
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j = json::parse(json_text);
  ExperimentConfig cfg;
  const json& e = j.at("env");
  cfg.env.family = e.at("family").get<std::string>();
  cfg.env.S = e.at("S").get<int>();
  cfg.env.A = e.at("A").get<int>();
  cfg.env.H = e.at("H").get<int>();
  cfg.env.seed = e.value("seed", 0ULL);

  const json& a = j.at("agent");
  cfg.agent.algorithm = a.at("algorithm").get<std::string>();
  cfg.agent.regime = a.value("regime", std::string("none"));
  cfg.agent.dist = a.value("dist", std::string("gaussian"));
  cfg.agent.variant = a.value("variant", std::string("approx_jdp"));
  cfg.agent.epsilon = a.value("epsilon", 0.5);
  cfg.agent.delta = a.value("delta", 0.1);
  cfg.agent.p = a.value("p", 0.1);
  cfg.agent.scale_override = a.value("scale_override", 1.0);

  cfg.K = j.at("K").get<int>();
  if (cfg.K < 1) throw std::invalid_argument("K must be >= 1");
  cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (cfg.seeds.empty()) throw std::invalid_argument("seeds must be non-empty");
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
    for (std::size_t k = i + 1; k < cfg.seeds.size(); ++k)
      if (cfg.seeds[i] == cfg.seeds[k]) throw std::invalid_argument("seeds must be distinct");
  if (j.contains("emit")) cfg.emit = j.at("emit").get<std::vector<std::string>>();
  cfg.name = j.value("name", std::string("experiment"));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["env"] = {{"family", cfg.env.family}, {"S", cfg.env.S}, {"A", cfg.env.A},
              {"H", cfg.env.H},           {"seed", cfg.env.seed}};
  j["agent"] = {{"algorithm", cfg.agent.algorithm},
                {"regime", cfg.agent.regime},
                {"dist", cfg.agent.dist},
                {"variant", cfg.agent.variant},
                {"epsilon", cfg.agent.epsilon},
                {"delta", cfg.agent.delta},
                {"p", cfg.agent.p},
                {"scale_override", cfg.agent.scale_override}};
  j["K"] = cfg.K;
  j["seeds"] = cfg.seeds;
  j["emit"] = cfg.emit;
  j["name"] = cfg.name;
  return j.dump(2);
}

TabularMDP build_env(const EnvSpec& spec) {
  return make_env(spec.family, spec.S, spec.A, spec.H, spec.seed);
}

static PrivacyBudget budget_of(const AgentSpec& a) {
  const bool pure = (a.dist == "laplace");
  return {a.epsilon, pure ? 0.0 : a.delta};
}

std::unique_ptr<Agent> build_agent(const TabularMDP& mdp, const AgentSpec& spec, int K,
                                   std::uint64_t run_seed) {
  if (spec.algorithm == "ucrl_vtr") {
    VtrConfig cfg;
    cfg.regime = parse_regime(spec.regime);
    cfg.dist = parse_dist(spec.dist);
    cfg.budget = budget_of(spec);
    cfg.p = spec.p;
    cfg.scale_override = spec.scale_override;
    cfg.K = K;
    return std::make_unique<VtrAgent>(mdp, cfg, run_seed);
  }
  if (spec.algorithm == "ucrl_vtr_plus") {
    if (spec.dist == "laplace")
      throw std::invalid_argument("ucrl_vtr_plus has no pure-DP calibration");
    VtrPlusConfig cfg;
    cfg.regime = parse_regime(spec.regime);
    cfg.budget = budget_of(spec);
    cfg.p = spec.p;
    cfg.scale_override = spec.scale_override;
    cfg.K = K;
    return std::make_unique<VtrPlusAgent>(mdp, cfg, run_seed);
  }
  if (spec.algorithm == "lsvi_ucb_batch") {
    LinearEncoding enc(mdp);
    LsviParams par = lsvi_params(K, mdp.H, enc.dim(), budget_of(spec), spec.p,
                                 parse_variant(spec.variant), parse_regime(spec.regime),
                                 spec.scale_override);
    return std::make_unique<LsviAgent>(mdp, par, run_seed);
  }
  throw std::invalid_argument("unknown algorithm: " + spec.algorithm);
}

std::string derived_params_json(const ExperimentConfig& cfg) {
  json j;
  TabularMDP mdp = build_env(cfg.env);
  const AgentSpec& a = cfg.agent;
  if (a.algorithm == "ucrl_vtr") {
    MixtureEncoding enc(mdp);
    VtrConfig vc;
    vc.regime = parse_regime(a.regime);
    vc.dist = parse_dist(a.dist);
    vc.budget = budget_of(a);
    vc.p = a.p;
    vc.scale_override = a.scale_override;
    vc.K = cfg.K;
    VtrCalibration cal = calibrate_vtr(vc, enc.dim(), mdp.H, enc.c_w());
    j = {{"algorithm", a.algorithm}, {"d", enc.dim()},      {"C_w", enc.c_w()},
         {"lambda", cal.lambda},     {"sigma", cal.sigma},  {"aggregate_count", cal.aggregate_count},
         {"upsilon", cal.upsilon},   {"c_vec", cal.c_vec},  {"shift", cal.shift},
         {"beta", cal.beta},         {"sn_term", cal.sn_term}};
  } else if (a.algorithm == "ucrl_vtr_plus") {
    MixtureEncoding enc(mdp);
    VtrPlusConfig vc;
    vc.regime = parse_regime(a.regime);
    vc.budget = budget_of(a);
    vc.p = a.p;
    vc.scale_override = a.scale_override;
    vc.K = cfg.K;
    VtrPlusCalibration cal = calibrate_vtr_plus(vc, enc.dim(), mdp.H, enc.c_w());
    j = {{"algorithm", a.algorithm},
         {"d", enc.dim()},
         {"C_w", enc.c_w()},
         {"lambda", cal.lambda},
         {"sigma1", cal.sigma1},
         {"sigma2", cal.sigma2},
         {"aggregate_count", cal.aggregate_count},
         {"upsilon1", cal.upsilon1},
         {"upsilon2", cal.upsilon2},
         {"cvec1", cal.cvec1},
         {"cvec2", cal.cvec2},
         {"beta_hat_1", cal.beta_hat(1)},
         {"beta_check_1", cal.beta_check(1)},
         {"beta_tilde_1", cal.beta_tilde(1)},
         {"beta_hat_K", cal.beta_hat(cfg.K)},
         {"beta_check_K", cal.beta_check(cfg.K)},
         {"beta_tilde_K", cal.beta_tilde(cfg.K)}};
  } else if (a.algorithm == "lsvi_ucb_batch") {
    LinearEncoding enc(mdp);
    LsviParams par = lsvi_params(cfg.K, mdp.H, enc.dim(), budget_of(a), a.p,
                                 parse_variant(a.variant), parse_regime(a.regime), a.scale_override);
    j = {{"algorithm", a.algorithm}, {"d", par.d},
         {"lambda", par.lambda},     {"B", par.B},
         {"B0", par.B0},             {"sigma_lambda", par.sigma_lambda},
         {"sigma_u", par.sigma_u},   {"upsilon", par.upsilon},
         {"c_K", par.c_k},           {"C_vec", par.c_vec},
         {"U_K", par.u_bound},       {"chi", par.chi},
         {"beta", par.beta},         {"batch_starts", par.batch_starts}};
  } else {
    throw std::invalid_argument("unknown algorithm: " + a.algorithm);
  }
  return j.dump(2);
}

}  // namespace pprl
