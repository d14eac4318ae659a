#include "pprl/harness.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "pprl/rng.hpp"

namespace pprl {

using nlohmann::json;

namespace {
RegretRecord run_single_impl(const ExperimentConfig& cfg, const TabularMDP& mdp,
                             std::uint64_t seed) {
  auto agent = build_agent(mdp, cfg.agent, cfg.K, seed);
  const auto v_star = optimal_values(mdp);
  Rng env_rng(mix_seed({seed, rng_role::kEnv}));

  RegretRecord rec;
  rec.algorithm = cfg.agent.algorithm;
  rec.regime = cfg.agent.regime;
  rec.epsilon = cfg.agent.epsilon;
  rec.delta = (cfg.agent.dist == "laplace") ? 0.0 : cfg.agent.delta;
  rec.seed = seed;
  rec.rows.reserve(cfg.K);

  double cum = 0.0;
  for (int k = 1; k <= cfg.K; ++k) {
    agent->begin_episode();
    const int s1 = sample_initial_state(mdp, env_rng);
    Trajectory traj;
    traj.reserve(mdp.H);
    int s = s1;
    for (int h = 0; h < mdp.H; ++h) {
      const int a = agent->act(h, s);
      auto [s_next, r] = step(mdp, s, a, h, env_rng);
      traj.push_back({s, a, s_next, r});
      s = s_next;
    }
    const auto v_pi = policy_values(mdp, agent->greedy_policy());
    const double inst = v_star[0][s1] - v_pi[0][s1];
    cum += inst;
    RegretRow row;
    row.episode = k;
    row.inst_regret = inst;
    row.cum_regret = cum;
    row.beta = agent->width();
    row.batch = agent->batch_index();
    row.coverage = agent->coverage_ok();
    rec.rows.push_back(row);
    agent->complete_episode(traj);
  }
  return rec;
}
}  // namespace

RegretRecord run_single(const ExperimentConfig& cfg, const TabularMDP& mdp, std::uint64_t seed) {
  try {
    return run_single_impl(cfg, mdp, seed);
  } catch (const std::exception& e) {
    throw std::runtime_error("run " + cfg.agent.algorithm + "/" + cfg.agent.regime + " seed " +
                             std::to_string(seed) + ": " + e.what());
  }
}

std::vector<RegretRecord> run_experiment(const ExperimentConfig& cfg) {
  const TabularMDP mdp = build_env(cfg.env);
  const std::size_t n = cfg.seeds.size();
  std::vector<RegretRecord> out(n);

  unsigned workers = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("PPRL_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) workers = static_cast<unsigned>(v);
  }
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error = nullptr;
  std::mutex error_mu;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          out[i] = run_single(cfg, mdp, cfg.seeds[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

namespace {
std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}
}  // namespace

void emit_csv(const std::vector<RegretRecord>& records, const std::string& path) {
  if (records.empty()) throw std::runtime_error("no records to emit");
  std::string body = "algorithm,regime,epsilon,delta,seed,episode,inst_regret,cum_regret,beta,batch,coverage\n";
  for (const RegretRecord& rec : records) {
    for (const RegretRow& row : rec.rows) {
      body += rec.algorithm;
      body += ',';
      body += rec.regime;
      body += ',';
      body += fmt17(rec.epsilon);
      body += ',';
      body += fmt17(rec.delta);
      body += ',';
      body += std::to_string(rec.seed);
      body += ',';
      body += std::to_string(row.episode);
      body += ',';
      body += fmt17(row.inst_regret);
      body += ',';
      body += fmt17(row.cum_regret);
      body += ',';
      body += fmt17(row.beta);
      body += ',';
      body += std::to_string(row.batch);
      body += ',';
      body += (row.coverage ? "1" : "0");
      body += '\n';
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << body;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void emit_json(const std::vector<RegretRecord>& records, const ExperimentConfig& cfg,
               const std::string& path) {
  if (records.empty()) throw std::runtime_error("no records to emit");
  json j;
  j["config"] = json::parse(config_to_json(cfg));
  j["derived_params"] = json::parse(derived_params_json(cfg));
  j["records"] = json::array();
  for (const RegretRecord& rec : records) {
    json r;
    r["algorithm"] = rec.algorithm;
    r["regime"] = rec.regime;
    r["epsilon"] = rec.epsilon;
    r["delta"] = rec.delta;
    r["seed"] = rec.seed;
    json rows = json::array();
    for (const RegretRow& row : rec.rows) {
      rows.push_back({{"episode", row.episode},
                      {"inst_regret", row.inst_regret},
                      {"cum_regret", row.cum_regret},
                      {"beta", row.beta},
                      {"batch", row.batch},
                      {"coverage", row.coverage}});
    }
    r["rows"] = std::move(rows);
    j["records"].push_back(std::move(r));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<RegretRecord> load_records_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  in >> j;
  std::vector<RegretRecord> out;
  for (const json& r : j.at("records")) {
    RegretRecord rec;
    rec.algorithm = r.at("algorithm").get<std::string>();
    rec.regime = r.at("regime").get<std::string>();
    rec.epsilon = r.at("epsilon").get<double>();
    rec.delta = r.at("delta").get<double>();
    rec.seed = r.at("seed").get<std::uint64_t>();
    for (const json& row : r.at("rows")) {
      RegretRow rr;
      rr.episode = row.at("episode").get<int>();
      rr.inst_regret = row.at("inst_regret").get<double>();
      rr.cum_regret = row.at("cum_regret").get<double>();
      rr.beta = row.at("beta").get<double>();
      rr.batch = row.at("batch").get<int>();
      rr.coverage = row.at("coverage").get<bool>();
      rec.rows.push_back(rr);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace pprl
