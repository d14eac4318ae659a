#pragma once

#include <string>
#include <vector>

#include "pprl/config.hpp"

namespace pprl {

struct RegretRow {
  int episode = 0;  // 1-based
  double inst_regret = 0.0;
  double cum_regret = 0.0;
  double beta = 0.0;
  int batch = 0;
  bool coverage = true;
};

struct RegretRecord {
  std::string algorithm;
  std::string regime;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::vector<RegretRow> rows;
};

// One full seeded run: plan / act / privatize / update for K episodes with
// exact per-episode policy evaluation against the DP oracle.
RegretRecord run_single(const ExperimentConfig& cfg, const TabularMDP& mdp, std::uint64_t seed);

// Fans seeds out to a worker pool (PPRL_WORKERS, default hardware
// concurrency); output order is (seed, episode) regardless of scheduling.
std::vector<RegretRecord> run_experiment(const ExperimentConfig& cfg);

// Header: algorithm,regime,epsilon,delta,seed,episode,inst_regret,cum_regret,
// beta,batch,coverage. Floats at 17 significant digits, LF line endings.
void emit_csv(const std::vector<RegretRecord>& records, const std::string& path);
void emit_json(const std::vector<RegretRecord>& records, const ExperimentConfig& cfg,
               const std::string& path);
std::vector<RegretRecord> load_records_json(const std::string& path);

}  // namespace pprl
