#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pprl/audit.hpp"
#include "pprl/config.hpp"
#include "pprl/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string config_stem(const std::string& path) { return fs::path(path).stem().string(); }

int do_run(const pprl::ExperimentConfig& cfg, const std::string& stem, const std::string& out_dir) {
  fs::create_directories(out_dir);
  auto records = pprl::run_experiment(cfg);
  bool wrote = false;
  for (const std::string& fmt : cfg.emit) {
    if (fmt == "csv") {
      const std::string path = (fs::path(out_dir) / (stem + ".csv")).string();
      pprl::emit_csv(records, path);
      std::cout << "wrote " << path << "\n";
      wrote = true;
    } else if (fmt == "json") {
      const std::string path = (fs::path(out_dir) / (stem + ".json")).string();
      pprl::emit_json(records, cfg, path);
      std::cout << "wrote " << path << "\n";
      wrote = true;
    } else {
      std::cerr << "unknown emit format: " << fmt << "\n";
      return 1;
    }
  }
  if (!wrote) {
    std::cerr << "config requests no output formats\n";
    return 1;
  }
  return 0;
}

std::string grid_suffix(double eps, int K, double scale) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "__eps%g_K%d_scale%g", eps, K, scale);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"privacy-preserving exploration benchmark"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string grid_path;

  CLI::App* run = app.add_subcommand("run", "run the configured experiment and emit regret data");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory");

  CLI::App* params = app.add_subcommand("params", "print derived calibration parameters");
  params->add_option("--config", config_path, "experiment config (JSON)")->required();

  CLI::App* audit = app.add_subcommand("audit", "check configured noise scales against the composition chain");
  audit->add_option("--config", config_path, "experiment config (JSON)")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "run a cartesian grid over epsilon / K / scale_override");
  sweep->add_option("--config", config_path, "experiment config (JSON)")->required();
  sweep->add_option("--grid", grid_path, "grid spec (JSON with epsilon/K/scale_override arrays)")->required();
  sweep->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    pprl::ExperimentConfig cfg = pprl::load_config(config_path);
    if (run->parsed()) return do_run(cfg, config_stem(config_path), out_dir);

    if (params->parsed()) {
      std::cout << pprl::derived_params_json(cfg) << "\n";
      return 0;
    }

    if (audit->parsed()) {
      const pprl::AuditReport report = pprl::audit_privacy_arithmetic(cfg.agent, cfg.env, cfg.K);
      std::cout << pprl::audit_report_text(report);
      return report.pass() ? 0 : 2;
    }

    if (sweep->parsed()) {
      std::ifstream gin(grid_path);
      if (!gin) {
        std::cerr << "cannot open grid: " << grid_path << "\n";
        return 1;
      }
      json grid;
      gin >> grid;
      std::vector<double> epsilons = grid.value("epsilon", std::vector<double>{cfg.agent.epsilon});
      std::vector<int> ks = grid.value("K", std::vector<int>{cfg.K});
      std::vector<double> scales =
          grid.value("scale_override", std::vector<double>{cfg.agent.scale_override});
      const std::string stem = config_stem(config_path);
      for (double eps : epsilons)
        for (int k : ks)
          for (double sc : scales) {
            pprl::ExperimentConfig c = cfg;
            c.agent.epsilon = eps;
            c.K = k;
            c.agent.scale_override = sc;
            const int rc = do_run(c, stem + grid_suffix(eps, k, sc), out_dir);
            if (rc != 0) return rc;
          }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
