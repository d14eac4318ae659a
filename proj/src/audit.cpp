#include "pprl/audit.hpp"

#include <cmath>
#include <sstream>

#include "pprl/lsvi.hpp"
#include "pprl/vtr.hpp"
#include "pprl/vtr_plus.hpp"

namespace pprl {

namespace {

AuditRow make_row(const std::string& name, const PrivacyBudget& invocation, double sensitivity,
                  double required, double configured) {
  AuditRow row;
  row.mechanism = name;
  row.epsilon = invocation.epsilon;
  row.delta = invocation.delta;
  row.sensitivity = sensitivity;
  row.required_sigma = required;
  row.configured_sigma = configured;
  row.ratio = (required > 0.0) ? configured / required : 1.0;
  row.pass = row.ratio >= 1.0 - 1e-9;
  return row;
}

AuditRow gaussian_row(const std::string& name, const PrivacyBudget& invocation, double sensitivity,
                      double configured) {
  return make_row(name, invocation, sensitivity, gaussian_sigma(sensitivity, invocation), configured);
}

AuditRow laplace_row(const std::string& name, const PrivacyBudget& invocation, double sensitivity,
                     double configured) {
  return make_row(name, invocation, sensitivity, laplace_scale(sensitivity, invocation.epsilon),
                  configured);
}

}  // namespace

AuditReport audit_privacy_arithmetic(const AgentSpec& agent, const EnvSpec& env, int K) {
  AuditReport report;
  const Regime regime = parse_regime(agent.regime);
  if (regime == Regime::None) return report;  // no mechanisms to audit

  const int H = env.H;
  const bool pure = (agent.dist == "laplace");
  const PrivacyBudget total{agent.epsilon, pure ? 0.0 : agent.delta};

  if (agent.algorithm == "ucrl_vtr") {
    const int d = env.S * env.S * env.A;
    VtrConfig cfg;
    cfg.regime = regime;
    cfg.dist = parse_dist(agent.dist);
    cfg.budget = total;
    cfg.p = agent.p;
    cfg.scale_override = agent.scale_override;
    cfg.K = K;
    MixtureEncoding enc(build_env(env));
    const VtrCalibration cal = calibrate_vtr(cfg, d, H, enc.c_w());
    const double sens = 2.0 * H * static_cast<double>(H);
    const int k0 = static_cast<int>(ceil_robust(std::log2(static_cast<double>(K)) + 1.0));
    // two statistic streams share the total budget, then compose over stages
    const PrivacyBudget per_stream = simple_composition_split(total, 2);
    if (!pure) {
      const PrivacyBudget per_stage = (regime == Regime::Jdp)
                                          ? advanced_composition_split(per_stream, H)
                                          : simple_composition_split(per_stream, H);
      if (regime == Regime::Jdp) {
        const PrivacyBudget per_node = advanced_composition_split(per_stage, k0);
        report.rows.push_back(gaussian_row("design-matrix tree node", per_node, sens, cal.sigma));
        report.rows.push_back(gaussian_row("response-vector tree node", per_node, sens, cal.sigma));
      } else {
        report.rows.push_back(gaussian_row("design-matrix local randomizer", per_stage, sens, cal.sigma));
        report.rows.push_back(gaussian_row("response-vector local randomizer", per_stage, sens, cal.sigma));
      }
    } else {
      const PrivacyBudget per_stage = simple_composition_split(per_stream, H);
      if (regime == Regime::Jdp) {
        const PrivacyBudget per_node = simple_composition_split(per_stage, k0);
        report.rows.push_back(laplace_row("design-matrix tree node", per_node, sens, cal.sigma));
        report.rows.push_back(laplace_row("response-vector tree node", per_node, sens, cal.sigma));
      } else {
        report.rows.push_back(laplace_row("design-matrix local randomizer", per_stage, sens, cal.sigma));
        report.rows.push_back(laplace_row("response-vector local randomizer", per_stage, sens, cal.sigma));
      }
    }
    return report;
  }

  if (agent.algorithm == "ucrl_vtr_plus") {
    const int d = env.S * env.S * env.A;
    VtrPlusConfig cfg;
    cfg.regime = regime;
    cfg.budget = total;
    cfg.p = agent.p;
    cfg.scale_override = agent.scale_override;
    cfg.K = K;
    MixtureEncoding enc(build_env(env));
    const VtrPlusCalibration cal = calibrate_vtr_plus(cfg, d, H, enc.c_w());
    const double sens1 = 2.0 * d;  // sigma^-2-weighted first-moment statistics
    const double h4 = static_cast<double>(H) * H * H * H;
    const double sens2 = 2.0 * h4;  // second-moment statistics
    const PrivacyBudget per_stream = simple_composition_split(total, 4);
    if (regime == Regime::Jdp) {
      const int k0 = static_cast<int>(ceil_robust(std::log2(static_cast<double>(K)) + 1.0));
      const PrivacyBudget per_stage = advanced_composition_split(per_stream, H);
      const PrivacyBudget per_node = advanced_composition_split(per_stage, k0);
      report.rows.push_back(gaussian_row("weighted design tree node", per_node, sens1, cal.sigma1));
      report.rows.push_back(gaussian_row("weighted response tree node", per_node, sens1, cal.sigma1));
      report.rows.push_back(gaussian_row("second-moment design tree node", per_node, sens2, cal.sigma2));
      report.rows.push_back(gaussian_row("second-moment response tree node", per_node, sens2, cal.sigma2));
    } else {
      const PrivacyBudget per_stage = simple_composition_split(per_stream, H);
      report.rows.push_back(gaussian_row("weighted design local randomizer", per_stage, sens1, cal.sigma1));
      report.rows.push_back(gaussian_row("weighted response local randomizer", per_stage, sens1, cal.sigma1));
      report.rows.push_back(
          gaussian_row("second-moment design local randomizer", per_stage, sens2, cal.sigma2));
      report.rows.push_back(
          gaussian_row("second-moment response local randomizer", per_stage, sens2, cal.sigma2));
    }
    return report;
  }

  if (agent.algorithm == "lsvi_ucb_batch") {
    const int d = env.S * env.A;
    LsviVariant variant = LsviVariant::ApproxJdp;
    if (agent.variant == "pure_jdp") variant = LsviVariant::PureJdp;
    if (agent.variant == "non_batched") variant = LsviVariant::NonBatched;
    const LsviParams par =
        lsvi_params(K, H, d, total, agent.p, variant, regime, agent.scale_override);
    const PrivacyBudget per_stream = simple_composition_split(total, 2);
    if (variant == LsviVariant::PureJdp) {
      const PrivacyBudget per_stage = simple_composition_split(per_stream, H);
      const PrivacyBudget per_release = simple_composition_split(per_stage, static_cast<int>(par.B));
      const PrivacyBudget per_node = simple_composition_split(per_release, static_cast<int>(par.B0));
      report.rows.push_back(laplace_row("design-matrix tree node", per_node, 2.0, par.sigma_lambda));
      report.rows.push_back(laplace_row("response-vector release", per_release, 4.0 * H, par.sigma_u));
    } else {
      const PrivacyBudget per_stage = advanced_composition_split(per_stream, H);
      const PrivacyBudget per_release = advanced_composition_split(per_stage, static_cast<int>(par.B));
      const PrivacyBudget per_node = advanced_composition_split(per_release, static_cast<int>(par.B0));
      report.rows.push_back(gaussian_row("design-matrix tree node", per_node, 2.0, par.sigma_lambda));
      report.rows.push_back(gaussian_row("response-vector release", per_release, 4.0 * H, par.sigma_u));
    }
    return report;
  }

  throw std::invalid_argument("unknown algorithm: " + agent.algorithm);
}

std::string audit_report_text(const AuditReport& report) {
  std::ostringstream out;
  if (report.rows.empty()) {
    out << "no privacy mechanisms configured (regime none)\n";
    return out.str();
  }
  for (const AuditRow& r : report.rows) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%-38s eps=%.6g delta=%.6g sens=%.6g required=%.8g configured=%.8g ratio=%.6g %s\n",
                  r.mechanism.c_str(), r.epsilon, r.delta, r.sensitivity, r.required_sigma,
                  r.configured_sigma, r.ratio, r.pass ? "PASS" : "FAIL");
    out << buf;
  }
  out << (report.pass() ? "AUDIT PASS\n" : "AUDIT FAIL\n");
  return out.str();
}

}  // namespace pprl
