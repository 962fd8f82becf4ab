#pragma once
// Joint TITE-BLRM: per-agent logistic curves combined through an odds
// multiplier for each endpoint, endpoints joined by the Gumbel kernel.

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "combodose/core.hpp"
#include "combodose/joint_outcome.hpp"
#include "combodose/pocrm.hpp"
#include "combodose/posterior.hpp"
#include "combodose/sampler.hpp"
#include "combodose/stats.hpp"

namespace combodose {

enum class DoseScaling { max_normalized, raw };

inline std::string to_string(DoseScaling s) { return s == DoseScaling::max_normalized ? "max_normalized" : "raw"; }

inline DoseScaling parse_dose_scaling(const std::string& s) {
  if (s == "max_normalized" || s == "normalized") return DoseScaling::max_normalized;
  if (s == "raw") return DoseScaling::raw;
  throw InputError("unknown dose scaling '" + s + "' (expected max_normalized|raw)");
}

/// Scaled (agent1, agent2) dose pair for every combo, in flat-index order.
inline std::vector<std::array<double, 2>> scale_doses(const DoseGrid& grid, DoseScaling mode) {
  const double m1 = grid.agent1_doses().back(), m2 = grid.agent2_doses().back();
  std::vector<std::array<double, 2>> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto d = grid.combo(k);
    double a = grid.agent1_dose(d.i), b = grid.agent2_dose(d.j);
    if (mode == DoseScaling::max_normalized) {
      a /= m1;
      b /= m2;
    }
    out[k] = {a, b};
  }
  return out;
}

/// log odds of the combination probability, computed without forming F/(1-F).
inline double combo_log_odds(double d1, double d2, double b0_1, double b1_1, double b0_2, double b1_2, double eta) {
  const double l1 = b0_1 + b1_1 * d1;  // logit F1
  const double l2 = b0_2 + b1_2 * d2;  // logit F2
  // odds0 = o1 + o2 + o1*o2  =>  log odds0 = log(exp(l1) + exp(l2) + exp(l1 + l2))
  const double m = std::max({l1, l2, l1 + l2});
  const double lo0 = m + std::log(std::exp(l1 - m) + std::exp(l2 - m) + std::exp(l1 + l2 - m));
  return lo0 + eta * d1 * d2;
}

inline double combo_prob(double d1, double d2, double b0_1, double b1_1, double b0_2, double b1_2, double eta) {
  return stats::logistic(combo_log_odds(d1, d2, b0_1, b1_1, b0_2, b1_2, eta));
}

struct BlrmHyper {
  PriorNormal2 w1_tox{-6.0, 0.0, 1.0, 0.5};
  PriorNormal2 w1_act{-3.0, -5.0, 1.0, 4.0};
  PriorNormal2 w2_tox{-5.5, 1.0, 1.0, 0.5};
  PriorNormal2 w2_act{-4.0, -5.0, 1.0, 4.0};
  double eta_scale = 1.0;  // half-normal scale
  double psi_var = 100.0;
  DoseScaling scaling = DoseScaling::max_normalized;

  void validate() const {
    w1_tox.validate("blrm agent-1 toxicity");
    w1_act.validate("blrm agent-1 activity");
    w2_tox.validate("blrm agent-2 toxicity");
    w2_act.validate("blrm agent-2 activity");
    COMBODOSE_REQUIRE(eta_scale > 0.0, "blrm: eta prior scale must be positive");
    COMBODOSE_REQUIRE(psi_var > 0.0, "blrm: psi prior variance must be positive");
  }
};

enum BlrmParam {
  kW1T_b0 = 0, kW1T_lb1, kW2T_b0, kW2T_lb1,
  kW1A_b0, kW1A_lb1, kW2A_b0, kW2A_lb1,
  kEtaT, kEtaA, kPsiB, kBlrmDim
};

inline const std::vector<std::string>& blrm_param_names() {
  static const std::vector<std::string> names{"beta0_W1T", "log_beta1_W1T", "beta0_W2T", "log_beta1_W2T",
                                              "beta0_W1A", "log_beta1_W1A", "beta0_W2A", "log_beta1_W2A",
                                              "eta_T",     "eta_A",         "psi"};
  return names;
}

/// Window probabilities at every combo for one parameter vector. The eta
/// coordinates are reflected: the model uses |eta|.
inline void blrm_probs(std::span<const double> th, const std::vector<std::array<double, 2>>& doses,
                       std::vector<double>& pT, std::vector<double>& pA) {
  const std::size_t n = doses.size();
  pT.resize(n);
  pA.resize(n);
  const double b1T1 = std::exp(th[kW1T_lb1]), b1T2 = std::exp(th[kW2T_lb1]);
  const double b1A1 = std::exp(th[kW1A_lb1]), b1A2 = std::exp(th[kW2A_lb1]);
  const double etaT = std::abs(th[kEtaT]), etaA = std::abs(th[kEtaA]);
  for (std::size_t c = 0; c < n; ++c) {
    const auto [d1, d2] = doses[c];
    pT[c] = combo_prob(d1, d2, th[kW1T_b0], b1T1, th[kW2T_b0], b1T2, etaT);
    pA[c] = combo_prob(d1, d2, th[kW1A_b0], b1A1, th[kW2A_b0], b1A2, etaA);
  }
}

struct BlrmPosterior {
  const std::vector<WeightedRecord>* recs = nullptr;
  std::vector<std::array<double, 2>> doses;
  BlrmHyper hyper;

  double log_prior(std::span<const double> th) const {
    // reflected half-normal: N(0, s^2) on the raw coordinate
    return hyper.w1_tox.logpdf(th[kW1T_b0], th[kW1T_lb1]) + hyper.w2_tox.logpdf(th[kW2T_b0], th[kW2T_lb1]) +
           hyper.w1_act.logpdf(th[kW1A_b0], th[kW1A_lb1]) + hyper.w2_act.logpdf(th[kW2A_b0], th[kW2A_lb1]) +
           stats::normal_logpdf(th[kEtaT], 0.0, hyper.eta_scale) +
           stats::normal_logpdf(th[kEtaA], 0.0, hyper.eta_scale) +
           stats::normal_logpdf(th[kPsiB], 0.0, std::sqrt(hyper.psi_var));
  }

  double log_lik(std::span<const double> th) const {
    thread_local std::vector<double> pT, pA;
    blrm_probs(th, doses, pT, pA);
    double s = 0.0;
    for (const auto& r : *recs) s += r.count * log_cell(r.wA * pA[r.combo], r.wT * pT[r.combo], th[kPsiB], r.yA, r.yT);
    return s;
  }

  double operator()(std::span<const double> th) const {
    for (double v : th) {
      if (!std::isfinite(v)) return -std::numeric_limits<double>::infinity();
    }
    return log_prior(th) + log_lik(th);
  }
};

struct BlrmFit {
  SampleResult params;  // eta coordinates already folded to |eta|
  PosteriorDraws draws;
};

inline BlrmFit blrm_fit(const std::vector<WeightedRecord>& recs, const DoseGrid& grid, const BlrmHyper& hyper,
                        const SamplerConfig& cfg) {
  hyper.validate();
  BlrmPosterior lp{&recs, scale_doses(grid, hyper.scaling), hyper};
  // prior medians; the half-normal median is 0.6745 * scale
  const double eta0 = 0.674489750196 * hyper.eta_scale;
  std::vector<double> init{hyper.w1_tox.c1, hyper.w1_tox.c2, hyper.w2_tox.c1, hyper.w2_tox.c2,
                           hyper.w1_act.c1, hyper.w1_act.c2, hyper.w2_act.c1, hyper.w2_act.c2,
                           eta0,            eta0,            0.0};
  auto sd = [](const PriorNormal2& p) { return std::array<double, 2>{std::sqrt(p.v1), std::sqrt(p.v2)}; };
  const auto s1t = sd(hyper.w1_tox), s2t = sd(hyper.w2_tox), s1a = sd(hyper.w1_act), s2a = sd(hyper.w2_act);
  std::vector<double> scale{s1t[0], s1t[1], s2t[0], s2t[1], s1a[0], s1a[1], s2a[0], s2a[1],
                            hyper.eta_scale, hyper.eta_scale, std::sqrt(hyper.psi_var)};

  BlrmFit fit;
  fit.params = sample_posterior(std::cref(lp), init, scale, cfg, blrm_param_names());
  const int n = static_cast<int>(grid.size());
  fit.draws = PosteriorDraws(fit.params.keep, n);
  std::vector<double> pT, pA;
  for (int d = 0; d < fit.params.keep; ++d) {
    blrm_probs(fit.params.row(d), lp.doses, pT, pA);
    for (int c = 0; c < n; ++c) {
      fit.draws.T(d, c) = pT[c];
      fit.draws.A(d, c) = pA[c];
    }
  }
  for (int d = 0; d < fit.params.keep; ++d) {
    auto* row = fit.params.draws.data() + static_cast<std::size_t>(d) * kBlrmDim;
    row[kEtaT] = std::abs(row[kEtaT]);
    row[kEtaA] = std::abs(row[kEtaA]);
  }
  return fit;
}

}  // namespace combodose
