#pragma once
// Correlated bivariate log-normal event times, calibrated per combo so that
// the window probability and the first-cycle probability match the scenario.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "combodose/core.hpp"
#include "combodose/stats.hpp"

namespace combodose {

struct LognormalMarginal {
  double mu = 0.0;
  double sigma = 1.0;
  bool never = false;  // no event ever (zero probability)

  /// Event time for a standard-normal latent draw; +inf when `never`.
  double time(double z) const {
    if (never) return std::numeric_limits<double>::infinity();
    return std::exp(mu + sigma * z);
  }
  double cdf(double t) const {
    if (never || t <= 0.0) return 0.0;
    return stats::normal_cdf((std::log(t) - mu) / sigma);
  }
};

struct LognormalParams {
  LognormalMarginal tox;
  LognormalMarginal act;
  double rho = -0.5;
};

namespace detail {
// keeps the probit finite for a window probability of exactly one
constexpr double kProbCeil = 1.0 - 1e-12;
}

/// Two-quantile fit: P(t <= 1) = p_cycle1 and P(t <= tau) = p_window.
inline LognormalMarginal solve_lognormal(double p_window, double p_cycle1, int tau) {
  COMBODOSE_REQUIRE(p_window >= 0.0 && p_window <= 1.0, "solve_lognormal: p_window must lie in [0,1]");
  COMBODOSE_REQUIRE(tau >= 1, "solve_lognormal: tau must be >= 1");
  LognormalMarginal m;
  if (p_window == 0.0) {
    m.never = true;
    return m;
  }
  const double pw = std::min(p_window, detail::kProbCeil);
  if (tau == 1) {
    // only one constraint: fix the spread and match the window probability
    m.sigma = 1.0;
    m.mu = -stats::normal_quantile(pw);
    return m;
  }
  COMBODOSE_REQUIRE(p_cycle1 > 0.0 && p_cycle1 < pw, "solve_lognormal: need 0 < p_cycle1 < p_window");
  const double z1 = stats::normal_quantile(p_cycle1);
  const double zw = stats::normal_quantile(pw);
  m.sigma = std::log(static_cast<double>(tau)) / (zw - z1);
  m.mu = -m.sigma * z1;
  return m;
}

inline std::vector<LognormalParams> scenario_params(const ScenarioSpec& s, double rho = -0.5) {
  s.validate();
  std::vector<LognormalParams> out(s.grid.size());
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    const double pt = s.p_tox[k], pa = s.p_act[k];
    out[k].tox = solve_lognormal(pt, s.tox_cycle1_fraction * pt, s.tau);
    const double act_share = s.act_equal_split ? 1.0 / s.tau : s.tox_cycle1_fraction;
    out[k].act = solve_lognormal(pa, act_share * pa, s.tau);
    out[k].rho = rho;
  }
  return out;
}

/// Correlated standard-normal pair for one pseudo-patient. Every (stream,
/// patient) key maps to its own deterministic draw, independent of the order
/// in which patients are generated.
struct LatentPair {
  double zT = 0.0;
  double zA = 0.0;
};

inline LatentPair latent_pair(std::uint64_t stream_seed, std::uint64_t patient, double rho) {
  const std::uint64_t base = stats::derive_seed(stream_seed, patient, 0x7a11ULL);
  const double e1 = stats::normal_quantile(stats::to_unit_open(stats::mix64(base)));
  const double e2 = stats::normal_quantile(stats::to_unit_open(stats::mix64(base ^ 0x5bd1e995ULL)));
  return {e1, rho * e1 + std::sqrt(1.0 - rho * rho) * e2};
}

struct EventTimes {
  double t_tox = std::numeric_limits<double>::infinity();
  double t_act = std::numeric_limits<double>::infinity();
};

inline EventTimes generate_patient(const LognormalParams& p, const LatentPair& z) {
  return {p.tox.time(z.zT), p.act.time(z.zA)};
}

inline std::optional<double> finite_or_none(double t) {
  if (std::isfinite(t)) return t;
  return std::nullopt;
}

inline PatientRecord make_patient(DoseCombo combo, double entry, const EventTimes& e) {
  return {combo, entry, finite_or_none(e.t_tox), finite_or_none(e.t_act)};
}

}  // namespace combodose
