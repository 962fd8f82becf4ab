#pragma once
// Uniform interface over the three designs: configuration and one posterior
// evaluation at a given clock time.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "combodose/blrm.hpp"
#include "combodose/boin12.hpp"
#include "combodose/core.hpp"
#include "combodose/pocrm.hpp"
#include "combodose/posterior.hpp"
#include "combodose/rules.hpp"
#include "combodose/sampler.hpp"

namespace combodose {

enum class DesignKind { pocrm, blrm, boin12 };

inline std::string to_string(DesignKind d) {
  switch (d) {
    case DesignKind::pocrm: return "pocrm";
    case DesignKind::blrm: return "blrm";
    case DesignKind::boin12: return "boin12";
  }
  return "pocrm";
}

inline DesignKind parse_design(const std::string& s) {
  if (s == "pocrm") return DesignKind::pocrm;
  if (s == "blrm") return DesignKind::blrm;
  if (s == "boin12") return DesignKind::boin12;
  throw InputError("unknown design '" + s + "' (expected pocrm|blrm|boin12)");
}

inline bool is_model_based(DesignKind d) { return d != DesignKind::boin12; }

/// Which evidence drives the lowest-unsafe and highest-very-safe stopping rules.
enum class Rule23Estimator { beta_binomial, design_posterior };

inline std::string to_string(Rule23Estimator e) {
  return e == Rule23Estimator::beta_binomial ? "beta_binomial" : "design_posterior";
}

inline Rule23Estimator parse_rule23(const std::string& s) {
  if (s == "beta_binomial") return Rule23Estimator::beta_binomial;
  if (s == "design_posterior") return Rule23Estimator::design_posterior;
  throw InputError("unknown rule-2/3 estimator '" + s + "' (expected beta_binomial|design_posterior)");
}

struct TrialConfig {
  DesignKind design = DesignKind::pocrm;
  int cohort_size = 3;
  DoseCombo start{2, 2};
  TargetSpec targets{};
  RuleConfig rules{};
  UtilityWeights weights{};
  BoinConfig boin{};
  SamplerConfig sampler{};
  PocrmHyper pocrm{};
  BlrmHyper blrm{};
  std::optional<std::pair<Skeleton, Skeleton>> skeletons;  // (activity, toxicity)
  std::optional<std::pair<OrderingSet, OrderingSet>> orderings;
  Rule23Estimator rule23 = Rule23Estimator::beta_binomial;
  bool safety_only = false;  // toxicity model alone; pick the combo closest to the target
  bool record_summaries = false;

  void validate(const DoseGrid& grid) const {
    COMBODOSE_REQUIRE(cohort_size >= 1, "config: cohort_size must be >= 1");
    COMBODOSE_REQUIRE(grid.contains(start), "config: start combo " + to_string(start) + " is outside the " +
                                                grid.shape() + " grid");
    targets.validate();
    rules.validate();
    weights.validate();
    boin.table.validate();
    sampler.validate();
    if (design == DesignKind::pocrm) {
      pocrm.validate();
      const auto [sa, st] = skeletons ? *skeletons : default_skeletons(grid);
      sa.validate(grid.size());
      st.validate(grid.size());
      const auto [oa, ot] = orderings ? *orderings : std::pair{default_orderings(grid), default_orderings(grid)};
      oa.validate(grid);
      ot.validate(grid);
    }
    if (design == DesignKind::blrm) blrm.validate();
  }
};

/// Result of fitting a design to the data seen at one clock time.
struct DesignEvaluation {
  std::vector<bool> admissible;
  std::vector<double> criterion;       // larger is better
  std::vector<double> prob_tox_above;  // P(piT > phi_T)
  std::vector<PosteriorSummary> summaries;
  std::vector<BoinComboState> boin;  // boin12 only
  int order_A = -1;
  int order_T = -1;
  double acceptance = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<WeightedRecord> design_records(const std::vector<Observation>& obs, bool safety_only) {
  if (!safety_only) return group_observations(obs);
  std::vector<Observation> t = obs;
  for (auto& o : t) {
    o.o.y_A = 0;
    o.o.w_A = 0.0;
  }
  return group_observations(t);
}

inline void fill_model_criteria(const PosteriorDraws& d, const TrialConfig& cfg, const DoseGrid& grid,
                                DesignEvaluation& ev) {
  const std::size_t n = grid.size();
  ev.admissible.assign(n, false);
  ev.criterion.assign(n, 0.0);
  ev.prob_tox_above.assign(n, 0.0);
  const auto& t = cfg.targets;
  for (std::size_t c = 0; c < n; ++c) {
    double safe = 0.0, active = 0.0, above = 0.0, util = 0.0;
    for (int k = 0; k < d.n_draws; ++k) {
      const double pt = d.T(k, c), pa = d.A(k, c);
      safe += pt < t.phi_T;
      active += pa > t.phi_A;
      above += pt > t.phi_T;
      util += utility_model_based(pa, pt, cfg.weights, t.phi_T);
    }
    const double m = d.n_draws;
    ev.prob_tox_above[c] = above / m;
    if (cfg.safety_only) {
      ev.admissible[c] = safe / m > t.q_T;
      ev.criterion[c] = -std::abs(stats::quantile(d.column_T(c), 0.5) - t.phi_T);
    } else {
      ev.admissible[c] = safe / m > t.q_T && active / m > t.q_A;
      ev.criterion[c] = util / m;
    }
    if (cfg.record_summaries) {
      auto s = summarize_draws(d, c, grid.combo(c), t);
      s.criterion = ev.criterion[c];
      s.admissible = ev.admissible[c];
      ev.summaries.push_back(s);
    }
  }
}

}  // namespace detail

inline DesignEvaluation evaluate_design(const TrialConfig& cfg, const DoseGrid& grid,
                                        const std::vector<Observation>& obs, std::uint64_t seed) {
  DesignEvaluation ev;
  SamplerConfig sc = cfg.sampler;
  sc.seed = seed;
  if (cfg.design == DesignKind::pocrm) {
    const auto recs = detail::design_records(obs, cfg.safety_only);
    const auto [sa, st] = cfg.skeletons ? *cfg.skeletons : default_skeletons(grid);
    const auto ords = cfg.orderings ? *cfg.orderings : std::pair{default_orderings(grid), default_orderings(grid)};
    const auto fit = pocrm_fit(recs, grid, sa, st, ords.first, ords.second, cfg.pocrm, sc);
    ev.order_A = static_cast<int>(fit.order_A);
    ev.order_T = static_cast<int>(fit.order_T);
    ev.acceptance = fit.params.acceptance;
    ev.warnings = fit.params.warnings;
    detail::fill_model_criteria(fit.draws, cfg, grid, ev);
  } else if (cfg.design == DesignKind::blrm) {
    const auto recs = detail::design_records(obs, cfg.safety_only);
    const auto fit = blrm_fit(recs, grid, cfg.blrm, sc);
    ev.acceptance = fit.params.acceptance;
    ev.warnings = fit.params.warnings;
    detail::fill_model_criteria(fit.draws, cfg, grid, ev);
  } else {
    ev.boin = boin_state(grid, obs, cfg.boin.table, cfg.targets);
    const std::size_t n = grid.size();
    ev.admissible.resize(n);
    ev.criterion.resize(n);
    ev.prob_tox_above.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
      const auto& s = ev.boin[c];
      ev.admissible[c] = cfg.safety_only ? s.prob_safe > cfg.targets.q_T : s.admissible;
      ev.criterion[c] = cfg.safety_only ? -std::abs(s.pi_hat_T - cfg.targets.phi_T) : s.exceedance;
      ev.prob_tox_above[c] = 1.0 - s.prob_safe;
      if (cfg.record_summaries) {
        PosteriorSummary p;
        p.combo = grid.combo(c);
        const double aT = 1.0 + s.tox.events, bT = 1.0 + s.tox.non_events + s.tox.pending_w;
        const double aA = 1.0 + s.act.events, bA = 1.0 + s.act.non_events + s.act.pending_w;
        p.piT_median = boost::math::ibeta_inv(aT, bT, 0.5);
        p.piT_lo = boost::math::ibeta_inv(aT, bT, 0.05);
        p.piT_hi = boost::math::ibeta_inv(aT, bT, 0.95);
        p.piA_median = boost::math::ibeta_inv(aA, bA, 0.5);
        p.piA_lo = boost::math::ibeta_inv(aA, bA, 0.05);
        p.piA_hi = boost::math::ibeta_inv(aA, bA, 0.95);
        p.prob_safe = s.prob_safe;
        p.prob_active = s.prob_active;
        p.criterion = ev.criterion[c];
        p.admissible = ev.admissible[c];
        p.n = s.n;
        ev.summaries.push_back(p);
      }
    }
  }
  if (cfg.record_summaries) {
    std::vector<int> counts(grid.size(), 0);
    for (const auto& o : obs) ++counts[o.combo];
    for (std::size_t c = 0; c < ev.summaries.size(); ++c) ev.summaries[c].n = counts[c];
  }
  return ev;
}

}  // namespace combodose
