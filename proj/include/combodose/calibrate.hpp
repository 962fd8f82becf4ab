#pragma once
// Grid-search prior calibration: a safety-only sweep, then alternating
// activity and toxicity sweeps on joint runs, scored by the geometric mean of
// per-scenario correct-selection proportions.

#include <functional>
#include <string>
#include <vector>

#include "combodose/blrm.hpp"
#include "combodose/design.hpp"
#include "combodose/engine.hpp"
#include "combodose/metrics.hpp"
#include "combodose/pocrm.hpp"
#include "combodose/stats.hpp"

namespace combodose {

/// Candidate values per hyperparameter of one endpoint's normal prior; the
/// sweep visits their Cartesian product.
struct PriorGrid {
  std::vector<double> c1, c2, v1, v2;

  std::vector<PriorNormal2> cells() const {
    COMBODOSE_REQUIRE(!c1.empty() && !c2.empty() && !v1.empty() && !v2.empty(),
                      "calibrate: every hyperparameter needs at least one candidate value");
    std::vector<PriorNormal2> out;
    for (double a : c1)
      for (double b : c2)
        for (double va : v1)
          for (double vb : v2) {
            PriorNormal2 p{a, b, va, vb};
            p.validate("calibration grid");
            out.push_back(p);
          }
    return out;
  }
};

struct CalibrationConfig {
  PriorGrid tox;
  PriorGrid act;
  int replicates = 50;
  double epsilon = 0.005;
  int max_rounds = 5;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct CalibrationTraceRow {
  int round = 0;
  std::string endpoint;  // "safety", "activity" or "toxicity"
  PriorNormal2 cell;
  std::string scenario;
  double pcs = 0.0;
  double gmean = 0.0;
};

struct CalibrationResult {
  PriorNormal2 tox;
  PriorNormal2 act;
  double gmean = 0.0;
  int rounds = 0;
  std::vector<CalibrationTraceRow> trace;
  std::vector<std::string> warnings;
};

/// Writes one endpoint's prior into the design hyperparameters. For the
/// combination model the same prior is given to both agents.
inline void apply_prior(TrialConfig& cfg, Endpoint e, const PriorNormal2& p) {
  if (cfg.design == DesignKind::pocrm) {
    (e == Endpoint::toxicity ? cfg.pocrm.tox : cfg.pocrm.act) = p;
  } else if (cfg.design == DesignKind::blrm) {
    if (e == Endpoint::toxicity) {
      cfg.blrm.w1_tox = cfg.blrm.w2_tox = p;
    } else {
      cfg.blrm.w1_act = cfg.blrm.w2_act = p;
    }
  } else {
    throw InputError("calibrate: boin12 has no prior hyperparameters");
  }
}

/// Proportion of correct selections of one configuration on one scenario.
using PcsEvaluator = std::function<double(const TrialConfig&, const ScenarioSpec&, int replicates,
                                          std::uint64_t seed)>;

inline double simulate_pcs(const TrialConfig& cfg, const ScenarioSpec& s, int replicates, std::uint64_t seed,
                           unsigned threads = 1) {
  const auto cls = classify_for(s, cfg);
  const auto trials = run_trials(s, cfg, replicates, seed, threads);
  int hits = 0;
  for (const auto& t : trials) hits += is_correct_selection(t.selection, cls);
  return static_cast<double>(hits) / replicates;
}

inline CalibrationResult calibrate(const TrialConfig& base, const std::vector<ScenarioSpec>& scenarios,
                                   const CalibrationConfig& cc, PcsEvaluator eval = {}) {
  COMBODOSE_REQUIRE(!scenarios.empty(), "calibrate: need at least one scenario");
  COMBODOSE_REQUIRE(cc.replicates >= 1 && cc.max_rounds >= 1 && cc.epsilon >= 0.0,
                    "calibrate: replicates and max_rounds must be >= 1, epsilon >= 0");
  if (!eval) {
    eval = [threads = cc.threads](const TrialConfig& c, const ScenarioSpec& s, int r, std::uint64_t seed) {
      return simulate_pcs(c, s, r, seed, threads);
    };
  }
  const auto tox_cells = cc.tox.cells();
  const auto act_cells = cc.act.cells();

  CalibrationResult res;
  res.tox = tox_cells.front();
  res.act = act_cells.front();

  auto sweep = [&](int round, const std::string& label, Endpoint e, const std::vector<PriorNormal2>& cells,
                   bool safety_only) {
    std::size_t best = 0;
    double best_g = -1.0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      TrialConfig cfg = base;
      cfg.safety_only = safety_only;
      apply_prior(cfg, Endpoint::toxicity, res.tox);
      apply_prior(cfg, Endpoint::activity, res.act);
      apply_prior(cfg, e, cells[k]);
      std::vector<double> pcs;
      for (std::size_t si = 0; si < scenarios.size(); ++si) {
        pcs.push_back(eval(cfg, scenarios[si], cc.replicates, stats::derive_seed(cc.seed, si)));
      }
      const double g = stats::geometric_mean(pcs);
      for (std::size_t si = 0; si < scenarios.size(); ++si) {
        res.trace.push_back({round, label, cells[k], scenarios[si].name, pcs[si], g});
      }
      if (g > best_g) {
        best_g = g;
        best = k;
      }
    }
    if (best_g == 0.0) res.warnings.push_back(label + " sweep in round " + std::to_string(round) +
                                              ": every cell has zero PCS somewhere; kept the first cell");
    (e == Endpoint::toxicity ? res.tox : res.act) = cells[best];
    return best_g;
  };

  sweep(0, "safety", Endpoint::toxicity, tox_cells, true);
  double prev = -1.0;
  for (int round = 1; round <= cc.max_rounds; ++round) {
    sweep(round, "activity", Endpoint::activity, act_cells, false);
    const double g = sweep(round, "toxicity", Endpoint::toxicity, tox_cells, false);
    res.gmean = g;
    res.rounds = round;
    if (prev >= 0.0 && g - prev < cc.epsilon) break;
    if (tox_cells.size() == 1 && act_cells.size() == 1) break;
    prev = g;
  }
  return res;
}

}  // namespace combodose
