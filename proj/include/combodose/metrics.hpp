#pragma once
// Operating characteristics over a set of replicates.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "combodose/core.hpp"
#include "combodose/engine.hpp"
#include "combodose/rules.hpp"

namespace combodose {

struct OperatingCharacteristics {
  int replicates = 0;
  double pct_correct = 0.0;
  double pct_good = 0.0;
  double pct_acceptable = 0.0;
  double pct_none = 0.0;
  double mean_n = 0.0;
  double mean_unsafe = 0.0;
  ComboMap<double> pct_selected;  // per combo
  std::map<std::string, int> stop_reasons;

  /// Binomial Monte Carlo standard error of a percentage.
  double mc_se(double pct) const {
    if (replicates <= 0) return 0.0;
    const double p = pct / 100.0;
    return 100.0 * std::sqrt(p * (1.0 - p) / replicates);
  }
};

/// A selection counts as correct when it is the correct combo, or when it is
/// "none" and no combo is acceptable.
inline bool is_correct_selection(const std::optional<DoseCombo>& sel, const Classification& cls) {
  if (!cls.correct) return !sel;
  return sel && *sel == *cls.correct;
}

inline OperatingCharacteristics summarize_selections(const ScenarioSpec& s, const Classification& cls,
                                                     const std::vector<std::optional<DoseCombo>>& selections,
                                                     const std::vector<int>& n_total = {},
                                                     const std::vector<int>& n_unsafe = {}) {
  OperatingCharacteristics oc;
  oc.replicates = static_cast<int>(selections.size());
  oc.pct_selected.assign(s.grid.size(), 0.0);
  if (selections.empty()) return oc;
  const double unit = 100.0 / selections.size();
  for (const auto& sel : selections) {
    if (is_correct_selection(sel, cls)) oc.pct_correct += unit;
    if (!sel) {
      oc.pct_none += unit;
      continue;
    }
    const auto& c = cls.combos[s.grid.index(*sel)];
    oc.pct_selected[s.grid.index(*sel)] += unit;
    if (c.good) oc.pct_good += unit;
    if (c.acceptable) oc.pct_acceptable += unit;
  }
  for (int v : n_total) oc.mean_n += static_cast<double>(v) / n_total.size();
  for (int v : n_unsafe) oc.mean_unsafe += static_cast<double>(v) / n_unsafe.size();
  return oc;
}

inline OperatingCharacteristics summarize_trials(const ScenarioSpec& s, const Classification& cls,
                                                 const std::vector<TrialResult>& trials) {
  std::vector<std::optional<DoseCombo>> sel;
  std::vector<int> n, u;
  for (const auto& t : trials) {
    sel.push_back(t.selection);
    n.push_back(t.n_total);
    u.push_back(t.n_unsafe);
  }
  auto oc = summarize_selections(s, cls, sel, n, u);
  for (const auto& t : trials) ++oc.stop_reasons[to_string(t.stop_reason)];
  return oc;
}

inline UtilityConvention convention_for(DesignKind d) {
  return d == DesignKind::boin12 ? UtilityConvention::boin : UtilityConvention::model_based;
}

inline Classification classify_for(const ScenarioSpec& s, const TrialConfig& cfg) {
  ClassifyOptions opt;
  opt.convention = convention_for(cfg.design);
  opt.weights = cfg.weights;
  opt.table = cfg.boin.table;
  opt.phi_T = cfg.targets.phi_T;
  opt.safe_threshold = cfg.targets.phi_T;
  opt.active_threshold = cfg.targets.phi_A;
  return classify_doses(s, opt);
}

}  // namespace combodose
