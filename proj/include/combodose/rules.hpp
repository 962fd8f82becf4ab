#pragma once
// Admissibility, enforcement (dose skipping, hard safety) and stopping rules.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "combodose/core.hpp"
#include "combodose/stats.hpp"

namespace combodose {

struct RuleConfig {
  int c_suff = 30;
  int n_max = 60;
  double hard_safety_threshold = 0.95;
  double low_unsafe_threshold = 0.80;
  double high_safe_threshold = 0.80;
  double cycle1_target = 0.3;

  void validate() const {
    auto open01 = [](double p) { return p > 0.0 && p < 1.0; };
    COMBODOSE_REQUIRE(c_suff >= 1 && n_max >= 1, "rules: c_suff and n_max must be positive");
    COMBODOSE_REQUIRE(open01(hard_safety_threshold) && open01(low_unsafe_threshold) &&
                          open01(high_safe_threshold) && open01(cycle1_target),
                      "rules: thresholds must lie in (0,1)");
  }
};

/// Strict admissibility from posterior draws.
inline bool admissible(const std::vector<double>& piT, const std::vector<double>& piA, const TargetSpec& t) {
  if (piT.empty() || piA.empty()) return false;
  const auto safe = std::count_if(piT.begin(), piT.end(), [&](double p) { return p < t.phi_T; });
  const auto active = std::count_if(piA.begin(), piA.end(), [&](double p) { return p > t.phi_A; });
  return static_cast<double>(safe) / piT.size() > t.q_T && static_cast<double>(active) / piA.size() > t.q_A;
}

inline bool admissible_from_probs(double prob_safe, double prob_active, const TargetSpec& t) {
  return prob_safe > t.q_T && prob_active > t.q_A;
}

/// A combo may be used if it sits at most one level above an explored combo
/// in one agent while not exceeding it in the other.
inline bool allowed_by_skipping(const std::vector<DoseCombo>& explored, DoseCombo cand, DoseCombo start) {
  if (cand == start) return true;
  return std::any_of(explored.begin(), explored.end(), [&](DoseCombo e) {
    return (cand.i <= e.i + 1 && cand.j <= e.j) || (cand.i <= e.i && cand.j <= e.j + 1);
  });
}

// ---------------------------------------------------------------------------
// Cycle-one safety evidence

/// P(p1 > target) under Beta(1 + x, 1 + n - x).
inline double prob_cycle1_above(int x, int n, double target) {
  return stats::beta_sf(target, 1.0 + x, 1.0 + n - x);
}

inline bool hard_safety_trigger(int x, int n, const RuleConfig& cfg = {}) {
  return prob_cycle1_above(x, n, cfg.cycle1_target) > cfg.hard_safety_threshold;
}

struct Cycle1Counts {
  int n = 0;  // patients whose first cycle is ascertained
  int x = 0;  // DLTs within the first cycle
};

/// Cycle-one outcome of one patient at `now`, if ascertained.
inline std::optional<bool> cycle1_outcome(const PatientRecord& p, double now) {
  const double f = now - p.entry_time;
  if (f < 0.0) return std::nullopt;
  const bool early_dlt = p.tox_time && *p.tox_time <= std::min(1.0, f);
  if (early_dlt) return true;
  if (f >= 1.0) return false;
  return std::nullopt;
}

inline std::vector<Cycle1Counts> cycle1_counts(const DoseGrid& grid, const std::vector<PatientRecord>& patients,
                                               double now) {
  std::vector<Cycle1Counts> out(grid.size());
  for (const auto& p : patients) {
    const auto o = cycle1_outcome(p, now);
    if (!o) continue;
    auto& c = out[grid.index(p.combo)];
    ++c.n;
    c.x += *o ? 1 : 0;
  }
  return out;
}

/// Upward closure (i >= i*, j >= j*) of every combo whose cycle-one record
/// met the trigger at some cohort boundary. Boundaries are taken over each
/// combo's ascertained patients ordered by entry, grouping equal entry times,
/// so an exclusion never lapses as more data accrue.
inline std::vector<bool> hard_safety_exclusions(const DoseGrid& grid, const std::vector<PatientRecord>& patients,
                                                double now, const RuleConfig& cfg = {}) {
  std::vector<std::map<double, Cycle1Counts>> cohorts(grid.size());
  for (const auto& p : patients) {
    const auto o = cycle1_outcome(p, now);
    if (!o) continue;
    auto& c = cohorts[grid.index(p.combo)][p.entry_time];
    ++c.n;
    c.x += *o ? 1 : 0;
  }
  std::vector<bool> excluded(grid.size(), false);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    int n = 0, x = 0;
    bool hit = false;
    for (const auto& [entry, c] : cohorts[k]) {
      n += c.n;
      x += c.x;
      if (hard_safety_trigger(x, n, cfg)) hit = true;
    }
    if (!hit) continue;
    const auto d = grid.combo(k);
    for (std::size_t m = 0; m < grid.size(); ++m) {
      const auto e = grid.combo(m);
      if (e.i >= d.i && e.j >= d.j) excluded[m] = true;
    }
  }
  return excluded;
}

// ---------------------------------------------------------------------------
// Stopping

enum class StopReason {
  none,
  no_admissible,
  lowest_unsafe,
  highest_very_safe,
  sufficient_information,
  hard_safety,
  max_patients,
};

inline std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::no_admissible: return "no_admissible";
    case StopReason::lowest_unsafe: return "lowest_unsafe";
    case StopReason::highest_very_safe: return "highest_very_safe";
    case StopReason::sufficient_information: return "sufficient_information";
    case StopReason::hard_safety: return "hard_safety";
    case StopReason::max_patients: return "max_patients";
  }
  return "none";
}

inline StopReason parse_stop_reason(const std::string& s) {
  for (auto r : {StopReason::none, StopReason::no_admissible, StopReason::lowest_unsafe,
                 StopReason::highest_very_safe, StopReason::sufficient_information, StopReason::hard_safety,
                 StopReason::max_patients}) {
    if (to_string(r) == s) return r;
  }
  throw InputError("unknown stop reason '" + s + "'");
}

/// Stop reasons after which the trial recommends nothing.
inline bool stop_without_selection(StopReason r) {
  return r == StopReason::no_admissible || r == StopReason::lowest_unsafe || r == StopReason::highest_very_safe ||
         r == StopReason::hard_safety;
}

/// Everything the stopping rules look at, assembled by the engine.
struct StoppingInput {
  bool any_admissible = false;        // any combo admissible under the design
  Cycle1Counts lowest;                // cycle-one data at d11
  Cycle1Counts highest;               // cycle-one data at dIJ
  int assigned_lowest = 0;            // patients ever assigned to d11
  int assigned_highest = 0;           // patients ever assigned to dIJ
  std::optional<int> recommended_n;   // patients already at the recommended combo
  bool lowest_excluded = false;       // d11 excluded by hard safety
  int n_total = 0;
  // model-based replacements for the cycle-one beta-binomial probabilities
  std::optional<double> lowest_prob_unsafe;
  std::optional<double> highest_prob_safe;
};

inline StopReason check_stopping(const StoppingInput& s, const RuleConfig& cfg) {
  if (!s.any_admissible) return StopReason::no_admissible;
  const double p_low = s.lowest_prob_unsafe.value_or(prob_cycle1_above(s.lowest.x, s.lowest.n, cfg.cycle1_target));
  if (s.assigned_lowest > 0 && p_low > cfg.low_unsafe_threshold) return StopReason::lowest_unsafe;
  const double p_high =
      s.highest_prob_safe.value_or(1.0 - prob_cycle1_above(s.highest.x, s.highest.n, cfg.cycle1_target));
  if (s.assigned_highest > 0 && p_high > cfg.high_safe_threshold) return StopReason::highest_very_safe;
  if (s.recommended_n && *s.recommended_n >= cfg.c_suff) return StopReason::sufficient_information;
  if (s.lowest_excluded) return StopReason::hard_safety;
  if (s.n_total >= cfg.n_max) return StopReason::max_patients;
  return StopReason::none;
}

}  // namespace combodose
