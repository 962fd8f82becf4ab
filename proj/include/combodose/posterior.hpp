#pragma once
// Observation records fed to the models and per-combo posterior draws they
// return.

#include <algorithm>
#include <cstddef>
#include <map>
#include <tuple>
#include <vector>

#include "combodose/core.hpp"
#include "combodose/stats.hpp"

namespace combodose {

/// One patient's outcome at a decision time, keyed by flat combo index.
struct Observation {
  std::size_t combo = 0;
  ObservedOutcome o;
};

/// Identical observations collapsed with a multiplicity; every likelihood in
/// the library is a sum over these.
struct WeightedRecord {
  std::size_t combo = 0;
  int yT = 0;
  double wT = 0.0;
  int yA = 0;
  double wA = 0.0;
  double count = 0.0;
};

inline std::vector<WeightedRecord> group_observations(const std::vector<Observation>& obs) {
  std::map<std::tuple<std::size_t, int, double, int, double>, double> bins;
  for (const auto& ob : obs) bins[{ob.combo, ob.o.y_T, ob.o.w_T, ob.o.y_A, ob.o.w_A}] += 1.0;
  std::vector<WeightedRecord> out;
  out.reserve(bins.size());
  for (const auto& [key, n] : bins) {
    const auto& [c, yT, wT, yA, wA] = key;
    out.push_back({c, yT, wT, yA, wA, n});
  }
  return out;
}

inline std::vector<Observation> observe(const DoseGrid& grid, const std::vector<PatientRecord>& patients,
                                        double now, int tau) {
  std::vector<Observation> out;
  out.reserve(patients.size());
  for (const auto& p : patients) out.push_back({grid.index(p.combo), compute_weights(p, now, tau)});
  return out;
}

/// Posterior draws of the window probabilities at every combo, draw-major.
struct PosteriorDraws {
  int n_draws = 0;
  int n_combos = 0;
  std::vector<double> piA;
  std::vector<double> piT;

  PosteriorDraws() = default;
  PosteriorDraws(int draws, int combos)
      : n_draws(draws), n_combos(combos), piA(static_cast<std::size_t>(draws) * combos),
        piT(static_cast<std::size_t>(draws) * combos) {}

  double& A(int d, std::size_t c) { return piA[static_cast<std::size_t>(d) * n_combos + c]; }
  double& T(int d, std::size_t c) { return piT[static_cast<std::size_t>(d) * n_combos + c]; }
  double A(int d, std::size_t c) const { return piA[static_cast<std::size_t>(d) * n_combos + c]; }
  double T(int d, std::size_t c) const { return piT[static_cast<std::size_t>(d) * n_combos + c]; }

  std::vector<double> column_A(std::size_t c) const {
    std::vector<double> v(n_draws);
    for (int d = 0; d < n_draws; ++d) v[d] = A(d, c);
    return v;
  }
  std::vector<double> column_T(std::size_t c) const {
    std::vector<double> v(n_draws);
    for (int d = 0; d < n_draws; ++d) v[d] = T(d, c);
    return v;
  }
};

/// Per-combo summary reported by every design.
struct PosteriorSummary {
  DoseCombo combo;
  double piA_median = 0.0, piA_lo = 0.0, piA_hi = 0.0;
  double piT_median = 0.0, piT_lo = 0.0, piT_hi = 0.0;
  double prob_safe = 0.0;    // P(piT < phi_T)
  double prob_active = 0.0;  // P(piA > phi_A)
  double criterion = 0.0;    // design criterion (expected utility or P(u* > u_b))
  bool admissible = false;
  int n = 0;
};

inline PosteriorSummary summarize_draws(const PosteriorDraws& d, std::size_t c, DoseCombo combo,
                                        const TargetSpec& t) {
  PosteriorSummary s;
  s.combo = combo;
  auto a = d.column_A(c);
  auto tt = d.column_T(c);
  s.piA_median = stats::quantile(a, 0.5);
  s.piA_lo = stats::quantile(a, 0.05);
  s.piA_hi = stats::quantile(a, 0.95);
  s.piT_median = stats::quantile(tt, 0.5);
  s.piT_lo = stats::quantile(tt, 0.05);
  s.piT_hi = stats::quantile(tt, 0.95);
  const double n = std::max(1, d.n_draws);
  s.prob_safe = static_cast<double>(std::count_if(tt.begin(), tt.end(), [&](double x) { return x < t.phi_T; })) / n;
  s.prob_active = static_cast<double>(std::count_if(a.begin(), a.end(), [&](double x) { return x > t.phi_A; })) / n;
  return s;
}

}  // namespace combodose
