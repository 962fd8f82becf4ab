#pragma once
// Dual-agent TITE-BOIN12: quasi-event utility posteriors per combo, BOIN
// toxicity boundaries and neighbourhood decision sets.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "combodose/core.hpp"
#include "combodose/posterior.hpp"
#include "combodose/stats.hpp"

namespace combodose {

struct BoinBoundaries {
  double lambda_e = 0.0;
  double lambda_d = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
};

inline BoinBoundaries boin_boundaries(double phi_T, double phi1, double phi2) {
  COMBODOSE_REQUIRE(phi1 > 0.0 && phi1 < phi_T && phi_T < phi2 && phi2 < 1.0,
                    "boin boundaries: need 0 < phi1 < phi_T < phi2 < 1");
  BoinBoundaries b;
  b.phi1 = phi1;
  b.phi2 = phi2;
  b.lambda_e = std::log((1.0 - phi1) / (1.0 - phi_T)) / std::log(phi_T * (1.0 - phi1) / (phi1 * (1.0 - phi_T)));
  b.lambda_d = std::log((1.0 - phi_T) / (1.0 - phi2)) / std::log(phi2 * (1.0 - phi_T) / (phi_T * (1.0 - phi2)));
  return b;
}

struct BoinConfig {
  BoinUtilityTable table{};
  double phi1_factor = 0.6;
  double phi2_factor = 1.4;
};

/// Lower reference utility and the decision threshold u_b, both on [0,100].
/// The reference leaves out the (1,0) outcome, whose score is normally zero.
inline double boin_utility_lower(const BoinUtilityTable& t, double phi_T, double phi_A) {
  return t.psi01 * phi_A * (1.0 - phi_T) + t.psi00 * (1.0 - phi_T) * (1.0 - phi_A) + t.psi11 * phi_T * phi_A;
}

inline double boin_utility_threshold(const BoinUtilityTable& t, double phi_T, double phi_A) {
  const double lo = boin_utility_lower(t, phi_T, phi_A);
  return lo + (100.0 - lo) / 2.0;
}

/// Sufficient statistics of one endpoint at a combo.
struct EndpointSums {
  double events = 0.0;       // sum delta*y
  double non_events = 0.0;   // sum delta*(1-y)
  double pending_w = 0.0;    // sum w*(1-delta)
};

inline EndpointSums endpoint_sums(const std::vector<ObservedOutcome>& recs, bool toxicity) {
  EndpointSums s;
  for (const auto& o : recs) {
    const bool d = toxicity ? o.delta_T : o.delta_A;
    const int y = toxicity ? o.y_T : o.y_A;
    const double w = toxicity ? o.w_T : o.w_A;
    if (d) {
      (y ? s.events : s.non_events) += 1.0;
    } else {
      s.pending_w += w;
    }
  }
  return s;
}

inline double pi_hat(const EndpointSums& s) {
  const double den = s.events + s.non_events + s.pending_w;
  return den > 0.0 ? s.events / den : 0.0;
}

inline double pi_hat(const std::vector<ObservedOutcome>& recs, bool toxicity) {
  return pi_hat(endpoint_sums(recs, toxicity));
}

/// P(Y = 1 | not yet ascertained) given the current estimate and the weight.
inline double impute_pending(double pihat, double w) {
  const double den = 1.0 - pihat * w;
  if (den <= 0.0) return 1.0;
  return std::clamp(pihat * (1.0 - w) / den, 0.0, 1.0);
}

inline double quasi_events(const std::vector<ObservedOutcome>& recs, const BoinUtilityTable& t, double pihat_T,
                           double pihat_A) {
  double x = 0.0;
  for (const auto& o : recs) {
    const double pT1 = o.delta_T ? static_cast<double>(o.y_T) : impute_pending(pihat_T, o.w_T);
    const double pA1 = o.delta_A ? static_cast<double>(o.y_A) : impute_pending(pihat_A, o.w_A);
    for (int a = 0; a < 2; ++a) {
      const double pa = a ? pT1 : 1.0 - pT1;
      for (int b = 0; b < 2; ++b) {
        const double pb = b ? pA1 : 1.0 - pA1;
        x += t.score(a, b) * pa * pb;
      }
    }
  }
  return x / 100.0;
}

/// P(u* > u_b | D) with u* ~ Beta(1 + x, 1 + n - x); u_b on [0,100].
inline double utility_exceedance(double x, double n, double u_b) {
  return stats::beta_sf(u_b / 100.0, 1.0 + x, 1.0 + n - x);
}

struct DecisionSets {
  std::vector<DoseCombo> deescalate;
  std::vector<DoseCombo> stay;
  std::vector<DoseCombo> escalate;
};

inline DecisionSets decision_sets(DoseCombo d, const DoseGrid& grid) {
  DecisionSets s;
  auto add = [&](std::vector<DoseCombo>& v, DoseCombo c) {
    if (grid.contains(c)) v.push_back(c);
  };
  const int i = d.i, j = d.j;
  add(s.deescalate, {i - 1, j});
  add(s.deescalate, {i, j - 1});
  s.stay = s.deescalate;
  add(s.stay, d);
  s.escalate = s.stay;
  add(s.escalate, {i + 1, j - 1});
  add(s.escalate, {i - 1, j + 1});
  add(s.escalate, {i + 1, j});
  add(s.escalate, {i, j + 1});
  return s;
}

/// Everything the design tracks at one combo.
struct BoinComboState {
  int n = 0;
  EndpointSums tox;
  EndpointSums act;
  double pi_hat_T = 0.0;
  double pi_hat_A = 0.0;
  double x = 0.0;
  double exceedance = 0.0;
  double prob_safe = 0.0;    // Beta posterior P(piT < phi_T)
  double prob_active = 0.0;  // Beta posterior P(piA > phi_A)
  bool admissible = false;
};

inline std::vector<BoinComboState> boin_state(const DoseGrid& grid, const std::vector<Observation>& obs,
                                              const BoinUtilityTable& table, const TargetSpec& t) {
  std::vector<std::vector<ObservedOutcome>> by_combo(grid.size());
  for (const auto& ob : obs) by_combo.at(ob.combo).push_back(ob.o);
  const double u_b = boin_utility_threshold(table, t.phi_T, t.phi_A);
  std::vector<BoinComboState> out(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    auto& s = out[c];
    const auto& recs = by_combo[c];
    s.n = static_cast<int>(recs.size());
    s.tox = endpoint_sums(recs, true);
    s.act = endpoint_sums(recs, false);
    s.pi_hat_T = pi_hat(s.tox);
    s.pi_hat_A = pi_hat(s.act);
    s.x = quasi_events(recs, table, s.pi_hat_T, s.pi_hat_A);
    s.exceedance = utility_exceedance(s.x, s.n, u_b);
    s.prob_safe = stats::beta_cdf(t.phi_T, 1.0 + s.tox.events, 1.0 + s.tox.non_events + s.tox.pending_w);
    s.prob_active = stats::beta_sf(t.phi_A, 1.0 + s.act.events, 1.0 + s.act.non_events + s.act.pending_w);
    s.admissible = s.prob_safe > t.q_T && s.prob_active > t.q_A;
  }
  return out;
}

enum class BoinBranch { deescalate, stay, escalate };

inline BoinBranch boin_branch(double pihat_T, const BoinBoundaries& b) {
  if (pihat_T >= b.lambda_d) return BoinBranch::deescalate;
  if (pihat_T > b.lambda_e) return BoinBranch::stay;
  return BoinBranch::escalate;
}

/// Best candidate by exceedance probability; ties go to the higher agent-2
/// level, then the higher agent-1 level.
inline std::optional<DoseCombo> boin_pick(const std::vector<DoseCombo>& candidates,
                                          const std::vector<double>& exceedance, const DoseGrid& grid) {
  std::optional<DoseCombo> best;
  double best_p = -1.0;
  for (const auto& c : candidates) {
    const double p = exceedance[grid.index(c)];
    const bool better = !best || p > best_p + 1e-12 ||
                        (std::abs(p - best_p) <= 1e-12 && (c.j > best->j || (c.j == best->j && c.i > best->i)));
    if (better) {
      best = c;
      best_p = std::max(p, best_p);
    }
  }
  return best;
}

/// `allowed` marks combos that are admissible and pass the enforcement rules.
inline std::optional<DoseCombo> boin12_next_dose(DoseCombo current, const std::vector<BoinComboState>& state,
                                                 const BoinBoundaries& b, const std::vector<bool>& allowed,
                                                 const DoseGrid& grid) {
  const auto sets = decision_sets(current, grid);
  const auto branch = boin_branch(state[grid.index(current)].pi_hat_T, b);
  const auto& pool = branch == BoinBranch::deescalate ? sets.deescalate
                     : branch == BoinBranch::stay     ? sets.stay
                                                      : sets.escalate;
  std::vector<DoseCombo> cands;
  for (const auto& c : pool) {
    if (allowed[grid.index(c)]) cands.push_back(c);
  }
  std::vector<double> ex(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) ex[k] = state[k].exceedance;
  return boin_pick(cands, ex, grid);
}

}  // namespace combodose
