#pragma once
// Complete-information benchmark restricted to admissible combos. Every
// pseudo-patient's outcome is known at every combo, generated from one latent
// pair per patient so that outcomes are monotone across dominating combos.

#include <cstdint>
#include <optional>
#include <vector>

#include "combodose/core.hpp"
#include "combodose/datagen.hpp"
#include "combodose/pocrm.hpp"
#include "combodose/sampler.hpp"
#include "combodose/stats.hpp"

namespace combodose {

struct BenchmarkConfig {
  int n_patients = 60;
  TargetSpec targets{};
  UtilityConvention convention = UtilityConvention::model_based;
  UtilityWeights weights{};
  BoinUtilityTable table{};
  double alpha_sd = 1.34;
  int quadrature_nodes = 32;
  std::optional<std::pair<Skeleton, Skeleton>> skeletons;
  std::optional<std::pair<OrderingSet, OrderingSet>> orderings;
};

struct CompleteData {
  std::vector<int> x_tox;  // per combo, events within the window
  std::vector<int> x_act;
  int n = 0;
};

/// Completed outcomes of n pseudo-patients at every combo of the scenario.
inline CompleteData complete_information(const ScenarioSpec& s, int n, std::uint64_t data_seed,
                                         const std::vector<LognormalParams>& params) {
  CompleteData d;
  d.n = n;
  d.x_tox.assign(s.grid.size(), 0);
  d.x_act.assign(s.grid.size(), 0);
  const double tau = s.tau;
  for (int k = 0; k < n; ++k) {
    const auto z = latent_pair(data_seed, static_cast<std::uint64_t>(k), params.front().rho);
    for (std::size_t c = 0; c < s.grid.size(); ++c) {
      const auto e = generate_patient(params[c], z);
      d.x_tox[c] += e.t_tox <= tau;
      d.x_act[c] += e.t_act <= tau;
    }
  }
  return d;
}

/// Pool-adjacent-violators fit of a nondecreasing sequence with equal weights.
inline std::vector<double> isotonic_increasing(const std::vector<double>& y) {
  std::vector<double> val;
  std::vector<int> len;
  for (double v : y) {
    val.push_back(v);
    len.push_back(1);
    while (val.size() > 1 && val[val.size() - 2] > val.back()) {
      const std::size_t b = val.size() - 1;
      const double merged = (val[b - 1] * len[b - 1] + val[b] * len[b]) / (len[b - 1] + len[b]);
      len[b - 1] += len[b];
      val[b - 1] = merged;
      val.pop_back();
      len.pop_back();
    }
  }
  std::vector<double> out;
  for (std::size_t b = 0; b < val.size(); ++b) out.insert(out.end(), len[b], val[b]);
  return out;
}

/// Ordering-averaged isotonic estimates of one endpoint's window probability.
inline std::vector<double> benchmark_estimates(const std::vector<int>& x, int n, const Skeleton& skel,
                                               const OrderingSet& orders, double alpha_sd, int nodes) {
  const std::size_t m_combos = x.size();
  std::vector<WeightedRecord> recs;
  for (std::size_t c = 0; c < m_combos; ++c) {
    if (x[c] > 0) recs.push_back({c, skel.endpoint == Endpoint::toxicity, 1.0, skel.endpoint == Endpoint::activity,
                                  1.0, static_cast<double>(x[c])});
    if (n - x[c] > 0) recs.push_back({c, 0, 1.0, 0, 1.0, static_cast<double>(n - x[c])});
  }
  const std::size_t M = orders.size();
  std::vector<double> lw(M);
  for (std::size_t m = 0; m < M; ++m) {
    const auto sk = skeleton_by_combo(skel, orders, m);
    lw[m] = std::log(orders.prior[m]) +
            log_marginal_likelihood_1d_adaptive(
                [&](double a) { return power_model_loglik(recs, sk, skel.endpoint, a); }, 0.0, alpha_sd, nodes);
  }
  const double lse = stats::logsumexp(lw);
  std::vector<double> est(m_combos, 0.0);
  for (std::size_t m = 0; m < M; ++m) {
    const double w = std::isfinite(lse) ? std::exp(lw[m] - lse) : orders.prior[m];
    std::vector<double> y(m_combos);
    for (std::size_t r = 0; r < m_combos; ++r) y[r] = static_cast<double>(x[orders.orders[m][r]]) / n;
    const auto fitted = isotonic_increasing(y);
    for (std::size_t r = 0; r < m_combos; ++r) est[orders.orders[m][r]] += w * fitted[r];
  }
  return est;
}

struct BenchmarkOutcome {
  std::optional<DoseCombo> selection;
  std::vector<bool> admissible;
  std::vector<double> est_tox;
  std::vector<double> est_act;
  CompleteData data;
};

inline BenchmarkOutcome benchmark_replicate(const ScenarioSpec& s, const BenchmarkConfig& cfg,
                                            std::uint64_t data_seed,
                                            const std::vector<LognormalParams>* params = nullptr) {
  COMBODOSE_REQUIRE(cfg.n_patients >= 1, "benchmark: n_patients must be >= 1");
  std::vector<LognormalParams> own;
  if (!params) {
    own = scenario_params(s);
    params = &own;
  }
  const auto& grid = s.grid;
  const auto [sa, st] = cfg.skeletons ? *cfg.skeletons : default_skeletons(grid);
  const auto ords = cfg.orderings ? *cfg.orderings : std::pair{default_orderings(grid), default_orderings(grid)};

  BenchmarkOutcome out;
  out.data = complete_information(s, cfg.n_patients, data_seed, *params);
  const int n = out.data.n;
  out.est_tox = benchmark_estimates(out.data.x_tox, n, st, ords.second, cfg.alpha_sd, cfg.quadrature_nodes);
  out.est_act = benchmark_estimates(out.data.x_act, n, sa, ords.first, cfg.alpha_sd, cfg.quadrature_nodes);
  out.admissible.assign(grid.size(), false);
  const auto& t = cfg.targets;
  std::optional<std::size_t> best;
  double best_u = 0.0;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const int xt = out.data.x_tox[c], xa = out.data.x_act[c];
    const double p_safe = stats::beta_cdf(t.phi_T, 1.0 + xt, 1.0 + n - xt);
    const double p_active = stats::beta_sf(t.phi_A, 1.0 + xa, 1.0 + n - xa);
    out.admissible[c] = p_safe > t.q_T && p_active > t.q_A;
    if (!out.admissible[c]) continue;
    const double u = cfg.convention == UtilityConvention::model_based
                         ? utility_model_based(out.est_act[c], out.est_tox[c], cfg.weights, t.phi_T)
                         : utility_boin_true(out.est_act[c], out.est_tox[c], cfg.table);
    if (!best || u > best_u) {
      best = c;
      best_u = u;
    }
  }
  if (best) out.selection = grid.combo(*best);
  return out;
}

}  // namespace combodose
