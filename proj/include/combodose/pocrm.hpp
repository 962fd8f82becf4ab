#pragma once
// Joint TITE-POCRM. Part 1 picks one ordering per endpoint from one-parameter
// power models; Part 2 fits the joint two-parameter logistic model along the
// chosen orderings.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "combodose/core.hpp"
#include "combodose/joint_outcome.hpp"
#include "combodose/posterior.hpp"
#include "combodose/sampler.hpp"
#include "combodose/stats.hpp"

namespace combodose {

enum class Endpoint { activity, toxicity };

struct Skeleton {
  std::vector<double> values;
  Endpoint endpoint = Endpoint::toxicity;

  void validate(std::size_t n_combos) const {
    COMBODOSE_REQUIRE(values.size() == n_combos, "skeleton length must equal the number of combos");
    for (std::size_t k = 0; k < values.size(); ++k) {
      COMBODOSE_REQUIRE(values[k] > 0.0 && values[k] < 1.0, "skeleton values must lie in (0,1)");
      if (k) COMBODOSE_REQUIRE(values[k] > values[k - 1], "skeleton must be strictly increasing");
    }
  }
};

inline std::pair<Skeleton, Skeleton> default_skeletons(const DoseGrid& grid) {
  static const std::vector<double> act{0.300, 0.402, 0.501, 0.593, 0.673, 0.741, 0.797, 0.842, 0.878, 0.906};
  static const std::vector<double> tox{0.261, 0.300, 0.340, 0.381, 0.422, 0.462, 0.501, 0.538, 0.574, 0.609};
  const std::size_t n = grid.size();
  COMBODOSE_REQUIRE(n <= act.size(), "no built-in skeleton for a grid with more than 10 combos");
  Skeleton a{{act.begin(), act.begin() + static_cast<long>(n)}, Endpoint::activity};
  Skeleton t{{tox.begin(), tox.begin() + static_cast<long>(n)}, Endpoint::toxicity};
  return {a, t};
}

/// Each ordering maps rank -> flat combo index.
struct OrderingSet {
  std::vector<std::vector<std::size_t>> orders;
  std::vector<double> prior;

  std::size_t size() const { return orders.size(); }

  /// rank of every combo under ordering m
  std::vector<std::size_t> ranks(std::size_t m) const {
    std::vector<std::size_t> r(orders[m].size());
    for (std::size_t k = 0; k < orders[m].size(); ++k) r[orders[m][k]] = k;
    return r;
  }

  void validate(const DoseGrid& grid) const {
    COMBODOSE_REQUIRE(!orders.empty(), "ordering set is empty");
    COMBODOSE_REQUIRE(prior.size() == orders.size(), "ordering prior length mismatch");
    double total = 0.0;
    for (double p : prior) {
      COMBODOSE_REQUIRE(p > 0.0, "ordering prior weights must be positive");
      total += p;
    }
    COMBODOSE_REQUIRE(std::abs(total - 1.0) < 1e-9, "ordering prior weights must sum to 1");
    for (std::size_t m = 0; m < orders.size(); ++m) {
      COMBODOSE_REQUIRE(orders[m].size() == grid.size(), "ordering " + std::to_string(m + 1) + " is not a full permutation");
      std::vector<bool> seen(grid.size(), false);
      for (auto c : orders[m]) {
        COMBODOSE_REQUIRE(c < grid.size() && !seen[c], "ordering " + std::to_string(m + 1) + " is not a permutation");
        seen[c] = true;
      }
      const auto r = ranks(m);
      for (std::size_t a = 0; a < grid.size(); ++a) {
        for (std::size_t b = 0; b < grid.size(); ++b) {
          const auto da = grid.combo(a), db = grid.combo(b);
          if (da.i <= db.i && da.j <= db.j && a != b) {
            COMBODOSE_REQUIRE(r[a] < r[b], "ordering " + std::to_string(m + 1) + " violates dose dominance at " +
                                               to_string(da) + " vs " + to_string(db));
          }
        }
      }
    }
  }
};

inline OrderingSet make_ordering_set(const DoseGrid& grid, const std::vector<std::vector<int>>& coded) {
  OrderingSet s;
  for (const auto& ord : coded) {
    std::vector<std::size_t> o;
    for (int code : ord) o.push_back(grid.index({code / 10, code % 10}));
    s.orders.push_back(std::move(o));
  }
  s.prior.assign(s.orders.size(), 1.0 / static_cast<double>(s.orders.size()));
  s.validate(grid);
  return s;
}

inline OrderingSet default_orderings(const DoseGrid& grid) {
  if (grid.rows() == 2 && grid.cols() == 5) {
    return make_ordering_set(grid, {
                                       {11, 12, 13, 14, 15, 21, 22, 23, 24, 25},  // rows
                                       {11, 21, 12, 22, 13, 23, 14, 24, 15, 25},  // columns / up diagonal
                                       {11, 12, 21, 13, 22, 14, 23, 15, 24, 25},  // up-down diagonal
                                       {11, 12, 21, 22, 13, 14, 23, 24, 15, 25},  // down-up diagonal
                                       {11, 21, 12, 13, 22, 14, 23, 15, 24, 25},  // down diagonal
                                   });
  }
  if (grid.rows() == 3 && grid.cols() == 3) {
    return make_ordering_set(grid, {
                                       {11, 12, 13, 21, 22, 23, 31, 32, 33},
                                       {11, 21, 31, 12, 22, 32, 13, 23, 33},
                                       {11, 21, 12, 13, 22, 31, 32, 23, 33},
                                       {11, 12, 21, 31, 22, 13, 23, 32, 33},
                                       {11, 12, 21, 13, 22, 31, 23, 32, 33},
                                       {11, 21, 12, 31, 22, 13, 32, 23, 33},
                                   });
  }
  throw InputError("no built-in orderings for a " + grid.shape() + " grid; supply them explicitly");
}

struct PriorNormal2 {
  double c1 = 0.0;  // mean of beta0
  double c2 = 0.0;  // mean of log beta1
  double v1 = 1.0;  // variance of beta0
  double v2 = 1.0;  // variance of log beta1

  double logpdf(double b0, double lb1) const {
    return stats::normal_logpdf(b0, c1, std::sqrt(v1)) + stats::normal_logpdf(lb1, c2, std::sqrt(v2));
  }
  void validate(const std::string& what) const {
    COMBODOSE_REQUIRE(v1 > 0.0 && v2 > 0.0, what + ": prior variances must be positive");
  }
};

struct PocrmHyper {
  double alpha_sd = 1.34;
  PriorNormal2 tox{-4.0, 2.5, 1.0, 0.25};
  PriorNormal2 act{-4.0, 2.0, 1.5, 0.5};
  double psi_var = 100.0;
  int quadrature_nodes = 32;

  void validate() const {
    COMBODOSE_REQUIRE(alpha_sd > 0.0, "pocrm: alpha prior sd must be positive");
    tox.validate("pocrm toxicity");
    act.validate("pocrm activity");
    COMBODOSE_REQUIRE(psi_var > 0.0, "pocrm: psi prior variance must be positive");
  }
};

// ---------------------------------------------------------------------------
// Part 1

/// Log-likelihood of the weighted power model w * x^exp(alpha) for one endpoint.
inline double power_model_loglik(const std::vector<WeightedRecord>& recs, const std::vector<double>& skel_by_combo,
                                 Endpoint e, double alpha) {
  const double ea = std::exp(alpha);
  double s = 0.0;
  for (const auto& r : recs) {
    const double w = e == Endpoint::toxicity ? r.wT : r.wA;
    const int y = e == Endpoint::toxicity ? r.yT : r.yA;
    const double g = w * std::pow(skel_by_combo[r.combo], ea);
    const double p = y ? g : 1.0 - g;
    s += r.count * std::log(std::max(p, kCellFloor));
  }
  return s;
}

inline std::vector<double> skeleton_by_combo(const Skeleton& skel, const OrderingSet& orders, std::size_t m) {
  std::vector<double> v(orders.orders[m].size());
  for (std::size_t rank = 0; rank < v.size(); ++rank) v[orders.orders[m][rank]] = skel.values[rank];
  return v;
}

struct OrderingPosterior {
  std::vector<double> weights;
  std::vector<double> log_marginal;
  bool fallback = false;
};

inline OrderingPosterior ordering_posterior(const std::vector<WeightedRecord>& recs, const Skeleton& skel,
                                            const OrderingSet& orders, double alpha_sd, int nodes = 32) {
  OrderingPosterior out;
  const std::size_t M = orders.size();
  out.log_marginal.resize(M);
  std::vector<double> lw(M);
  for (std::size_t m = 0; m < M; ++m) {
    const auto sk = skeleton_by_combo(skel, orders, m);
    out.log_marginal[m] = log_marginal_likelihood_1d_adaptive(
        [&](double a) { return power_model_loglik(recs, sk, skel.endpoint, a); }, 0.0, alpha_sd, nodes);
    lw[m] = std::log(orders.prior[m]) + out.log_marginal[m];
  }
  const double lse = stats::logsumexp(lw);
  out.weights.resize(M);
  if (!std::isfinite(lse)) {
    out.weights = orders.prior;
    out.fallback = true;
    return out;
  }
  for (std::size_t m = 0; m < M; ++m) out.weights[m] = std::exp(lw[m] - lse);
  return out;
}

/// Argmax with ties resolved to the lowest index.
inline std::size_t select_ordering(const std::vector<double>& weights) {
  std::size_t best = 0;
  for (std::size_t m = 1; m < weights.size(); ++m) {
    if (weights[m] > weights[best]) best = m;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Part 2

enum PocrmParam { kB0A = 0, kLogB1A, kB0T, kLogB1T, kPsiP, kPocrmDim };

/// Log-posterior of the joint two-parameter logistic model along fixed
/// orderings; exposed for testing.
struct PocrmPosterior {
  const std::vector<WeightedRecord>* recs = nullptr;
  std::vector<double> skelA_by_combo;
  std::vector<double> skelT_by_combo;
  PocrmHyper hyper;

  double log_prior(std::span<const double> th) const {
    return hyper.act.logpdf(th[kB0A], th[kLogB1A]) + hyper.tox.logpdf(th[kB0T], th[kLogB1T]) +
           stats::normal_logpdf(th[kPsiP], 0.0, std::sqrt(hyper.psi_var));
  }

  double log_lik(std::span<const double> th) const {
    const std::size_t n = skelA_by_combo.size();
    thread_local std::vector<double> FA, FT;
    FA.resize(n);
    FT.resize(n);
    const double b1A = std::exp(th[kLogB1A]), b1T = std::exp(th[kLogB1T]);
    for (std::size_t c = 0; c < n; ++c) {
      FA[c] = stats::logistic(th[kB0A] + b1A * skelA_by_combo[c]);
      FT[c] = stats::logistic(th[kB0T] + b1T * skelT_by_combo[c]);
    }
    double s = 0.0;
    for (const auto& r : *recs) {
      s += r.count * log_cell(r.wA * FA[r.combo], r.wT * FT[r.combo], th[kPsiP], r.yA, r.yT);
    }
    return s;
  }

  double operator()(std::span<const double> th) const {
    for (double v : th) {
      if (!std::isfinite(v)) return -std::numeric_limits<double>::infinity();
    }
    return log_prior(th) + log_lik(th);
  }
};

struct PocrmFit {
  std::size_t order_A = 0;
  std::size_t order_T = 0;
  OrderingPosterior post_A;
  OrderingPosterior post_T;
  SampleResult params;
  PosteriorDraws draws;
};

inline PocrmFit pocrm_fit(const std::vector<WeightedRecord>& recs, const DoseGrid& grid, const Skeleton& skelA,
                          const Skeleton& skelT, const OrderingSet& ordA, const OrderingSet& ordT,
                          const PocrmHyper& hyper, const SamplerConfig& cfg) {
  hyper.validate();
  skelA.validate(grid.size());
  skelT.validate(grid.size());
  PocrmFit fit;
  fit.post_A = ordering_posterior(recs, skelA, ordA, hyper.alpha_sd, hyper.quadrature_nodes);
  fit.post_T = ordering_posterior(recs, skelT, ordT, hyper.alpha_sd, hyper.quadrature_nodes);
  fit.order_A = select_ordering(fit.post_A.weights);
  fit.order_T = select_ordering(fit.post_T.weights);

  PocrmPosterior lp{&recs, skeleton_by_combo(skelA, ordA, fit.order_A), skeleton_by_combo(skelT, ordT, fit.order_T),
                    hyper};
  std::vector<double> init{hyper.act.c1, hyper.act.c2, hyper.tox.c1, hyper.tox.c2, 0.0};
  std::vector<double> scale{std::sqrt(hyper.act.v1), std::sqrt(hyper.act.v2), std::sqrt(hyper.tox.v1),
                            std::sqrt(hyper.tox.v2), std::sqrt(hyper.psi_var)};
  fit.params = sample_posterior(std::cref(lp), init, scale, cfg, {"beta0_A", "log_beta1_A", "beta0_T", "log_beta1_T", "psi"});

  const int n = static_cast<int>(grid.size());
  fit.draws = PosteriorDraws(fit.params.keep, n);
  for (int d = 0; d < fit.params.keep; ++d) {
    const auto th = fit.params.row(d);
    const double b1A = std::exp(th[kLogB1A]), b1T = std::exp(th[kLogB1T]);
    for (int c = 0; c < n; ++c) {
      fit.draws.A(d, c) = stats::logistic(th[kB0A] + b1A * lp.skelA_by_combo[c]);
      fit.draws.T(d, c) = stats::logistic(th[kB0T] + b1T * lp.skelT_by_combo[c]);
    }
  }
  return fit;
}

}  // namespace combodose
