#pragma once
// Posterior computation: Gauss-Hermite marginal likelihoods in one dimension
// and an adaptive random-walk Metropolis sampler for the joint models.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "combodose/core.hpp"
#include "combodose/stats.hpp"

namespace combodose {

// ---------------------------------------------------------------------------
// Gauss-Hermite rules for the weight exp(-x^2)

struct GaussHermiteRule {
  std::vector<double> x;
  std::vector<double> log_w;
};

namespace detail {

inline GaussHermiteRule compute_gauss_hermite(int n) {
  COMBODOSE_REQUIRE(n >= 1 && n <= 400, "Gauss-Hermite: node count must be in [1, 400]");
  constexpr double kEps = 1e-14;
  constexpr double kPim4 = 0.7511255444649425;  // pi^(-1/4)
  constexpr int kMaxIt = 100;
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * x[1];
    } else {
      z = 2.0 * z - x[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < kMaxIt; ++it) {
      double p1 = kPim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= kEps * std::max(1.0, std::abs(z))) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = w[n - 1 - i] = 2.0 / (pp * pp);
  }
  GaussHermiteRule r;
  r.x = std::move(x);
  r.log_w.resize(n);
  for (int i = 0; i < n; ++i) r.log_w[i] = std::log(w[i]);
  return r;
}

}  // namespace detail

inline const GaussHermiteRule& gauss_hermite(int n) {
  thread_local std::map<int, GaussHermiteRule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_hermite(n)).first;
  return it->second;
}

/// log of the integral of exp(loglik(a)) against N(mean, sd^2).
inline double log_marginal_likelihood_1d(const std::function<double(double)>& loglik, double prior_mean,
                                         double prior_sd, int nodes = 64) {
  COMBODOSE_REQUIRE(prior_sd > 0.0, "marginal likelihood: prior sd must be positive");
  const auto& r = gauss_hermite(nodes);
  std::vector<double> terms(r.x.size());
  const double shift = -0.5 * std::log(M_PI);
  for (std::size_t k = 0; k < r.x.size(); ++k) {
    terms[k] = r.log_w[k] + shift + loglik(prior_mean + std::sqrt(2.0) * prior_sd * r.x[k]);
  }
  return stats::logsumexp(terms);
}

inline double marginal_likelihood_1d(const std::function<double(double)>& loglik, double prior_mean,
                                     double prior_sd, int nodes = 64) {
  return std::exp(log_marginal_likelihood_1d(loglik, prior_mean, prior_sd, nodes));
}

/// Same integral, with the rule recentred at the posterior mode and scaled by
/// the curvature there. Much more accurate than the prior-centred rule once
/// the likelihood is concentrated (large complete-data samples).
inline double log_marginal_likelihood_1d_adaptive(const std::function<double(double)>& loglik, double prior_mean,
                                                  double prior_sd, int nodes = 32) {
  COMBODOSE_REQUIRE(prior_sd > 0.0, "marginal likelihood: prior sd must be positive");
  auto h = [&](double a) { return loglik(a) + stats::normal_logpdf(a, prior_mean, prior_sd); };
  const double lo = prior_mean - 12.0 * prior_sd;
  const double hi = prior_mean + 12.0 * prior_sd;
  const auto best = boost::math::tools::brent_find_minima([&](double a) { return -h(a); }, lo, hi, 40);
  const double mode = best.first;
  const double step = 1e-3 * prior_sd;
  const double curv = (h(mode + step) - 2.0 * h(mode) + h(mode - step)) / (step * step);
  double scale = curv < 0.0 ? 1.0 / std::sqrt(-curv) : prior_sd;
  if (!std::isfinite(scale) || scale <= 0.0) scale = prior_sd;
  const auto& r = gauss_hermite(nodes);
  std::vector<double> terms(r.x.size());
  for (std::size_t k = 0; k < r.x.size(); ++k) {
    terms[k] = r.log_w[k] + r.x[k] * r.x[k] + h(mode + std::sqrt(2.0) * scale * r.x[k]);
  }
  return std::log(std::sqrt(2.0) * scale) + stats::logsumexp(terms);
}

// ---------------------------------------------------------------------------
// Adaptive random-walk Metropolis

struct SamplerConfig {
  int burn_in = 2000;
  int keep = 4000;
  int adapt_window = 50;
  double target_accept = 0.30;
  std::uint64_t seed = 1;

  void validate() const {
    COMBODOSE_REQUIRE(burn_in >= 0 && keep >= 1, "sampler: burn_in must be >= 0 and keep >= 1");
    COMBODOSE_REQUIRE(adapt_window >= 1, "sampler: adapt_window must be >= 1");
    COMBODOSE_REQUIRE(target_accept > 0.0 && target_accept < 1.0, "sampler: target_accept must lie in (0,1)");
  }
};

struct SampleResult {
  int dim = 0;
  int keep = 0;
  std::vector<double> draws;  // keep x dim, row-major
  double acceptance = 0.0;
  std::vector<double> ess;
  std::vector<std::string> warnings;

  double at(int row, int col) const { return draws[static_cast<std::size_t>(row) * dim + col]; }
  std::span<const double> row(int r) const { return {draws.data() + static_cast<std::size_t>(r) * dim, static_cast<std::size_t>(dim)}; }

  std::vector<double> column(int col) const {
    std::vector<double> out(keep);
    for (int r = 0; r < keep; ++r) out[r] = at(r, col);
    return out;
  }
};

using LogDensity = std::function<double(std::span<const double>)>;

namespace detail {

inline double lag1_ess(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 3) return static_cast<double>(n);
  const double m = stats::mean(x);
  double c0 = 0.0, c1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) c0 += (x[i] - m) * (x[i] - m);
  for (std::size_t i = 1; i < n; ++i) c1 += (x[i] - m) * (x[i - 1] - m);
  if (c0 <= 0.0) return 0.0;
  const double r = std::clamp(c1 / c0, -0.99, 0.99);
  return static_cast<double>(n) * (1.0 - r) / (1.0 + r);
}

}  // namespace detail

/// Joint-proposal random-walk Metropolis. During burn-in the per-component
/// proposal scales track the empirical spread of the chain and a global
/// factor is tuned towards the target acceptance; both are frozen afterwards.
/// `init_scale` gives starting proposal sds (one per component).
inline SampleResult sample_posterior(const LogDensity& logpost, std::vector<double> init,
                                     std::vector<double> init_scale, const SamplerConfig& cfg,
                                     const std::vector<std::string>& names = {}) {
  cfg.validate();
  const int k = static_cast<int>(init.size());
  COMBODOSE_REQUIRE(k >= 1, "sampler: empty parameter vector");
  COMBODOSE_REQUIRE(init_scale.size() == init.size(), "sampler: init_scale length must match init");

  double cur_lp = logpost(init);
  if (!std::isfinite(cur_lp)) {
    auto label = [&](int c) { return names.size() == init.size() ? names[c] : "#" + std::to_string(c); };
    std::string which;
    for (int c = 0; c < k && which.empty(); ++c) {
      if (!std::isfinite(init[c])) which = label(c);
    }
    if (which.empty()) {
      for (int c = 0; c < k; ++c) which += (c ? "," : "") + label(c);
      which = "among (" + which + ")";
    }
    throw std::runtime_error("sampler: log-posterior is not finite at the initial point; offending parameter " + which);
  }

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<double> sd = init_scale;
  for (auto& s : sd) {
    if (!(s > 0.0) || !std::isfinite(s)) s = 1.0;
  }
  double log_global = std::log(2.38 / std::sqrt(static_cast<double>(k)));

  // running moments of burn-in draws (second half drives the scales)
  std::vector<double> run_mean(k, 0.0), run_m2(k, 0.0);
  long run_n = 0;

  std::vector<double> cur = std::move(init), prop(k);
  SampleResult res;
  res.dim = k;
  res.keep = cfg.keep;
  res.draws.resize(static_cast<std::size_t>(cfg.keep) * k);

  int window_acc = 0, window_n = 0, window_idx = 0;
  long kept_acc = 0;
  const int total = cfg.burn_in + cfg.keep;
  for (int it = 0; it < total; ++it) {
    const bool burning = it < cfg.burn_in;
    const double g = std::exp(log_global);
    for (int c = 0; c < k; ++c) prop[c] = cur[c] + g * sd[c] * gauss(rng);
    const double lp = logpost(prop);
    const bool accept = std::isfinite(lp) && std::log(unif(rng)) < lp - cur_lp;
    if (accept) {
      cur.swap(prop);
      cur_lp = lp;
    }
    if (burning) {
      window_acc += accept;
      ++window_n;
      if (it >= cfg.burn_in / 4) {
        ++run_n;
        for (int c = 0; c < k; ++c) {
          const double d = cur[c] - run_mean[c];
          run_mean[c] += d / static_cast<double>(run_n);
          run_m2[c] += d * (cur[c] - run_mean[c]);
        }
      }
      if (window_n == cfg.adapt_window) {
        ++window_idx;
        const double rate = static_cast<double>(window_acc) / window_n;
        log_global += (rate - cfg.target_accept) / std::sqrt(static_cast<double>(window_idx));
        log_global = std::clamp(log_global, -12.0, 4.0);
        if (run_n > 5 * cfg.adapt_window) {
          for (int c = 0; c < k; ++c) {
            const double v = run_m2[c] / static_cast<double>(run_n - 1);
            if (v > 1e-12 && std::isfinite(v)) sd[c] = std::sqrt(v);
          }
        }
        window_acc = window_n = 0;
      }
    } else {
      kept_acc += accept;
      std::copy(cur.begin(), cur.end(), res.draws.begin() + static_cast<std::size_t>(it - cfg.burn_in) * k);
    }
  }
  res.acceptance = static_cast<double>(kept_acc) / cfg.keep;
  res.ess.resize(k);
  for (int c = 0; c < k; ++c) res.ess[c] = detail::lag1_ess(res.column(c));
  if (res.acceptance < 0.05 || res.acceptance > 0.8) {
    res.warnings.push_back("acceptance rate " + std::to_string(res.acceptance) + " outside [0.05, 0.8]");
  }
  return res;
}

}  // namespace combodose
