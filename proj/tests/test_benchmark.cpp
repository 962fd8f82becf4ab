#include <gtest/gtest.h>

#include <cmath>

#include "combodose/benchmark.hpp"
#include "combodose/engine.hpp"
#include "combodose/scenarios.hpp"

using namespace combodose;

TEST(Isotonic, PoolAdjacentViolators) {
  EXPECT_EQ(isotonic_increasing({0.1, 0.2, 0.3}), (std::vector<double>{0.1, 0.2, 0.3}));
  const auto f = isotonic_increasing({0.3, 0.1, 0.2, 0.6, 0.4});
  const std::vector<double> expect{0.2, 0.2, 0.2, 0.5, 0.5};
  for (std::size_t k = 0; k < f.size(); ++k) EXPECT_NEAR(f[k], expect[k], 1e-15);
  EXPECT_TRUE(isotonic_increasing({}).empty());
}

TEST(Benchmark, DegenerateScenarioPicksTheOnlyGoodCombo) {
  auto s = *find_builtin_scenario("S3");
  for (std::size_t c = 0; c < s.grid.size(); ++c) {
    s.p_tox[c] = 1.0;
    s.p_act[c] = 0.0;
  }
  const auto k = s.grid.index({2, 3});
  s.p_tox[k] = 0.0;
  s.p_act[k] = 1.0;
  const auto params = scenario_params(s);
  for (int r = 0; r < 50; ++r) {
    const auto o = benchmark_replicate(s, {}, replicate_data_seed(1, r), &params);
    ASSERT_TRUE(o.selection);
    EXPECT_EQ(*o.selection, (DoseCombo{2, 3}));
  }
}

TEST(Benchmark, NothingSafeMostlyMeansNoSelection) {
  // T6.A1: the four p_tox = 0.4 combos share one completed toxicity count under
  // common random numbers; d11 is toxicity-admissible iff that count is <= 20 of
  // 60, and its activity (0.2) is admissible almost surely.
  const auto* s = find_builtin_scenario("T6.A1");
  int cut = -1;
  for (int x = 0; x <= 60; ++x)
    if (stats::beta_cdf(0.3, 1.0 + x, 61.0 - x) > 0.2) cut = x;
  ASSERT_EQ(cut, 20);
  double p_adm = 0, c = 1;  // P(Binomial(60, 0.4) <= 20)
  for (int k = 0; k <= cut; ++k) {
    p_adm += c * std::pow(0.4, k) * std::pow(0.6, 60 - k);
    c = c * (60 - k) / (k + 1);
  }
  const auto params = scenario_params(*s);
  const int reps = 2000;
  int none = 0;
  for (int r = 0; r < reps; ++r) none += !benchmark_replicate(*s, {}, replicate_data_seed(3, r), &params).selection;
  const double rate = double(none) / reps, expect = 1 - p_adm;
  EXPECT_NEAR(rate, expect, 4 * std::sqrt(expect * (1 - expect) / reps)) << "oracle " << expect;
  EXPECT_GT(rate, 0.75);
}

TEST(Benchmark, CompletedToxicityIsMonotoneAcrossCombos) {
  for (const char* name : {"T2.A2", "S4"}) {
    const auto* s = find_builtin_scenario(name);
    const auto params = scenario_params(*s);
    const auto& g = s->grid;
    for (int r = 0; r < 500; ++r) {
      const auto d = complete_information(*s, 1, replicate_data_seed(5, r), params);
      for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b) {
          const auto ca = g.combo(a), cb = g.combo(b);
          if (ca.i >= cb.i && ca.j >= cb.j && s->p_tox[a] >= s->p_tox[b]) EXPECT_GE(d.x_tox[a], d.x_tox[b]);
        }
    }
  }
}

TEST(Benchmark, EstimatesAreProbabilities) {
  const auto* s = find_builtin_scenario("T3.A4");
  const auto o = benchmark_replicate(*s, {}, 99);
  for (std::size_t c = 0; c < s->grid.size(); ++c) {
    EXPECT_GE(o.est_tox[c], 0.0);
    EXPECT_LE(o.est_tox[c], 1.0 + 1e-12);
    EXPECT_GE(o.est_act[c], 0.0);
    EXPECT_LE(o.est_act[c], 1.0 + 1e-12);
  }
}

TEST(Benchmark, Deterministic) {
  const auto* s = find_builtin_scenario("S5");
  BenchmarkConfig cfg;
  cfg.convention = UtilityConvention::boin;
  const auto a = benchmark_replicate(*s, cfg, 12), b = benchmark_replicate(*s, cfg, 12);
  EXPECT_EQ(a.selection, b.selection);
  EXPECT_EQ(a.est_tox, b.est_tox);
}

TEST(Benchmark, SharesLatentPairsWithTrials) {
  // the benchmark's pseudo-patient k carries the trial's patient k latent pair
  const auto* s = find_builtin_scenario("T1.A1");
  const auto params = scenario_params(*s);
  const auto seed = replicate_data_seed(8, 0);
  const ScenarioDataSource src(*s, seed);
  const auto c = s->grid.index({2, 2});
  int prev = 0;
  for (int k = 0; k < 8; ++k) {
    const int now = complete_information(*s, k + 1, seed, params).x_tox[c];
    const auto p = src.patient(k, {2, 2}, 0.0);
    EXPECT_EQ(now - prev, p.tox_time && *p.tox_time <= 3.0) << k;
    prev = now;
  }
}
