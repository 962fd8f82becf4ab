#include <gtest/gtest.h>

#include <cmath>

#include "combodose/datagen.hpp"
#include "combodose/scenarios.hpp"

using namespace combodose;

TEST(Lognormal, TwoQuantileFitIsExact) {
  for (double p : {0.05, 0.3, 0.6, 0.95}) {
    const auto t = solve_lognormal(p, 0.75 * p, 3);
    EXPECT_NEAR(t.cdf(1.0), 0.75 * p, 1e-12);
    EXPECT_NEAR(t.cdf(3.0), p, 1e-12);
    const auto a = solve_lognormal(p, p / 3, 3);
    EXPECT_NEAR(a.cdf(1.0), p / 3, 1e-12);
    EXPECT_NEAR(a.cdf(3.0), p, 1e-12);
  }
}

TEST(Lognormal, ZeroProbabilityNeverHappens) {
  const auto m = solve_lognormal(0.0, 0.0, 3);
  EXPECT_TRUE(m.never);
  EXPECT_TRUE(std::isinf(m.time(5.0)));
  EXPECT_FALSE(make_patient({1, 1}, 0.0, {m.time(0.0), 1.0}).tox_time);
}

TEST(Lognormal, CertainEventStaysFinite) {
  const auto m = solve_lognormal(1.0, 0.75, 3);
  EXPECT_TRUE(std::isfinite(m.mu) && std::isfinite(m.sigma));
  EXPECT_GT(m.cdf(3.0), 1 - 1e-11);
}

TEST(Lognormal, SingleCycleWindowFallback) {
  const auto m = solve_lognormal(0.4, 0.3, 1);
  EXPECT_NEAR(m.cdf(1.0), 0.4, 1e-12);
}

TEST(Lognormal, InvalidInputs) {
  EXPECT_THROW(solve_lognormal(1.2, 0.5, 3), InputError);
  EXPECT_THROW(solve_lognormal(0.4, 0.5, 3), InputError);
  EXPECT_THROW(solve_lognormal(0.4, 0.1, 0), InputError);
}

TEST(Latent, DeterministicAndDistinct) {
  const auto a = latent_pair(42, 7, -0.5), b = latent_pair(42, 7, -0.5), c = latent_pair(42, 8, -0.5);
  EXPECT_EQ(a.zT, b.zT);
  EXPECT_EQ(a.zA, b.zA);
  EXPECT_NE(a.zT, c.zT);
}

TEST(Generation, MonteCarloMatchesScenario) {
  const auto* s = find_builtin_scenario("T3.A2");
  ASSERT_NE(s, nullptr);
  const auto params = scenario_params(*s);
  const auto k = s->grid.index({2, 3});
  const int n = 1'000'000;
  int tox_w = 0, tox_1 = 0, act_w = 0;
  double szT = 0, szA = 0, sTT = 0, sAA = 0, sTA = 0;
  for (int r = 0; r < n; ++r) {
    const auto z = latent_pair(2024, r, params[k].rho);
    const auto e = generate_patient(params[k], z);
    tox_w += e.t_tox <= 3.0;
    tox_1 += e.t_tox <= 1.0;
    act_w += e.t_act <= 3.0;
    szT += z.zT;
    szA += z.zA;
    sTT += z.zT * z.zT;
    sAA += z.zA * z.zA;
    sTA += z.zT * z.zA;
  }
  EXPECT_NEAR(tox_w / double(n), s->p_tox[k], 0.002);
  EXPECT_NEAR(tox_1 / double(n), 0.75 * s->p_tox[k], 0.002);
  EXPECT_NEAR(act_w / double(n), s->p_act[k], 0.002);
  const double mT = szT / n, mA = szA / n;
  const double rho = (sTA / n - mT * mA) / std::sqrt((sTT / n - mT * mT) * (sAA / n - mA * mA));
  EXPECT_NEAR(rho, -0.5, 0.01);
}

TEST(Generation, ScenarioParamsRejectBadScenario) {
  auto s = *find_builtin_scenario("S1");
  s.p_tox[0] = 1.5;
  EXPECT_THROW(scenario_params(s), InputError);
}
