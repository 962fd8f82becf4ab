#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "combodose/joint_outcome.hpp"

using namespace combodose;

TEST(Gumbel, IndependenceAtZeroPsi) {
  const auto c = gumbel_cells(0.4, 0.2, 0.0);
  EXPECT_NEAR(c(1, 1), 0.08, 1e-15);
  EXPECT_NEAR(c(0, 0), 0.48, 1e-15);
}

TEST(Gumbel, HandComputedCell) {
  // k = gA(1-gA)gT(1-gT) tanh(psi/2)
  const double gA = 0.5, gT = 0.3, psi = 1.2;
  const double k = 0.25 * 0.21 * std::tanh(0.6);
  const auto c = gumbel_cells(gA, gT, psi);
  EXPECT_NEAR(c(1, 1), gA * gT + k, 1e-15);
  EXPECT_NEAR(c(1, 0), (1 - gA) * gT - k, 1e-15);
  EXPECT_NEAR(c(0, 1), gA * (1 - gT) - k, 1e-15);
  EXPECT_NEAR(c(0, 0), (1 - gA) * (1 - gT) + k, 1e-15);
}

TEST(Gumbel, NormalizationOnRandomTriples) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 10.0);
  double worst_sum = 0, worst_marg = 0, min_cell = 1;
  for (int r = 0; r < 1'000'000; ++r) {
    const double gA = u(rng), gT = u(rng), psi = n(rng);
    const auto c = gumbel_cells(gA, gT, psi);
    worst_sum = std::max(worst_sum, std::abs(c.sum() - 1.0));
    worst_marg = std::max({worst_marg, std::abs(c(1, 0) + c(1, 1) - gT), std::abs(c(0, 1) + c(1, 1) - gA)});
    min_cell = std::min({min_cell, c(0, 0), c(0, 1), c(1, 0), c(1, 1)});
  }
  EXPECT_LT(worst_sum, 1e-12);
  EXPECT_LT(worst_marg, 1e-12);
  EXPECT_GE(min_cell, 0.0);
}

TEST(Gumbel, LogCellMatchesCells) {
  const auto c = gumbel_cells(0.7, 0.1, -2.0);
  for (int yT = 0; yT < 2; ++yT)
    for (int yA = 0; yA < 2; ++yA) EXPECT_NEAR(log_cell(0.7, 0.1, -2.0, yA, yT), std::log(c(yT, yA)), 1e-13);
}

TEST(Gumbel, ZeroCellIsFloored) {
  // gT = 0 makes the toxicity cells exactly zero
  const double v = log_cell(0.5, 0.0, 0.0, 1, 1);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v, std::log(kCellFloor), 1e-9);
}

TEST(Gumbel, JointLoglikSums) {
  std::vector<JointRecord> r{{0.3, 0.2, 1, 0}, {0.6, 0.4, 0, 1}};
  EXPECT_NEAR(joint_loglik(r, 0.5), log_cell(0.3, 0.2, 0.5, 1, 0) + log_cell(0.6, 0.4, 0.5, 0, 1), 1e-15);
}
