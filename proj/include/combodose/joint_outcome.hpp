#pragma once
// Gumbel (Morgenstern-type) bivariate binary kernel linking activity and
// toxicity marginals.

#include <array>
#include <cmath>
#include <span>

namespace combodose {

/// Cell probabilities indexed as p[yT][yA].
struct CellProbs {
  std::array<std::array<double, 2>, 2> p{};
  double psi = 0.0;

  double operator()(int yT, int yA) const { return p[yT][yA]; }
  double sum() const { return p[0][0] + p[0][1] + p[1][0] + p[1][1]; }
};

inline CellProbs gumbel_cells(double gA, double gT, double psi) {
  const double k = gA * (1.0 - gA) * gT * (1.0 - gT) * std::tanh(0.5 * psi);
  CellProbs c;
  c.psi = psi;
  for (int a = 0; a < 2; ++a) {
    const double ma = a ? gA : 1.0 - gA;
    for (int b = 0; b < 2; ++b) {
      const double mb = b ? gT : 1.0 - gT;
      c.p[b][a] = ma * mb + ((a + b) % 2 == 0 ? k : -k);
    }
  }
  return c;
}

inline constexpr double kCellFloor = 1e-300;

inline double log_cell(double gA, double gT, double psi, int yA, int yT) {
  const double k = gA * (1.0 - gA) * gT * (1.0 - gT) * std::tanh(0.5 * psi);
  const double ma = yA ? gA : 1.0 - gA;
  const double mb = yT ? gT : 1.0 - gT;
  const double cell = ma * mb + (yA == yT ? k : -k);
  return std::log(cell > kCellFloor ? cell : kCellFloor);
}

struct JointRecord {
  double gA = 0.0;
  double gT = 0.0;
  int yA = 0;
  int yT = 0;
};

inline double joint_loglik(std::span<const JointRecord> records, double psi) {
  double s = 0.0;
  for (const auto& r : records) s += log_cell(r.gA, r.gT, psi, r.yA, r.yT);
  return s;
}

}  // namespace combodose
