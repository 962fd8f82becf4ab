#pragma once
// Built-in scenario library: six toxicity and six activity profiles on the
// 2x5 grid (crossed into 36 scenarios) and six scenarios on the 3x3 grid.
// Good/correct flags are transcribed from the published utility tables.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "combodose/core.hpp"

namespace combodose {
namespace library {

using Grid25 = std::array<std::array<double, 5>, 2>;
using Grid33 = std::array<std::array<double, 3>, 3>;

struct Profile25 {
  std::string_view name;
  Grid25 p;
};

inline constexpr std::array<Profile25, 6> kToxicity25{{
    {"T1", {{{0.03, 0.07, 0.11, 0.15, 0.2}, {0.05, 0.09, 0.13, 0.25, 0.3}}}},
    {"T2", {{{0.1, 0.15, 0.2, 0.3, 0.4}, {0.45, 0.5, 0.55, 0.6, 0.6}}}},
    {"T3", {{{0.05, 0.08, 0.15, 0.2, 0.45}, {0.1, 0.12, 0.3, 0.4, 0.5}}}},
    {"T4", {{{0.1, 0.2, 0.4, 0.5, 0.6}, {0.3, 0.45, 0.55, 0.6, 0.6}}}},
    {"T5", {{{0.3, 0.45, 0.5, 0.55, 0.6}, {0.4, 0.5, 0.55, 0.6, 0.6}}}},
    {"T6", {{{0.4, 0.4, 0.5, 0.5, 0.6}, {0.4, 0.4, 0.5, 0.5, 0.6}}}},
}};

inline constexpr std::array<Profile25, 6> kActivity25{{
    {"A1", {{{0.2, 0.3, 0.35, 0.5, 0.55}, {0.25, 0.4, 0.45, 0.6, 0.65}}}},
    {"A2", {{{0.3, 0.32, 0.38, 0.4, 0.46}, {0.34, 0.36, 0.42, 0.44, 0.48}}}},
    {"A3", {{{0.06, 0.08, 0.12, 0.2, 0.3}, {0.1, 0.15, 0.25, 0.35, 0.4}}}},
    {"A4", {{{0.05, 0.2, 0.3, 0.4, 0.5}, {0.1, 0.25, 0.35, 0.45, 0.55}}}},
    {"A5", {{{0.1, 0.12, 0.14, 0.16, 0.18}, {0.2, 0.3, 0.4, 0.5, 0.6}}}},
    {"A6", {{{0.1, 0.1, 0.1, 0.1, 0.1}, {0.1, 0.1, 0.1, 0.1, 0.2}}}},
}};

// good mask in row-major order, then the correct combo as "ij" (or "" for none)
struct FlagRow {
  std::string_view scenario;
  std::string_view good_model;
  std::string_view correct_model;
  std::string_view good_boin;
  std::string_view correct_boin;
};

inline constexpr std::array<FlagRow, 36> kFlags25{{
    {"T1.A1", "0000100011", "25", "0001100011", "25"},
    {"T1.A2", "0111111111", "15", "1111111111", "23"},
    {"T1.A3", "0000100111", "25", "0000100111", "25"},
    {"T1.A4", "0000100011", "25", "0001100011", "15"},
    {"T1.A5", "0000000011", "25", "0000000011", "25"},
    {"T1.A6", "0000000001", "25", "0000000001", "25"},
    {"T2.A1", "0001000000", "14", "0011000000", "14"},
    {"T2.A2", "1111000000", "13", "1111000000", "13"},
    {"T2.A3", "0001000000", "14", "0001000000", "14"},
    {"T2.A4", "0011000000", "14", "0011000000", "14"},
    {"T2.A5", "0000000000", "", "0000000000", ""},
    {"T2.A6", "0000000000", "", "0000000000", ""},
    {"T3.A1", "0001001100", "14", "0001001000", "14"},
    {"T3.A2", "1111011100", "14", "1111011100", "13"},
    {"T3.A3", "0001000100", "23", "0001000100", "14"},
    {"T3.A4", "0011000100", "14", "0001000100", "14"},
    {"T3.A5", "0000001100", "23", "0000001100", "23"},
    {"T3.A6", "0000000000", "", "0000000000", ""},
    {"T4.A1", "1100010000", "12", "0100000000", "12"},
    {"T4.A2", "1100010000", "11", "1100000000", "11"},
    {"T4.A3", "0000000000", "", "0000000000", ""},
    {"T4.A4", "0100000000", "12", "0100000000", "12"},
    {"T4.A5", "0000010000", "21", "0000010000", "21"},
    {"T4.A6", "0000000000", "", "0000000000", ""},
    {"T5.A1", "1000000000", "11", "1000000000", "11"},
    {"T5.A2", "1000000000", "11", "1000000000", "11"},
    {"T5.A3", "0000000000", "", "0000000000", ""},
    {"T5.A4", "0000000000", "", "0000000000", ""},
    {"T5.A5", "0000000000", "", "0000000000", ""},
    {"T5.A6", "0000000000", "", "0000000000", ""},
    {"T6.A1", "0000000000", "", "0000000000", ""},
    {"T6.A2", "0000000000", "", "0000000000", ""},
    {"T6.A3", "0000000000", "", "0000000000", ""},
    {"T6.A4", "0000000000", "", "0000000000", ""},
    {"T6.A5", "0000000000", "", "0000000000", ""},
    {"T6.A6", "0000000000", "", "0000000000", ""},
}};

struct Scenario33 {
  std::string_view name;
  Grid33 tox;
  Grid33 act;
  std::string_view good_model;
  std::string_view correct_model;
};

inline constexpr std::array<Scenario33, 6> kScenarios33{{
    {"S1",
     {{{0.1, 0.15, 0.2}, {0.15, 0.2, 0.3}, {0.2, 0.3, 0.45}}},
     {{{0.05, 0.1, 0.15}, {0.2, 0.25, 0.3}, {0.35, 0.4, 0.45}}},
     "000001110", "32"},
    {"S2",
     {{{0.05, 0.09, 0.11}, {0.07, 0.13, 0.25}, {0.15, 0.2, 0.3}}},
     {{{0.05, 0.08, 0.1}, {0.1, 0.12, 0.15}, {0.2, 0.3, 0.4}}},
     "000000011", "33"},
    {"S3",
     {{{0.05, 0.1, 0.15}, {0.2, 0.25, 0.3}, {0.4, 0.45, 0.5}}},
     {{{0.1, 0.2, 0.3}, {0.2, 0.3, 0.4}, {0.3, 0.4, 0.5}}},
     "001011000", "23"},
    {"S4",
     {{{0.2, 0.25, 0.3}, {0.4, 0.45, 0.5}, {0.5, 0.55, 0.6}}},
     {{{0.2, 0.25, 0.45}, {0.3, 0.4, 0.5}, {0.35, 0.5, 0.6}}},
     "001000000", "13"},
    {"S5",
     {{{0.05, 0.1, 0.2}, {0.15, 0.25, 0.35}, {0.3, 0.4, 0.45}}},
     {{{0.05, 0.15, 0.3}, {0.1, 0.25, 0.4}, {0.2, 0.35, 0.45}}},
     "001010000", "13"},
    {"S6",
     {{{0.05, 0.2, 0.4}, {0.1, 0.25, 0.45}, {0.15, 0.3, 0.5}}},
     {{{0.05, 0.2, 0.35}, {0.1, 0.25, 0.4}, {0.15, 0.3, 0.45}}},
     "010010010", "32"},
}};

inline const std::vector<double>& agent1_doses_25() {
  static const std::vector<double> v{600, 1200};
  return v;
}
inline const std::vector<double>& agent2_doses_25() {
  static const std::vector<double> v{50, 75, 100, 125, 150};
  return v;
}
inline const std::vector<double>& agent1_doses_33() {
  static const std::vector<double> v{600, 1200, 1800};
  return v;
}
inline const std::vector<double>& agent2_doses_33() {
  static const std::vector<double> v{50, 75, 100};
  return v;
}

}  // namespace library
}  // namespace combodose
