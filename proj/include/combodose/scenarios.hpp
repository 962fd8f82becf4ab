#pragma once
// Built-in scenarios as ScenarioSpec values.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "combodose/core.hpp"
#include "combodose/scenario_library.hpp"

namespace combodose {

namespace detail {

inline std::optional<DoseCombo> parse_ij(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return DoseCombo{s[0] - '0', s[1] - '0'};
}

inline ShippedFlags parse_flags(std::string_view good, std::string_view correct) {
  ShippedFlags f;
  for (char ch : good) f.good.push_back(ch == '1');
  f.correct = parse_ij(correct);
  return f;
}

template <std::size_t I, std::size_t J>
std::vector<double> flatten(const std::array<std::array<double, J>, I>& g) {
  std::vector<double> v;
  for (const auto& row : g) v.insert(v.end(), row.begin(), row.end());
  return v;
}

}  // namespace detail

inline DoseGrid grid_2x5() { return {library::agent1_doses_25(), library::agent2_doses_25()}; }
inline DoseGrid grid_3x3() { return {library::agent1_doses_33(), library::agent2_doses_33()}; }

inline const std::vector<ScenarioSpec>& builtin_scenarios() {
  static const std::vector<ScenarioSpec> all = [] {
    std::vector<ScenarioSpec> v;
    const auto g25 = grid_2x5();
    for (const auto& t : library::kToxicity25) {
      for (const auto& a : library::kActivity25) {
        ScenarioSpec s;
        s.name = std::string(t.name) + "." + std::string(a.name);
        s.grid = g25;
        s.p_tox = detail::flatten(t.p);
        s.p_act = detail::flatten(a.p);
        for (const auto& f : library::kFlags25) {
          if (f.scenario == s.name) {
            s.flags_model = detail::parse_flags(f.good_model, f.correct_model);
            s.flags_boin = detail::parse_flags(f.good_boin, f.correct_boin);
          }
        }
        v.push_back(std::move(s));
      }
    }
    const auto g33 = grid_3x3();
    for (const auto& sc : library::kScenarios33) {
      ScenarioSpec s;
      s.name = std::string(sc.name);
      s.grid = g33;
      s.p_tox = detail::flatten(sc.tox);
      s.p_act = detail::flatten(sc.act);
      s.flags_model = detail::parse_flags(sc.good_model, sc.correct_model);
      v.push_back(std::move(s));
    }
    for (const auto& s : v) s.validate();
    return v;
  }();
  return all;
}

inline std::vector<std::string> builtin_scenario_names() {
  std::vector<std::string> out;
  for (const auto& s : builtin_scenarios()) out.push_back(s.name);
  return out;
}

inline const ScenarioSpec* find_builtin_scenario(const std::string& name) {
  for (const auto& s : builtin_scenarios()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

}  // namespace combodose
