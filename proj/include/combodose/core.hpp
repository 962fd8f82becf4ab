#pragma once
// Shared domain types: dosing grid, targets, patient follow-up, utilities
// and true-dose classification.

#include <algorithm>
#include <cmath>
#include <compare>
#include <functional>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace combodose {

/// Raised for malformed inputs (bad grids, out-of-range probabilities,
/// inconsistent data files). The CLI maps it to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

#define COMBODOSE_REQUIRE(cond, msg)                         \
  do {                                                       \
    if (!(cond)) throw ::combodose::InputError(msg);         \
  } while (0)

/// Dose combination d_ij, 1-based on both agents.
struct DoseCombo {
  int i = 1;
  int j = 1;

  friend constexpr auto operator<=>(const DoseCombo&, const DoseCombo&) = default;
};

inline std::string to_string(DoseCombo d) {
  return "d" + std::to_string(d.i) + std::to_string(d.j);
}

/// I x J grid of physical doses. Agent 1 indexes rows (i), agent 2 columns (j).
class DoseGrid {
 public:
  DoseGrid() = default;
  DoseGrid(std::vector<double> agent1_doses, std::vector<double> agent2_doses)
      : agent1_(std::move(agent1_doses)), agent2_(std::move(agent2_doses)) {
    COMBODOSE_REQUIRE(!agent1_.empty() && !agent2_.empty(), "dose grid: each agent needs at least one dose");
    auto strictly_increasing = [](const std::vector<double>& v) {
      return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
    };
    COMBODOSE_REQUIRE(strictly_increasing(agent1_), "dose grid: agent 1 doses must be strictly increasing");
    COMBODOSE_REQUIRE(strictly_increasing(agent2_), "dose grid: agent 2 doses must be strictly increasing");
  }

  int rows() const { return static_cast<int>(agent1_.size()); }
  int cols() const { return static_cast<int>(agent2_.size()); }
  std::size_t size() const { return agent1_.size() * agent2_.size(); }

  const std::vector<double>& agent1_doses() const { return agent1_; }
  const std::vector<double>& agent2_doses() const { return agent2_; }
  double agent1_dose(int i) const { return agent1_.at(static_cast<std::size_t>(i - 1)); }
  double agent2_dose(int j) const { return agent2_.at(static_cast<std::size_t>(j - 1)); }

  bool contains(DoseCombo d) const { return d.i >= 1 && d.i <= rows() && d.j >= 1 && d.j <= cols(); }

  /// Row-major flat index: (i-1)*J + (j-1).
  std::size_t index(DoseCombo d) const {
    if (!contains(d)) throw InputError("combo " + to_string(d) + " is outside the " + shape() + " grid");
    return static_cast<std::size_t>((d.i - 1) * cols() + (d.j - 1));
  }

  DoseCombo combo(std::size_t idx) const {
    const int c = cols();
    return {static_cast<int>(idx) / c + 1, static_cast<int>(idx) % c + 1};
  }

  std::vector<DoseCombo> combos() const {
    std::vector<DoseCombo> out;
    out.reserve(size());
    for (std::size_t k = 0; k < size(); ++k) out.push_back(combo(k));
    return out;
  }

  DoseCombo lowest() const { return {1, 1}; }
  DoseCombo highest() const { return {rows(), cols()}; }

  std::string shape() const { return std::to_string(rows()) + "x" + std::to_string(cols()); }

  friend bool operator==(const DoseGrid&, const DoseGrid&) = default;

 private:
  std::vector<double> agent1_;
  std::vector<double> agent2_;
};

/// Per-combo value laid out by DoseGrid::index.
template <class T>
using ComboMap = std::vector<T>;

struct TargetSpec {
  double phi_T = 0.3;  // toxicity target over the window
  double phi_A = 0.2;  // activity target over the window
  double q_T = 0.2;
  double q_A = 0.2;
  int tau = 3;  // follow-up window in cycles

  void validate() const {
    auto open01 = [](double p) { return p > 0.0 && p < 1.0; };
    COMBODOSE_REQUIRE(open01(phi_T) && open01(phi_A), "targets: phi_T and phi_A must lie in (0,1)");
    COMBODOSE_REQUIRE(open01(q_T) && open01(q_A), "targets: q_T and q_A must lie in (0,1)");
    COMBODOSE_REQUIRE(tau >= 1, "targets: tau must be >= 1");
  }
};

/// One enrolled patient. Event times are measured from the patient's entry,
/// in cycles; an absent time means no event ever occurs.
struct PatientRecord {
  DoseCombo combo;
  double entry_time = 0.0;
  std::optional<double> tox_time;
  std::optional<double> act_time;
};

/// Outcome of one patient as seen at a given clock time.
struct ObservedOutcome {
  int y_T = 0;
  double w_T = 0.0;
  bool delta_T = false;
  int y_A = 0;
  double w_A = 0.0;
  bool delta_A = false;
};

/// TITE weights at clock `now`. Follow-up is capped at tau; a DLT seen
/// before any activity event censors activity at the DLT time.
inline ObservedOutcome compute_weights(const PatientRecord& p, double now, int tau) {
  const double elapsed = now - p.entry_time;
  COMBODOSE_REQUIRE(elapsed >= 0.0, "compute_weights: clock precedes patient entry");
  COMBODOSE_REQUIRE(tau >= 1, "compute_weights: tau must be >= 1");
  const double t = static_cast<double>(tau);
  const double f = std::min(elapsed, t);
  const bool complete = f >= t;

  ObservedOutcome o;
  const bool tox_seen = p.tox_time && *p.tox_time <= f;
  if (tox_seen) {
    o.y_T = 1;
    o.w_T = 1.0;
    o.delta_T = true;
  } else {
    o.w_T = f / t;
    o.delta_T = complete;
  }

  const bool act_seen = p.act_time && *p.act_time <= f;
  if (act_seen && (!tox_seen || *p.act_time <= *p.tox_time)) {
    o.y_A = 1;
    o.w_A = 1.0;
    o.delta_A = true;
  } else if (tox_seen) {
    o.w_A = std::max(*p.tox_time, 0.0) / t;
    o.delta_A = true;
  } else {
    o.w_A = f / t;
    o.delta_A = complete;
  }
  return o;
}

enum class PenaltyForm { fixed, scaled };

inline std::string to_string(PenaltyForm f) { return f == PenaltyForm::fixed ? "fixed" : "scaled"; }

inline PenaltyForm parse_penalty_form(const std::string& s) {
  if (s == "fixed") return PenaltyForm::fixed;
  if (s == "scaled") return PenaltyForm::scaled;
  throw InputError("unknown penalty form '" + s + "' (expected fixed|scaled)");
}

struct UtilityWeights {
  double omega1 = 0.33;
  double omega2 = 1.09;
  PenaltyForm penalty = PenaltyForm::fixed;

  void validate() const {
    COMBODOSE_REQUIRE(omega1 >= 0.0 && omega2 >= 0.0, "utility weights must be nonnegative");
  }
};

/// Trade-off utility for the model-based designs.
/// fixed:  piA - w1*piT - w2*1(piT > phiT)
/// scaled: piA - w1*piT - w2*piT*1(piT > phiT)
inline double utility_model_based(double piA, double piT, const UtilityWeights& w, double phi_T) {
  const double over = piT > phi_T ? 1.0 : 0.0;
  const double penalty = w.penalty == PenaltyForm::fixed ? w.omega2 * over : w.omega2 * piT * over;
  return piA - w.omega1 * piT - penalty;
}

/// Outcome scores Psi_{yT yA} on [0,100].
struct BoinUtilityTable {
  double psi01 = 100.0;
  double psi00 = 40.0;
  double psi10 = 0.0;
  double psi11 = 60.0;

  double score(int yT, int yA) const {
    if (yT == 0) return yA == 1 ? psi01 : psi00;
    return yA == 1 ? psi11 : psi10;
  }

  void validate() const {
    auto in_range = [](double v) { return v >= 0.0 && v <= 100.0; };
    COMBODOSE_REQUIRE(in_range(psi01) && in_range(psi00) && in_range(psi10) && in_range(psi11),
                      "utility table scores must lie in [0,100]");
    COMBODOSE_REQUIRE(psi01 >= psi00 && psi00 >= psi10 && psi01 >= psi11 && psi11 >= psi10,
                      "utility table must satisfy psi01 >= psi00 >= psi10 and psi01 >= psi11 >= psi10");
  }
};

/// Expected outcome score under independent toxicity and activity.
inline double utility_boin_true(double piA, double piT, const BoinUtilityTable& t) {
  return t.psi01 * piA * (1.0 - piT) + t.psi00 * (1.0 - piA) * (1.0 - piT) + t.psi11 * piA * piT +
         t.psi10 * (1.0 - piA) * piT;
}

enum class UtilityConvention { model_based, boin };

inline std::string to_string(UtilityConvention c) { return c == UtilityConvention::model_based ? "model" : "boin"; }

// ---------------------------------------------------------------------------
// Scenarios and classification

/// Good/correct flags as tabulated alongside a scenario.
struct ShippedFlags {
  ComboMap<bool> good;
  std::optional<DoseCombo> correct;
};

struct ScenarioSpec {
  std::string name;
  DoseGrid grid;
  ComboMap<double> p_tox;
  ComboMap<double> p_act;
  int tau = 3;
  double tox_cycle1_fraction = 0.75;
  bool act_equal_split = true;
  std::optional<ShippedFlags> flags_model;
  std::optional<ShippedFlags> flags_boin;

  double tox(DoseCombo d) const { return p_tox[grid.index(d)]; }
  double act(DoseCombo d) const { return p_act[grid.index(d)]; }

  const std::optional<ShippedFlags>& shipped(UtilityConvention c) const {
    return c == UtilityConvention::model_based ? flags_model : flags_boin;
  }

  void validate() const {
    COMBODOSE_REQUIRE(p_tox.size() == grid.size() && p_act.size() == grid.size(),
                      "scenario " + name + ": probability tables do not match the grid");
    for (std::size_t k = 0; k < grid.size(); ++k) {
      COMBODOSE_REQUIRE(p_tox[k] >= 0.0 && p_tox[k] <= 1.0 && p_act[k] >= 0.0 && p_act[k] <= 1.0,
                        "scenario " + name + ": probabilities must lie in [0,1]");
    }
    COMBODOSE_REQUIRE(tau >= 1, "scenario " + name + ": tau must be >= 1");
    COMBODOSE_REQUIRE(tox_cycle1_fraction > 0.0 && tox_cycle1_fraction <= 1.0,
                      "scenario " + name + ": tox_cycle1_fraction must lie in (0,1]");
    for (const auto* f : {&flags_model, &flags_boin}) {
      if (!*f) continue;
      COMBODOSE_REQUIRE((*f)->good.size() == grid.size(), "scenario " + name + ": good-flag table does not match grid");
      if ((*f)->correct) COMBODOSE_REQUIRE(grid.contains(*(*f)->correct), "scenario " + name + ": correct combo outside grid");
    }
  }
};

struct ComboClass {
  bool safe = false;
  bool active = false;
  bool acceptable = false;
  bool good = false;
  bool correct = false;
  double utility = 0.0;
};

struct Classification {
  ComboMap<ComboClass> combos;
  std::optional<DoseCombo> correct;  // empty when nothing is acceptable
};

struct ClassifyOptions {
  UtilityConvention convention = UtilityConvention::model_based;
  UtilityWeights weights{};
  BoinUtilityTable table{};
  double phi_T = 0.3;
  double safe_threshold = 0.3;    // safe <=> p_tox <= this
  double active_threshold = 0.2;  // active <=> p_act >= this
  double eps_good = 0.0;
  bool use_shipped_flags = true;
};

namespace detail {
// Table probabilities are two-decimal values; compare with a little slack so
// that 0.1 + 0.2 style roundoff never flips a boundary cell.
constexpr double kClassTol = 1e-12;
}  // namespace detail

/// Safe/active/acceptable from the truth; correct and good from the shipped
/// flags when present, otherwise computed (utility argmax and eps_good band).
inline Classification classify_doses(const ScenarioSpec& s, const ClassifyOptions& opt = {}) {
  Classification out;
  out.combos.resize(s.grid.size());
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    auto& c = out.combos[k];
    c.safe = s.p_tox[k] <= opt.safe_threshold + detail::kClassTol;
    c.active = s.p_act[k] >= opt.active_threshold - detail::kClassTol;
    c.acceptable = c.safe && c.active;
    c.utility = opt.convention == UtilityConvention::model_based
                    ? utility_model_based(s.p_act[k], s.p_tox[k], opt.weights, opt.phi_T)
                    : utility_boin_true(s.p_act[k], s.p_tox[k], opt.table);
  }

  const auto& shipped = s.shipped(opt.convention);
  if (opt.use_shipped_flags && shipped) {
    for (std::size_t k = 0; k < s.grid.size(); ++k) {
      out.combos[k].good = shipped->good[k] && out.combos[k].acceptable;
    }
    if (shipped->correct && out.combos[s.grid.index(*shipped->correct)].acceptable) {
      out.correct = shipped->correct;
    }
  } else {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < s.grid.size(); ++k) {
      if (!out.combos[k].acceptable) continue;
      if (!best || out.combos[k].utility > out.combos[*best].utility) best = k;
    }
    if (best) {
      out.correct = s.grid.combo(*best);
      const double top = out.combos[*best].utility;
      for (auto& c : out.combos) c.good = c.acceptable && c.utility >= top - opt.eps_good;
    }
  }
  if (out.correct) {
    auto& c = out.combos[s.grid.index(*out.correct)];
    c.correct = true;
    c.good = true;
  }
  return out;
}

}  // namespace combodose
