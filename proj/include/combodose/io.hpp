#pragma once
// JSON and CSV plumbing for scenarios, configurations, trial data and results.

#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "combodose/calibrate.hpp"
#include "combodose/core.hpp"
#include "combodose/design.hpp"
#include "combodose/engine.hpp"
#include "combodose/metrics.hpp"

#ifndef COMBODOSE_VERSION
#define COMBODOSE_VERSION "0.1.0"
#endif

namespace combodose::io {

using json = nlohmann::json;

inline constexpr const char* kVersion = COMBODOSE_VERSION;

// ---------------------------------------------------------------------------
// Field access with path diagnostics

namespace detail {

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline const json& require(const json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) throw InputError(path.empty() ? "expected a JSON object" : path + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw InputError(join(path, key) + ": missing field");
  return *it;
}

inline double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw InputError(where + ": expected a number");
  return v.get<double>();
}

inline int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw InputError(where + ": expected an integer");
  return v.get<int>();
}

inline std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw InputError(where + ": expected a string");
  return v.get<std::string>();
}

inline bool as_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) throw InputError(where + ": expected true or false");
  return v.get<bool>();
}

inline std::vector<double> as_numbers(const json& v, const std::string& where) {
  if (!v.is_array()) throw InputError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(as_number(v[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

template <class T, class F>
void read_opt(const json& j, const std::string& path, const std::string& key, T& dst, F&& conv) {
  if (!j.is_object()) throw InputError((path.empty() ? std::string("document") : path) + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  dst = conv(*it, join(path, key));
}

inline void opt_number(const json& j, const std::string& p, const std::string& k, double& d) {
  read_opt(j, p, k, d, as_number);
}
inline void opt_int(const json& j, const std::string& p, const std::string& k, int& d) { read_opt(j, p, k, d, as_int); }
inline void opt_bool(const json& j, const std::string& p, const std::string& k, bool& d) {
  read_opt(j, p, k, d, as_bool);
}

inline DoseCombo parse_combo_text(const std::string& s, const std::string& where) {
  if (s.size() == 3 && s[0] == 'd' && std::isdigit(static_cast<unsigned char>(s[1])) &&
      std::isdigit(static_cast<unsigned char>(s[2]))) {
    return {s[1] - '0', s[2] - '0'};
  }
  throw InputError(where + ": expected a combo like \"d22\"");
}

inline DoseCombo as_combo(const json& v, const std::string& where) {
  if (v.is_string()) return parse_combo_text(v.get<std::string>(), where);
  if (v.is_array() && v.size() == 2) return {as_int(v[0], where + "[0]"), as_int(v[1], where + "[1]")};
  throw InputError(where + ": expected [i, j] or \"dIJ\"");
}

inline std::vector<double> as_matrix(const json& v, const DoseGrid& g, const std::string& where) {
  if (!v.is_array() || v.size() != static_cast<std::size_t>(g.rows())) {
    throw InputError(where + ": expected " + std::to_string(g.rows()) + " rows (agent-1 levels)");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto row = as_numbers(v[i], where + "[" + std::to_string(i) + "]");
    if (row.size() != static_cast<std::size_t>(g.cols())) {
      throw InputError(where + "[" + std::to_string(i) + "]: expected " + std::to_string(g.cols()) + " columns");
    }
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

inline json matrix_json(const std::vector<double>& v, const DoseGrid& g) {
  json m = json::array();
  for (int i = 0; i < g.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < g.cols(); ++j) row.push_back(v[i * g.cols() + j]);
    m.push_back(row);
  }
  return m;
}

}  // namespace detail

inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(source + ": malformed JSON: " + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write file");
  out << text;
}

// ---------------------------------------------------------------------------
// Grids and scenarios

inline json to_json(const DoseGrid& g) { return {{"agent1_doses", g.agent1_doses()}, {"agent2_doses", g.agent2_doses()}}; }

inline DoseGrid grid_from_json(const json& j, const std::string& path = "grid") {
  return DoseGrid(detail::as_numbers(detail::require(j, path, "agent1_doses"), detail::join(path, "agent1_doses")),
                  detail::as_numbers(detail::require(j, path, "agent2_doses"), detail::join(path, "agent2_doses")));
}

inline json to_json(const ShippedFlags& f, const DoseGrid& g) {
  std::vector<double> good(f.good.begin(), f.good.end());
  json j = {{"good", detail::matrix_json(good, g)}};
  j["correct"] = f.correct ? json(to_string(*f.correct)) : json(nullptr);
  return j;
}

inline ShippedFlags flags_from_json(const json& j, const DoseGrid& g, const std::string& path) {
  ShippedFlags f;
  for (double v : detail::as_matrix(detail::require(j, path, "good"), g, detail::join(path, "good"))) {
    f.good.push_back(v != 0.0);
  }
  const auto it = j.find("correct");
  if (it != j.end() && !it->is_null()) f.correct = detail::as_combo(*it, detail::join(path, "correct"));
  return f;
}

inline json to_json(const ScenarioSpec& s) {
  json j = {{"name", s.name},
            {"grid", to_json(s.grid)},
            {"p_tox", detail::matrix_json(s.p_tox, s.grid)},
            {"p_act", detail::matrix_json(s.p_act, s.grid)},
            {"tau", s.tau},
            {"tox_cycle1_fraction", s.tox_cycle1_fraction},
            {"act_equal_split", s.act_equal_split}};
  if (s.flags_model) j["flags"] = to_json(*s.flags_model, s.grid);
  if (s.flags_boin) j["flags_boin"] = to_json(*s.flags_boin, s.grid);
  return j;
}

inline ScenarioSpec scenario_from_json(const json& j) {
  ScenarioSpec s;
  s.name = detail::as_string(detail::require(j, "", "name"), "name");
  s.grid = grid_from_json(detail::require(j, "", "grid"));
  s.p_tox = detail::as_matrix(detail::require(j, "", "p_tox"), s.grid, "p_tox");
  s.p_act = detail::as_matrix(detail::require(j, "", "p_act"), s.grid, "p_act");
  detail::opt_int(j, "", "tau", s.tau);
  detail::opt_number(j, "", "tox_cycle1_fraction", s.tox_cycle1_fraction);
  detail::opt_bool(j, "", "act_equal_split", s.act_equal_split);
  if (j.contains("flags") && !j["flags"].is_null()) s.flags_model = flags_from_json(j["flags"], s.grid, "flags");
  if (j.contains("flags_boin") && !j["flags_boin"].is_null()) {
    s.flags_boin = flags_from_json(j["flags_boin"], s.grid, "flags_boin");
  }
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Configuration

inline json to_json(const PriorNormal2& p) { return {{"c1", p.c1}, {"c2", p.c2}, {"v1", p.v1}, {"v2", p.v2}}; }

inline void read_prior(const json& j, const std::string& path, const std::string& key, PriorNormal2& p) {
  if (!j.contains(key) || j[key].is_null()) return;
  const auto& v = j[key];
  const auto sub = detail::join(path, key);
  detail::opt_number(v, sub, "c1", p.c1);
  detail::opt_number(v, sub, "c2", p.c2);
  detail::opt_number(v, sub, "v1", p.v1);
  detail::opt_number(v, sub, "v2", p.v2);
}

inline json to_json(const TrialConfig& c) {
  json j;
  j["design"] = to_string(c.design);
  j["cohort_size"] = c.cohort_size;
  j["start"] = to_string(c.start);
  j["targets"] = {{"phi_T", c.targets.phi_T}, {"phi_A", c.targets.phi_A}, {"q_T", c.targets.q_T},
                  {"q_A", c.targets.q_A},     {"tau", c.targets.tau}};
  j["rules"] = {{"c_suff", c.rules.c_suff},
                {"n_max", c.rules.n_max},
                {"hard_safety_threshold", c.rules.hard_safety_threshold},
                {"low_unsafe_threshold", c.rules.low_unsafe_threshold},
                {"high_safe_threshold", c.rules.high_safe_threshold},
                {"cycle1_target", c.rules.cycle1_target},
                {"rule23_estimator", to_string(c.rule23)}};
  j["utility"] = {{"omega1", c.weights.omega1}, {"omega2", c.weights.omega2}, {"penalty_form", to_string(c.weights.penalty)}};
  j["boin"] = {{"psi01", c.boin.table.psi01},
               {"psi00", c.boin.table.psi00},
               {"psi10", c.boin.table.psi10},
               {"psi11", c.boin.table.psi11},
               {"phi1_factor", c.boin.phi1_factor},
               {"phi2_factor", c.boin.phi2_factor}};
  j["sampler"] = {{"burn_in", c.sampler.burn_in},
                  {"keep", c.sampler.keep},
                  {"adapt_window", c.sampler.adapt_window},
                  {"target_accept", c.sampler.target_accept}};
  j["pocrm"] = {{"alpha_sd", c.pocrm.alpha_sd},
                {"tox", to_json(c.pocrm.tox)},
                {"act", to_json(c.pocrm.act)},
                {"psi_var", c.pocrm.psi_var},
                {"quadrature_nodes", c.pocrm.quadrature_nodes}};
  j["blrm"] = {{"w1_tox", to_json(c.blrm.w1_tox)}, {"w1_act", to_json(c.blrm.w1_act)},
               {"w2_tox", to_json(c.blrm.w2_tox)}, {"w2_act", to_json(c.blrm.w2_act)},
               {"eta_scale", c.blrm.eta_scale},    {"psi_var", c.blrm.psi_var},
               {"dose_scaling", to_string(c.blrm.scaling)}};
  j["safety_only"] = c.safety_only;
  if (c.skeletons) {
    j["skeletons"] = {{"activity", c.skeletons->first.values}, {"toxicity", c.skeletons->second.values}};
  }
  return j;
}

/// Reads a configuration; every field is optional and defaults apply.
inline TrialConfig config_from_json(const json& j, TrialConfig c = {}) {
  using namespace detail;
  if (!j.is_object()) throw InputError("config: expected a JSON object");
  read_opt(j, "", "design", c.design, [](const json& v, const std::string& w) { return parse_design(as_string(v, w)); });
  opt_int(j, "", "cohort_size", c.cohort_size);
  read_opt(j, "", "start", c.start, as_combo);
  if (j.contains("targets")) {
    const auto& t = j["targets"];
    opt_number(t, "targets", "phi_T", c.targets.phi_T);
    opt_number(t, "targets", "phi_A", c.targets.phi_A);
    opt_number(t, "targets", "q_T", c.targets.q_T);
    opt_number(t, "targets", "q_A", c.targets.q_A);
    opt_int(t, "targets", "tau", c.targets.tau);
  }
  if (j.contains("rules")) {
    const auto& r = j["rules"];
    opt_int(r, "rules", "c_suff", c.rules.c_suff);
    opt_int(r, "rules", "n_max", c.rules.n_max);
    opt_number(r, "rules", "hard_safety_threshold", c.rules.hard_safety_threshold);
    opt_number(r, "rules", "low_unsafe_threshold", c.rules.low_unsafe_threshold);
    opt_number(r, "rules", "high_safe_threshold", c.rules.high_safe_threshold);
    opt_number(r, "rules", "cycle1_target", c.rules.cycle1_target);
    read_opt(r, "rules", "rule23_estimator", c.rule23,
             [](const json& v, const std::string& w) { return parse_rule23(as_string(v, w)); });
  }
  if (j.contains("utility")) {
    const auto& u = j["utility"];
    opt_number(u, "utility", "omega1", c.weights.omega1);
    opt_number(u, "utility", "omega2", c.weights.omega2);
    read_opt(u, "utility", "penalty_form", c.weights.penalty,
             [](const json& v, const std::string& w) { return parse_penalty_form(as_string(v, w)); });
  }
  if (j.contains("boin")) {
    const auto& b = j["boin"];
    opt_number(b, "boin", "psi01", c.boin.table.psi01);
    opt_number(b, "boin", "psi00", c.boin.table.psi00);
    opt_number(b, "boin", "psi10", c.boin.table.psi10);
    opt_number(b, "boin", "psi11", c.boin.table.psi11);
    opt_number(b, "boin", "phi1_factor", c.boin.phi1_factor);
    opt_number(b, "boin", "phi2_factor", c.boin.phi2_factor);
  }
  if (j.contains("sampler")) {
    const auto& s = j["sampler"];
    opt_int(s, "sampler", "burn_in", c.sampler.burn_in);
    opt_int(s, "sampler", "keep", c.sampler.keep);
    opt_int(s, "sampler", "adapt_window", c.sampler.adapt_window);
    opt_number(s, "sampler", "target_accept", c.sampler.target_accept);
  }
  if (j.contains("pocrm")) {
    const auto& p = j["pocrm"];
    opt_number(p, "pocrm", "alpha_sd", c.pocrm.alpha_sd);
    read_prior(p, "pocrm", "tox", c.pocrm.tox);
    read_prior(p, "pocrm", "act", c.pocrm.act);
    opt_number(p, "pocrm", "psi_var", c.pocrm.psi_var);
    opt_int(p, "pocrm", "quadrature_nodes", c.pocrm.quadrature_nodes);
  }
  if (j.contains("blrm")) {
    const auto& b = j["blrm"];
    read_prior(b, "blrm", "w1_tox", c.blrm.w1_tox);
    read_prior(b, "blrm", "w1_act", c.blrm.w1_act);
    read_prior(b, "blrm", "w2_tox", c.blrm.w2_tox);
    read_prior(b, "blrm", "w2_act", c.blrm.w2_act);
    opt_number(b, "blrm", "eta_scale", c.blrm.eta_scale);
    opt_number(b, "blrm", "psi_var", c.blrm.psi_var);
    read_opt(b, "blrm", "dose_scaling", c.blrm.scaling,
             [](const json& v, const std::string& w) { return parse_dose_scaling(as_string(v, w)); });
  }
  opt_bool(j, "", "safety_only", c.safety_only);
  if (j.contains("skeletons")) {
    const auto& s = j["skeletons"];
    Skeleton a{as_numbers(require(s, "skeletons", "activity"), "skeletons.activity"), Endpoint::activity};
    Skeleton t{as_numbers(require(s, "skeletons", "toxicity"), "skeletons.toxicity"), Endpoint::toxicity};
    c.skeletons = std::pair{a, t};
  }
  return c;
}

/// FNV-1a of the canonical configuration dump.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string config_hash(const TrialConfig& c) {
  std::ostringstream os;
  os << std::hex << fnv1a(to_json(c).dump());
  return os.str();
}

inline json provenance(std::uint64_t seed, const std::string& hash) {
  return {{"version", kVersion}, {"seed", seed}, {"config_hash", hash}};
}

// ---------------------------------------------------------------------------
// Trial data

struct TrialData {
  std::optional<DesignKind> design;
  DoseGrid grid;
  std::vector<PatientRecord> patients;
  double clock_now = 0.0;
};

inline std::optional<double> opt_time(const json& p, const std::string& path, const std::string& key) {
  if (!p.contains(key) || p[key].is_null()) return std::nullopt;
  const double t = detail::as_number(p[key], detail::join(path, key));
  if (t < 0.0) throw InputError(detail::join(path, key) + ": event time must be nonnegative");
  return t;
}

inline TrialData trial_data_from_json(const json& j) {
  TrialData d;
  if (!j.is_object()) throw InputError("trial data: expected a JSON object");
  detail::read_opt(j, "", "design", d.design,
                   [](const json& v, const std::string& w) { return std::optional{parse_design(detail::as_string(v, w))}; });
  d.grid = grid_from_json(detail::require(j, "", "grid"));
  const auto& ps = detail::require(j, "", "patients");
  if (!ps.is_array()) throw InputError("patients: expected an array");
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const std::string path = "patients[" + std::to_string(k) + "]";
    const auto& p = ps[k];
    PatientRecord r;
    r.combo = {detail::as_int(detail::require(p, path, "i"), path + ".i"),
               detail::as_int(detail::require(p, path, "j"), path + ".j")};
    if (!d.grid.contains(r.combo)) {
      throw InputError(path + ": combo " + to_string(r.combo) + " is outside the " + d.grid.shape() + " grid");
    }
    r.entry_time = detail::as_number(detail::require(p, path, "entry_cycle"), path + ".entry_cycle");
    r.tox_time = opt_time(p, path, "tox_time");
    r.act_time = opt_time(p, path, "act_time");
    d.patients.push_back(r);
  }
  d.clock_now = detail::as_number(detail::require(j, "", "clock_now"), "clock_now");
  for (std::size_t k = 0; k < d.patients.size(); ++k) {
    if (d.patients[k].entry_time > d.clock_now) {
      throw InputError("patients[" + std::to_string(k) + "].entry_cycle: after clock_now");
    }
  }
  return d;
}

inline json to_json(const PatientRecord& p) {
  json j = {{"i", p.combo.i}, {"j", p.combo.j}, {"entry_cycle", p.entry_time}};
  j["tox_time"] = p.tox_time ? json(*p.tox_time) : json(nullptr);
  j["act_time"] = p.act_time ? json(*p.act_time) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------
// Results

inline json to_json(const PosteriorSummary& s) {
  return {{"combo", to_string(s.combo)},     {"n", s.n},
          {"piA_median", s.piA_median},      {"piA_lo", s.piA_lo},
          {"piA_hi", s.piA_hi},              {"piT_median", s.piT_median},
          {"piT_lo", s.piT_lo},              {"piT_hi", s.piT_hi},
          {"prob_safe", s.prob_safe},        {"prob_active", s.prob_active},
          {"criterion", s.criterion},        {"admissible", s.admissible}};
}

inline json to_json(const DecisionRecord& d, const DoseGrid& g) {
  json j = {{"index", d.index}, {"time", d.time}, {"seed", d.seed}, {"reason", to_string(d.reason)}};
  j["chosen"] = d.chosen ? json(to_string(*d.chosen)) : json(nullptr);
  json adm = json::array(), allowed = json::array();
  for (std::size_t c = 0; c < d.admissible.size(); ++c) {
    if (d.admissible[c]) adm.push_back(to_string(g.combo(c)));
  }
  for (std::size_t c = 0; c < d.allowed.size(); ++c) {
    if (d.allowed[c]) allowed.push_back(to_string(g.combo(c)));
  }
  j["admissible"] = adm;
  j["allowed"] = allowed;
  j["criterion"] = d.criterion;
  if (d.order_A >= 0) j["ordering_activity"] = d.order_A;
  if (d.order_T >= 0) j["ordering_toxicity"] = d.order_T;
  if (!d.summaries.empty()) {
    j["summaries"] = json::array();
    for (const auto& s : d.summaries) j["summaries"].push_back(to_json(s));
  }
  return j;
}

inline json to_json(const TrialResult& r, const DoseGrid& g) {
  json j = {{"seed", r.seed}, {"stop_reason", to_string(r.stop_reason)}, {"n_total", r.n_total}, {"n_unsafe", r.n_unsafe}};
  j["selection"] = r.selection ? json(to_string(*r.selection)) : json(nullptr);
  j["patients"] = json::array();
  for (const auto& p : r.patients) j["patients"].push_back(to_json(p));
  j["decisions"] = json::array();
  for (const auto& d : r.decisions) j["decisions"].push_back(to_json(d, g));
  return j;
}

inline json to_json(const OperatingCharacteristics& oc, const DoseGrid& g) {
  json sel = json::object();
  for (std::size_t c = 0; c < oc.pct_selected.size(); ++c) sel[to_string(g.combo(c))] = oc.pct_selected[c];
  return {{"replicates", oc.replicates},
          {"pct_correct", oc.pct_correct},
          {"pct_good", oc.pct_good},
          {"pct_acceptable", oc.pct_acceptable},
          {"pct_none", oc.pct_none},
          {"mean_n", oc.mean_n},
          {"mean_unsafe", oc.mean_unsafe},
          {"pct_selected", sel},
          {"stop_reasons", oc.stop_reasons}};
}

inline std::string selection_text(const std::optional<DoseCombo>& s) { return s ? to_string(*s) : "none"; }

inline void write_replicates_csv(std::ostream& os, const std::string& design, const std::vector<TrialResult>& trials) {
  os << "replicate,design,stop_reason,selection,n_total,n_unsafe\n";
  for (std::size_t r = 0; r < trials.size(); ++r) {
    const auto& t = trials[r];
    os << r << ',' << design << ',' << to_string(t.stop_reason) << ',' << selection_text(t.selection) << ','
       << t.n_total << ',' << t.n_unsafe << '\n';
  }
}

inline void write_assignments_csv(std::ostream& os, const std::vector<TrialResult>& trials) {
  os << "replicate,patient,i,j,entry,t_T,t_A\n";
  auto num = [](const std::optional<double>& t) {
    if (!t) return std::string("inf");
    std::ostringstream s;
    s.precision(10);
    s << *t;
    return s.str();
  };
  for (std::size_t r = 0; r < trials.size(); ++r) {
    for (std::size_t k = 0; k < trials[r].patients.size(); ++k) {
      const auto& p = trials[r].patients[k];
      os << r << ',' << k << ',' << p.combo.i << ',' << p.combo.j << ',' << p.entry_time << ',' << num(p.tox_time)
         << ',' << num(p.act_time) << '\n';
    }
  }
}

inline void write_calibration_trace_csv(std::ostream& os, const CalibrationResult& r) {
  os << "round,endpoint,c1,c2,v1,v2,scenario,PCS,gmean\n";
  for (const auto& t : r.trace) {
    os << t.round << ',' << t.endpoint << ',' << t.cell.c1 << ',' << t.cell.c2 << ',' << t.cell.v1 << ','
       << t.cell.v2 << ',' << t.scenario << ',' << t.pcs << ',' << t.gmean << '\n';
  }
}

inline PriorGrid prior_grid_from_json(const json& j, const std::string& path) {
  PriorGrid g;
  g.c1 = detail::as_numbers(detail::require(j, path, "c1"), detail::join(path, "c1"));
  g.c2 = detail::as_numbers(detail::require(j, path, "c2"), detail::join(path, "c2"));
  g.v1 = detail::as_numbers(detail::require(j, path, "v1"), detail::join(path, "v1"));
  g.v2 = detail::as_numbers(detail::require(j, path, "v2"), detail::join(path, "v2"));
  return g;
}

/// Calibration grid file: {"toxicity": {c1: [...], ...}, "activity": {...},
/// "replicates", "epsilon", "max_rounds", "scenarios": [names]}.
inline CalibrationConfig calibration_from_json(const json& j, std::vector<std::string>* scenario_names = nullptr) {
  CalibrationConfig c;
  c.tox = prior_grid_from_json(detail::require(j, "", "toxicity"), "toxicity");
  c.act = prior_grid_from_json(detail::require(j, "", "activity"), "activity");
  detail::opt_int(j, "", "replicates", c.replicates);
  detail::opt_number(j, "", "epsilon", c.epsilon);
  detail::opt_int(j, "", "max_rounds", c.max_rounds);
  if (scenario_names && j.contains("scenarios")) {
    const auto& s = j["scenarios"];
    if (!s.is_array()) throw InputError("scenarios: expected an array of names");
    for (std::size_t k = 0; k < s.size(); ++k) {
      scenario_names->push_back(detail::as_string(s[k], "scenarios[" + std::to_string(k) + "]"));
    }
  }
  return c;
}

}  // namespace combodose::io
