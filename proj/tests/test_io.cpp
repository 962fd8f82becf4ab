#include <gtest/gtest.h>

#include <sstream>

#include "combodose/io.hpp"
#include "combodose/scenarios.hpp"

using namespace combodose;
using io::json;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Io, ScenarioRoundTrip) {
  for (const auto& s : builtin_scenarios()) {
    const auto back = io::scenario_from_json(json::parse(io::to_json(s).dump()));
    EXPECT_EQ(back.name, s.name);
    EXPECT_EQ(back.p_tox, s.p_tox);
    EXPECT_EQ(back.p_act, s.p_act);
    EXPECT_EQ(back.flags_model.has_value(), s.flags_model.has_value());
    if (s.flags_model) EXPECT_EQ(back.flags_model->correct, s.flags_model->correct);
  }
}

TEST(Io, ConfigRoundTripKeepsHash) {
  TrialConfig c;
  c.design = DesignKind::blrm;
  c.cohort_size = 2;
  c.weights.penalty = PenaltyForm::scaled;
  c.blrm.scaling = DoseScaling::raw;
  c.rule23 = Rule23Estimator::design_posterior;
  const auto back = io::config_from_json(io::to_json(c));
  EXPECT_EQ(back.design, DesignKind::blrm);
  EXPECT_EQ(back.cohort_size, 2);
  EXPECT_EQ(back.weights.penalty, PenaltyForm::scaled);
  EXPECT_EQ(back.blrm.scaling, DoseScaling::raw);
  EXPECT_EQ(back.rule23, Rule23Estimator::design_posterior);
  EXPECT_EQ(io::config_hash(back), io::config_hash(c));
  c.cohort_size = 3;
  EXPECT_NE(io::config_hash(back), io::config_hash(c));
}

TEST(Io, ErrorsNameTheOffendingPath) {
  EXPECT_NE(error_of([] { io::config_from_json(json::parse(R"({"rules": {"n_max": "sixty"}})")); })
                .find("rules.n_max"),
            std::string::npos);
  EXPECT_NE(error_of([] { io::config_from_json(json::parse(R"({"design": "crm"})")); }).find("crm"),
            std::string::npos);
  EXPECT_NE(error_of([] { io::parse_json_text("{\"a\": ", "x.json"); }).find("x.json"), std::string::npos);
}

TEST(Io, TrialDataParsing) {
  const auto j = json::parse(R"({
    "design": "pocrm",
    "grid": {"agent1_doses": [600, 800], "agent2_doses": [50, 75, 100, 125, 150]},
    "patients": [{"i": 2, "j": 2, "entry_cycle": 0, "tox_time": 0.4, "act_time": null},
                 {"i": 2, "j": 2, "entry_cycle": 0}],
    "clock_now": 1})");
  const auto d = io::trial_data_from_json(j);
  EXPECT_EQ(d.design, DesignKind::pocrm);
  ASSERT_EQ(d.patients.size(), 2u);
  EXPECT_EQ(d.patients[0].tox_time, 0.4);
  EXPECT_FALSE(d.patients[1].act_time);
  EXPECT_EQ(d.clock_now, 1.0);
}

TEST(Io, TrialDataRejectsOutOfGridCombo) {
  const auto j = json::parse(R"({
    "grid": {"agent1_doses": [600, 800], "agent2_doses": [50, 75, 100, 125, 150]},
    "patients": [{"i": 3, "j": 1, "entry_cycle": 0}], "clock_now": 1})");
  const auto msg = error_of([&] { io::trial_data_from_json(j); });
  EXPECT_NE(msg.find("patients[0]"), std::string::npos);
  EXPECT_NE(msg.find("d31"), std::string::npos);
}

TEST(Io, CsvHeaders) {
  TrialResult r;
  r.n_total = 3;
  r.patients = {{{2, 2}, 0.0, 1.5, {}}};
  std::ostringstream a, b;
  io::write_replicates_csv(a, "pocrm", {r});
  io::write_assignments_csv(b, {r});
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "replicate,design,stop_reason,selection,n_total,n_unsafe");
  EXPECT_NE(a.str().find("pocrm,none,none,3,0"), std::string::npos);
  EXPECT_NE(b.str().find("0,0,2,2,0,1.5,"), std::string::npos);
}

TEST(Io, CalibrationGridFile) {
  std::vector<std::string> names;
  const auto c = io::calibration_from_json(json::parse(R"({
    "toxicity": {"c1": [-1, 0], "c2": [0], "v1": [1], "v2": [0.5]},
    "activity": {"c1": [0], "c2": [0], "v1": [1], "v2": [0.5]},
    "replicates": 7, "scenarios": ["T1.A1", "S2"]})"),
                                           &names);
  EXPECT_EQ(c.tox.cells().size(), 2u);
  EXPECT_EQ(c.replicates, 7);
  EXPECT_EQ(names, (std::vector<std::string>{"T1.A1", "S2"}));
  EXPECT_NE(error_of([] { io::calibration_from_json(json::parse(R"({"toxicity": {}})")); }).find("toxicity.c1"),
            std::string::npos);
}
