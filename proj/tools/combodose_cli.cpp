#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "combodose/combodose.hpp"

namespace fs = std::filesystem;
using namespace combodose;
using io::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

std::uint64_t effective_seed(std::uint64_t flag) {
  if (const char* env = std::getenv("COMBODOSE_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InputError(std::string("COMBODOSE_SEED: not an unsigned integer: ") + env);
    }
  }
  return flag;
}

ScenarioSpec resolve_scenario(const std::string& arg) {
  if (const auto* s = find_builtin_scenario(arg)) return *s;
  if (fs::exists(arg)) return io::scenario_from_json(io::read_json_file(arg));
  std::string names;
  for (const auto& n : builtin_scenario_names()) names += (names.empty() ? "" : " ") + n;
  throw InputError("unknown scenario '" + arg + "'; available: " + names);
}

void ensure_dir(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error(dir + ": cannot create directory: " + ec.message());
}

std::string fmt(double v, int prec = 1) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

void print_grid_table(std::ostream& os, const DoseGrid& g, const std::vector<double>& v, int prec) {
  os << "      ";
  for (int j = 1; j <= g.cols(); ++j) os << std::setw(9) << ("j=" + std::to_string(j));
  os << '\n';
  for (int i = 1; i <= g.rows(); ++i) {
    os << "  i=" << i << ' ';
    for (int j = 1; j <= g.cols(); ++j) os << std::setw(9) << fmt(v[g.index({i, j})], prec);
    os << '\n';
  }
}

void print_oc(std::ostream& os, const std::string& label, const OperatingCharacteristics& oc, const DoseGrid& g) {
  os << label << ": correct " << fmt(oc.pct_correct) << "%, good " << fmt(oc.pct_good) << "%, acceptable "
     << fmt(oc.pct_acceptable) << "%, none " << fmt(oc.pct_none) << "%, mean n " << fmt(oc.mean_n, 2)
     << ", mean unsafe " << fmt(oc.mean_unsafe, 2) << '\n';
  os << "selection %:\n";
  print_grid_table(os, g, oc.pct_selected, 1);
  if (!oc.stop_reasons.empty()) {
    os << "stop reasons:";
    for (const auto& [k, v] : oc.stop_reasons) os << ' ' << k << '=' << v;
    os << '\n';
  }
}

constexpr const char* kAggregateCsvHeader =
    "scenario,design,replicates,pct_correct,pct_good,pct_acceptable,pct_none,mean_n,mean_unsafe\n";

std::string aggregate_csv_row(const std::string& scenario, const std::string& design,
                              const OperatingCharacteristics& oc) {
  std::ostringstream os;
  os << scenario << ',' << design << ',' << oc.replicates << ',' << oc.pct_correct << ',' << oc.pct_good << ','
     << oc.pct_acceptable << ',' << oc.pct_none << ',' << oc.mean_n << ',' << oc.mean_unsafe << '\n';
  return os.str();
}

struct CommonOpts {
  std::string design;  // empty: from the data or config file, else pocrm
  std::string scenario;
  std::string config;
  int replicates = 200;
  std::uint64_t seed = 1;
  int cohort_size = 0;
  std::string penalty;
  std::string out;
  unsigned threads = default_threads();
};

TrialConfig build_config(const CommonOpts& o) {
  TrialConfig cfg;
  if (!o.config.empty()) cfg = io::config_from_json(io::read_json_file(o.config));
  if (!o.design.empty()) cfg.design = parse_design(o.design);
  if (o.cohort_size != 0) cfg.cohort_size = o.cohort_size;
  if (!o.penalty.empty()) cfg.weights.penalty = parse_penalty_form(o.penalty);
  return cfg;
}

int cmd_simulate(const CommonOpts& o) {
  COMBODOSE_REQUIRE(o.replicates >= 1, "--replicates must be >= 1");
  const auto s = resolve_scenario(o.scenario);
  const auto cfg = build_config(o);
  cfg.validate(s.grid);
  const auto seed = effective_seed(o.seed);
  const auto trials = run_trials(s, cfg, o.replicates, seed, o.threads);
  const auto oc = summarize_trials(s, classify_for(s, cfg), trials);
  const auto hash = io::config_hash(cfg);

  std::cout << "# combodose " << io::kVersion << " seed=" << seed << " config_hash=" << hash << '\n';
  std::cout << "scenario " << s.name << ", design " << to_string(cfg.design) << ", " << o.replicates
            << " replicates\n";
  print_oc(std::cout, "summary", oc, s.grid);

  if (!o.out.empty()) {
    ensure_dir(o.out);
    json agg = {{"provenance", io::provenance(seed, hash)},
                {"scenario", s.name},
                {"design", to_string(cfg.design)},
                {"config", io::to_json(cfg)},
                {"metrics", io::to_json(oc, s.grid)}};
    io::write_text_file(o.out + "/aggregate.json", agg.dump(2) + "\n");
    std::ostringstream rep, asg;
    rep << "# combodose " << io::kVersion << " seed=" << seed << " config_hash=" << hash << '\n';
    io::write_replicates_csv(rep, to_string(cfg.design), trials);
    io::write_text_file(o.out + "/replicates.csv", rep.str());
    asg << "# combodose " << io::kVersion << " seed=" << seed << " config_hash=" << hash << '\n';
    io::write_assignments_csv(asg, trials);
    io::write_text_file(o.out + "/assignments.csv", asg.str());
    io::write_text_file(o.out + "/aggregate.csv",
                        std::string(kAggregateCsvHeader) + aggregate_csv_row(s.name, to_string(cfg.design), oc));
  }
  return 0;
}

int cmd_recommend(const CommonOpts& o, const std::string& data_path) {
  auto cfg = build_config(o);
  const auto data = io::trial_data_from_json(io::read_json_file(data_path));
  if (data.design && o.design.empty()) cfg.design = *data.design;
  if (data.design && *data.design != cfg.design) {
    throw InputError("trial data design '" + to_string(*data.design) + "' differs from --design '" +
                     to_string(cfg.design) + "'");
  }
  const auto seed = effective_seed(o.seed);
  const auto rec = recommend_next(cfg, data.grid, data.patients, data.clock_now, seed);

  json out = {{"provenance", io::provenance(seed, io::config_hash(cfg))},
              {"design", to_string(cfg.design)},
              {"clock_now", data.clock_now},
              {"n_patients", data.patients.size()},
              {"stop_reason", to_string(rec.stop)}};
  out["recommendation"] = rec.combo ? json(to_string(*rec.combo)) : json(nullptr);
  out["decision"] = io::to_json(rec.decision, data.grid);

  std::cout << "design " << to_string(cfg.design) << ", " << data.patients.size() << " patients, clock "
            << data.clock_now << '\n';
  if (!rec.decision.summaries.empty()) {
    std::cout << "combo   n   piA med [90% int]        piT med [90% int]        P(safe) P(act)  criterion adm\n";
    for (const auto& s : rec.decision.summaries) {
      std::cout << std::left << std::setw(6) << to_string(s.combo) << std::right << std::setw(3) << s.n << "   "
                << fmt(s.piA_median, 3) << " [" << fmt(s.piA_lo, 3) << ", " << fmt(s.piA_hi, 3) << "]   "
                << fmt(s.piT_median, 3) << " [" << fmt(s.piT_lo, 3) << ", " << fmt(s.piT_hi, 3) << "]   "
                << fmt(s.prob_safe, 3) << "   " << fmt(s.prob_active, 3) << "  " << std::setw(9)
                << fmt(s.criterion, 4) << "  " << (s.admissible ? "yes" : "no") << '\n';
    }
  }
  if (rec.stop != StopReason::none) {
    std::cout << "recommendation: stop (" << to_string(rec.stop) << ")\n";
  } else {
    std::cout << "recommendation: " << to_string(*rec.combo) << '\n';
  }
  const std::string text = out.dump(2) + "\n";
  if (!o.out.empty()) {
    io::write_text_file(o.out, text);
  } else {
    std::cout << text;
  }
  return 0;
}

int cmd_benchmark(const CommonOpts& o, const std::string& convention) {
  COMBODOSE_REQUIRE(o.replicates >= 1, "--replicates must be >= 1");
  const auto s = resolve_scenario(o.scenario);
  TrialConfig cfg;
  if (!o.config.empty()) cfg = io::config_from_json(io::read_json_file(o.config));
  if (!o.penalty.empty()) cfg.weights.penalty = parse_penalty_form(o.penalty);
  BenchmarkConfig bc;
  bc.n_patients = cfg.rules.n_max;
  bc.targets = cfg.targets;
  bc.weights = cfg.weights;
  bc.table = cfg.boin.table;
  bc.alpha_sd = cfg.pocrm.alpha_sd;
  bc.skeletons = cfg.skeletons;
  bc.orderings = cfg.orderings;
  if (convention == "boin") {
    bc.convention = UtilityConvention::boin;
    cfg.design = DesignKind::boin12;
  } else if (convention == "model") {
    bc.convention = UtilityConvention::model_based;
  } else {
    throw InputError("--convention must be model or boin");
  }
  const auto seed = effective_seed(o.seed);
  const auto params = scenario_params(s);
  std::vector<std::optional<DoseCombo>> sel(o.replicates);
  parallel_for(sel.size(), o.threads, [&](std::size_t r) {
    sel[r] = benchmark_replicate(s, bc, replicate_data_seed(seed, r), &params).selection;
  });
  const auto oc = summarize_selections(s, classify_for(s, cfg), sel);
  const auto hash = io::config_hash(cfg);
  std::cout << "# combodose " << io::kVersion << " seed=" << seed << " config_hash=" << hash << '\n';
  std::cout << "benchmark on " << s.name << " (" << convention << " utility), " << o.replicates << " replicates\n";
  print_oc(std::cout, "summary", oc, s.grid);
  if (!o.out.empty()) {
    ensure_dir(o.out);
    json agg = {{"provenance", io::provenance(seed, hash)},
                {"scenario", s.name},
                {"design", "benchmark"},
                {"convention", convention},
                {"metrics", io::to_json(oc, s.grid)}};
    io::write_text_file(o.out + "/aggregate.json", agg.dump(2) + "\n");
    std::ostringstream rep;
    rep << "# combodose " << io::kVersion << " seed=" << seed << " config_hash=" << hash << '\n';
    rep << "replicate,design,stop_reason,selection,n_total,n_unsafe\n";
    for (std::size_t r = 0; r < sel.size(); ++r) {
      rep << r << ",benchmark,none," << io::selection_text(sel[r]) << ',' << bc.n_patients << ",0\n";
    }
    io::write_text_file(o.out + "/replicates.csv", rep.str());
    io::write_text_file(o.out + "/aggregate.csv", std::string(kAggregateCsvHeader) +
                                                      aggregate_csv_row(s.name, "benchmark", oc));
  }
  return 0;
}

int cmd_calibrate(const CommonOpts& o, const std::string& grid_path, const std::vector<std::string>& names_flag) {
  auto cfg = build_config(o);
  std::vector<std::string> names;
  auto cc = io::calibration_from_json(io::read_json_file(grid_path), &names);
  if (!names_flag.empty()) names = names_flag;
  if (names.empty()) throw InputError("calibrate: no scenarios given (--scenarios or \"scenarios\" in the grid file)");
  std::vector<ScenarioSpec> scen;
  for (const auto& n : names) scen.push_back(resolve_scenario(n));
  for (const auto& s : scen) cfg.validate(s.grid);
  cc.seed = effective_seed(o.seed);
  cc.threads = o.threads;
  const auto res = calibrate(cfg, scen, cc);
  const auto hash = io::config_hash(cfg);
  std::cout << "# combodose " << io::kVersion << " seed=" << cc.seed << " config_hash=" << hash << '\n';
  std::cout << "rounds " << res.rounds << ", geometric-mean PCS " << fmt(res.gmean, 4) << '\n';
  std::cout << "toxicity prior: c1=" << res.tox.c1 << " c2=" << res.tox.c2 << " v1=" << res.tox.v1
            << " v2=" << res.tox.v2 << '\n';
  std::cout << "activity prior: c1=" << res.act.c1 << " c2=" << res.act.c2 << " v1=" << res.act.v1
            << " v2=" << res.act.v2 << '\n';
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
  if (!o.out.empty()) {
    ensure_dir(o.out);
    std::ostringstream tr;
    tr << "# combodose " << io::kVersion << " seed=" << cc.seed << " config_hash=" << hash << '\n';
    io::write_calibration_trace_csv(tr, res);
    io::write_text_file(o.out + "/trace.csv", tr.str());
    json j = {{"provenance", io::provenance(cc.seed, hash)},
              {"toxicity", io::to_json(res.tox)},
              {"activity", io::to_json(res.act)},
              {"gmean", res.gmean},
              {"rounds", res.rounds},
              {"warnings", res.warnings}};
    io::write_text_file(o.out + "/calibration.json", j.dump(2) + "\n");
  }
  return 0;
}

int cmd_scenarios_list() {
  for (const auto& s : builtin_scenarios()) {
    const auto cls = classify_doses(s);
    std::cout << std::left << std::setw(8) << s.name << std::right << ' ' << s.grid.shape() << "  correct "
              << (cls.correct ? to_string(*cls.correct) : std::string("none")) << '\n';
  }
  return 0;
}

int cmd_scenarios_show(const std::string& name) {
  const auto s = resolve_scenario(name);
  std::cout << "scenario " << s.name << " (" << s.grid.shape() << ", tau " << s.tau << ")\n";
  std::cout << "toxicity probabilities:\n";
  print_grid_table(std::cout, s.grid, s.p_tox, 2);
  std::cout << "activity probabilities:\n";
  print_grid_table(std::cout, s.grid, s.p_act, 2);
  for (auto conv : {UtilityConvention::model_based, UtilityConvention::boin}) {
    ClassifyOptions opt;
    opt.convention = conv;
    const auto cls = classify_doses(s, opt);
    std::vector<double> u, good;
    for (const auto& c : cls.combos) {
      u.push_back(c.utility);
      good.push_back(c.good);
    }
    const bool model = conv == UtilityConvention::model_based;
    std::cout << (model ? "model-based utility:\n" : "BOIN12 utility:\n");
    print_grid_table(std::cout, s.grid, u, model ? 3 : 2);
    std::cout << "good (1) per combo:\n";
    print_grid_table(std::cout, s.grid, good, 0);
    std::cout << "correct: " << (cls.correct ? to_string(*cls.correct) : std::string("none")) << '\n';
  }
  return 0;
}

int cmd_scenarios_export(const std::string& name, const std::string& out) {
  const auto s = resolve_scenario(name);
  const std::string text = io::to_json(s).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    io::write_text_file(out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-agent Phase I/II dose-finding simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::kVersion));

  CommonOpts o;
  auto add_common = [&](CLI::App* c, bool with_scenario) {
    c->add_option("--design", o.design, "pocrm | blrm | boin12 (default pocrm)");
    if (with_scenario) c->add_option("--scenario", o.scenario, "built-in name or scenario JSON file")->required();
    c->add_option("--config", o.config, "configuration JSON");
    c->add_option("--seed", o.seed, "master seed (COMBODOSE_SEED overrides)")->capture_default_str();
    c->add_option("--cohort-size", o.cohort_size, "patients per cohort");
    c->add_option("--penalty-form", o.penalty, "fixed | scaled");
    c->add_option("--threads", o.threads, "worker threads")->capture_default_str();
  };

  auto* sim = app.add_subcommand("simulate", "run a simulation campaign");
  add_common(sim, true);
  sim->add_option("--replicates", o.replicates, "number of simulated trials")->capture_default_str();
  sim->add_option("--out", o.out, "output directory");

  std::string data_path;
  auto* rec = app.add_subcommand("recommend", "next-cohort recommendation on trial data");
  add_common(rec, false);
  rec->add_option("--data", data_path, "trial data JSON")->required();
  rec->add_option("--out", o.out, "write the JSON report here instead of stdout");

  std::string convention = "model";
  auto* bench = app.add_subcommand("benchmark", "complete-information benchmark");
  add_common(bench, true);
  bench->add_option("--replicates", o.replicates, "number of replicates")->capture_default_str();
  bench->add_option("--convention", convention, "model | boin utility")->capture_default_str();
  bench->add_option("--out", o.out, "output directory");

  std::string grid_path;
  std::vector<std::string> cal_names;
  auto* cal = app.add_subcommand("calibrate", "grid-search prior calibration");
  add_common(cal, false);
  cal->add_option("--grid", grid_path, "calibration grid JSON")->required();
  cal->add_option("--scenarios", cal_names, "scenario names or files");
  cal->add_option("--out", o.out, "output directory");

  std::string scen_name, scen_out;
  auto* scen = app.add_subcommand("scenarios", "scenario library");
  scen->require_subcommand(1);
  auto* list = scen->add_subcommand("list", "list built-in scenarios");
  auto* show = scen->add_subcommand("show", "show one scenario with its utility tables");
  show->add_option("name", scen_name)->required();
  auto* exp = scen->add_subcommand("export", "write a scenario as JSON");
  exp->add_option("name", scen_name)->required();
  exp->add_option("--out", scen_out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sim) return cmd_simulate(o);
    if (*rec) return cmd_recommend(o, data_path);
    if (*bench) return cmd_benchmark(o, convention);
    if (*cal) return cmd_calibrate(o, grid_path, cal_names);
    if (*list) return cmd_scenarios_list();
    if (*show) return cmd_scenarios_show(scen_name);
    if (*exp) return cmd_scenarios_export(scen_name, scen_out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
