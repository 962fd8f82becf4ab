// Acceptance run: one PASS/FAIL line per criterion.
//   acceptance --fast            property criteria 1-7
//   acceptance --desk            directional reproduction 8-12 (200 replicates per cell)
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "combodose/combodose.hpp"
#include "reference_tables.hpp"

using namespace combodose;

namespace {

std::ostringstream g_report;

void say(const std::string& s) {
  std::cout << s << std::endl;
  g_report << s << '\n';
}

bool verdict(int id, const std::string& what, bool pass, const std::string& detail) {
  std::ostringstream s;
  s << (pass ? "PASS" : "FAIL") << "  [" << id << "] " << what << "  (" << detail << ")";
  say(s.str());
  return pass;
}

std::string num(double v, int prec = 4) {
  std::ostringstream s;
  s << std::setprecision(prec) << v;
  return s.str();
}

// ---------------------------------------------------------------------------
// 1-7

bool c1_utility() {
  double worst_m = 0, worst_b = 0, worst_s = 0;
  for (const auto& row : reftab::kUtility25) {
    const auto* s = find_builtin_scenario(std::string(row.scenario));
    if (!s) return verdict(1, "utility tables", false, "missing scenario " + std::string(row.scenario));
    for (std::size_t k = 0; k < 10; ++k) {
      const double pt = s->p_tox[k], pa = s->p_act[k];
      worst_m = std::max(worst_m, std::abs(utility_model_based(pa, pt, {}, 0.3) - row.model[k]));
      worst_b = std::max(worst_b, std::abs(utility_boin_true(pa, pt, {}) - row.boin[k]));
    }
  }
  for (const auto& row : reftab::kUtility33) {
    const auto* s = find_builtin_scenario(std::string(row.scenario));
    for (std::size_t k = 0; k < 9; ++k)
      worst_s = std::max(worst_s, std::abs(utility_model_based(s->p_act[k], s->p_tox[k], {}, 0.3) - row.model[k]));
  }
  return verdict(1, "utility tables reproduce printed cells", worst_m <= 1e-3 && worst_b <= 0.1 && worst_s <= 1e-3,
                 "max |err| 2x5 model " + num(worst_m) + ", BOIN " + num(worst_b) + ", 3x3 " + num(worst_s));
}

bool c2_gumbel() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0, 1);
  std::normal_distribution<double> n(0, 10);
  double ws = 0, wm = 0, mc = 1;
  for (int r = 0; r < 1'000'000; ++r) {
    const double gA = u(rng), gT = u(rng), psi = n(rng);
    const auto c = gumbel_cells(gA, gT, psi);
    ws = std::max(ws, std::abs(c.sum() - 1));
    wm = std::max({wm, std::abs(c(1, 0) + c(1, 1) - gT), std::abs(c(0, 1) + c(1, 1) - gA)});
    mc = std::min({mc, c(0, 0), c(0, 1), c(1, 0), c(1, 1)});
  }
  return verdict(2, "Gumbel cells normalized on 1e6 triples", ws <= 1e-12 && wm <= 1e-12 && mc >= 0,
                 "max |sum-1| " + num(ws, 3) + ", max marginal err " + num(wm, 3) + ", min cell " + num(mc, 3));
}

bool c3_hard_safety() {
  const int expect[] = {3, 4, 5};
  bool ok = true;
  std::string d;
  for (int c = 0; c < 3; ++c) {
    const int n = 3 * (c + 1);
    int minimal = -1;
    for (int x = 0; x <= n && minimal < 0; ++x)
      if (hard_safety_trigger(x, n)) minimal = x;
    ok = ok && minimal == expect[c];
    d += std::to_string(minimal) + "/" + std::to_string(n) + " ";
  }
  return verdict(3, "hard-safety minimal triggers", ok, "found " + d);
}

bool c4_boin() {
  const auto b = boin_boundaries(0.3, 0.18, 0.42);
  const double ub = boin_utility_threshold({}, 0.3, 0.2);
  const bool ok = std::abs(b.lambda_e - 0.2365) <= 5e-4 && std::abs(b.lambda_d - 0.3585) <= 5e-4 &&
                  std::abs(ub - 70.0) < 1e-9;
  return verdict(4, "BOIN boundaries and u_b", ok,
                 "lambda_e " + num(b.lambda_e, 5) + ", lambda_d " + num(b.lambda_d, 5) + ", u_b " + num(ub, 10));
}

bool c5_datagen() {
  const int n = 1'000'000;
  const double rho = -0.5;
  std::vector<double> zT(n), zA(n);
  double sT = 0, sA = 0, sTT = 0, sAA = 0, sTA = 0;
  for (int k = 0; k < n; ++k) {
    const auto z = latent_pair(0xacce97, k, rho);
    zT[k] = z.zT;
    zA[k] = z.zA;
    sT += z.zT;
    sA += z.zA;
    sTT += z.zT * z.zT;
    sAA += z.zA * z.zA;
    sTA += z.zT * z.zA;
  }
  sT /= n;
  sA /= n;
  const double corr = (sTA / n - sT * sA) / std::sqrt((sTT / n - sT * sT) * (sAA / n - sA * sA));
  double worst = 0;
  std::string where;
  int combos = 0;
  for (const auto& s : builtin_scenarios()) {
    const auto params = scenario_params(s, rho);
    for (std::size_t c = 0; c < s.grid.size(); ++c, ++combos) {
      const double pt = s.p_tox[c], pa = s.p_act[c];
      const double t1 = s.tau == 1 ? pt : s.tox_cycle1_fraction * pt;
      const double a1 = s.tau == 1 ? pa : (s.act_equal_split ? pa / s.tau : s.tox_cycle1_fraction * pa);
      long ct1 = 0, ctw = 0, ca1 = 0, caw = 0;
      for (int k = 0; k < n; ++k) {
        const auto e = generate_patient(params[c], {zT[k], zA[k]});
        ct1 += e.t_tox <= 1.0;
        ctw += e.t_tox <= s.tau;
        ca1 += e.t_act <= 1.0;
        caw += e.t_act <= s.tau;
      }
      const double errs[] = {std::abs(ct1 / double(n) - t1), std::abs(ctw / double(n) - pt),
                             std::abs(ca1 / double(n) - a1), std::abs(caw / double(n) - pa)};
      for (double e : errs)
        if (e > worst) {
          worst = e;
          where = s.name + " " + to_string(s.grid.combo(c));
        }
    }
  }
  return verdict(5, "event-time generator matches window and cycle-1 targets", worst <= 0.002 && std::abs(corr + 0.5) <= 0.01,
                 std::to_string(combos) + " combos, max |err| " + num(worst, 3) + " at " + where +
                     ", latent correlation " + num(corr, 4));
}

bool c6_sampler() {
  SamplerConfig cfg;
  cfg.burn_in = 2000;
  cfg.keep = 20000;
  cfg.seed = 11;
  const auto r = sample_posterior([](std::span<const double> x) { return -0.5 * x[0] * x[0]; }, {0.5}, {1.0}, cfg);
  const auto c = r.column(0);
  const double m = stats::mean(c), v = stats::variance(c);
  const double rho = 0.9;
  auto lp = [rho](std::span<const double> x) {
    return -0.5 * (x[0] * x[0] - 2 * rho * x[0] * x[1] + x[1] * x[1]) / (1 - rho * rho);
  };
  cfg.seed = 5;
  const auto b = sample_posterior(lp, {0.0, 0.0}, {1.0, 1.0}, cfg);
  const auto b2 = sample_posterior(lp, {0.0, 0.0}, {1.0, 1.0}, cfg);
  const auto x = b.column(0), y = b.column(1);
  const double mx = stats::mean(x), my = stats::mean(y);
  double cxy = 0;
  for (int k = 0; k < b.keep; ++k) cxy += (x[k] - mx) * (y[k] - my);
  cxy /= b.keep - 1;
  const double r_hat = cxy / std::sqrt(stats::variance(x) * stats::variance(y));
  const bool ok = std::abs(m) <= 0.05 && std::abs(v - 1) <= 0.1 && std::abs(r_hat - rho) <= 0.05 && b.draws == b2.draws;
  return verdict(6, "sampler determinism and target recovery", ok,
                 "N(0,1) mean " + num(m, 3) + " var " + num(v, 3) + "; bivariate rho " + num(r_hat, 3) +
                     "; rerun identical " + (b.draws == b2.draws ? "yes" : "no"));
}

std::vector<double> riemann(const std::vector<WeightedRecord>& recs, const Skeleton& skel, const OrderingSet& ord,
                            double sd) {
  const int n = 40000;
  const double lo = -10 * sd, hi = 10 * sd, h = (hi - lo) / n;
  std::vector<double> z(ord.size());
  for (std::size_t m = 0; m < ord.size(); ++m) {
    const auto sk = skeleton_by_combo(skel, ord, m);
    double s = 0;
    for (int k = 0; k <= n; ++k) {
      const double a = lo + k * h;
      double ll = 0;
      for (const auto& r : recs) {
        const bool tox = skel.endpoint == Endpoint::toxicity;
        const double g = (tox ? r.wT : r.wA) * std::pow(sk[r.combo], std::exp(a));
        ll += r.count * std::log((tox ? r.yT : r.yA) ? g : 1 - g);
      }
      s += (k == 0 || k == n ? 0.5 : 1.0) * std::exp(ll - 0.5 * a * a / (sd * sd));
    }
    z[m] = s * ord.prior[m];
  }
  double t = 0;
  for (double v : z) t += v;
  for (double& v : z) v /= t;
  return z;
}

bool c7_quadrature() {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<int> cnt(1, 12);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const auto g = rep % 2 ? grid_3x3() : grid_2x5();
    const auto ord = default_orderings(g);
    const auto [sa, st] = default_skeletons(g);
    std::uniform_int_distribution<int> combo(0, static_cast<int>(g.size()) - 1);
    std::vector<WeightedRecord> recs;
    const int n = cnt(rng);
    for (int k = 0; k < n; ++k) {
      const double w = u(rng) < 0.5 ? 1.0 : u(rng);
      recs.push_back({static_cast<std::size_t>(combo(rng)), w == 1.0 && u(rng) < 0.35, w,
                      w == 1.0 && u(rng) < 0.5, w, 1.0});
    }
    for (const auto* sk : {&sa, &st}) {
      const auto gh = ordering_posterior(recs, *sk, ord, 1.34);
      const auto rm = riemann(recs, *sk, ord, 1.34);
      for (std::size_t m = 0; m < ord.size(); ++m) worst = std::max(worst, std::abs(gh.weights[m] - rm[m]));
    }
  }
  return verdict(7, "ordering posteriors match fine-grid integration", worst <= 1e-6,
                 "20 datasets, max |diff| " + num(worst, 3));
}

// ---------------------------------------------------------------------------
// 8-12

struct Toggle {
  std::string name;
  std::function<void(TrialConfig&)> apply;
};

const std::vector<Toggle>& toggles() {
  static const std::vector<Toggle> t{
      {"baseline", [](TrialConfig&) {}},
      {"penalty_form=scaled", [](TrialConfig& c) { c.weights.penalty = PenaltyForm::scaled; }},
      {"cohort_size=1", [](TrialConfig& c) { c.cohort_size = 1; }},
      {"rule23_estimator=design_posterior", [](TrialConfig& c) { c.rule23 = Rule23Estimator::design_posterior; }},
      {"dose_scaling=raw", [](TrialConfig& c) { c.blrm.scaling = DoseScaling::raw; }},
  };
  return t;
}

class Desk {
 public:
  Desk(int reps, std::uint64_t seed, unsigned threads) : reps_(reps), seed_(seed), threads_(threads) {}

  const OperatingCharacteristics& oc(const Toggle& t, DesignKind d, const std::string& scen) {
    const std::string key = t.name + "|" + to_string(d) + "|" + scen;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const auto* s = find_builtin_scenario(scen);
    TrialConfig cfg;
    cfg.design = d;
    t.apply(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const auto trials = run_trials(*s, cfg, reps_, seed_, threads_);
    const auto o = summarize_trials(*s, classify_for(*s, cfg), trials);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream line;
    line << "      " << std::left << std::setw(34) << t.name << std::setw(7) << to_string(d) << std::setw(6) << scen
         << std::right << " correct " << std::setw(5) << num(o.pct_correct, 3) << "  good " << std::setw(5)
         << num(o.pct_good, 3) << "  none " << std::setw(5) << num(o.pct_none, 3) << "  mean n "
         << num(o.mean_n, 4) << "  [" << num(secs, 3) << " s]";
    say(line.str());
    return cache_.emplace(key, o).first->second;
  }

  double bench_correct(const std::string& scen, UtilityConvention conv) {
    const std::string key = scen + "|" + to_string(conv);
    if (auto it = bench_.find(key); it != bench_.end()) return it->second;
    const auto* s = find_builtin_scenario(scen);
    BenchmarkConfig bc;
    bc.convention = conv;
    ClassifyOptions opt;
    opt.convention = conv;
    const auto cls = classify_doses(*s, opt);
    const auto params = scenario_params(*s);
    std::vector<std::optional<DoseCombo>> sel(reps_);
    parallel_for(reps_, threads_, [&](std::size_t r) {
      sel[r] = benchmark_replicate(*s, bc, replicate_data_seed(seed_, r), &params).selection;
    });
    const double pct = summarize_selections(*s, cls, sel).pct_correct;
    return bench_.emplace(key, pct).first->second;
  }

  int reps() const { return reps_; }

 private:
  int reps_;
  std::uint64_t seed_;
  unsigned threads_;
  std::map<std::string, OperatingCharacteristics> cache_;
  std::map<std::string, double> bench_;
};

struct Check {
  std::string label;
  bool pass;
  std::string detail;
};

constexpr double kTol = 10.0;

Check near(const std::string& label, double got, double paper) {
  return {label, std::abs(got - paper) <= kTol, label + " " + num(got, 3) + " vs " + num(paper, 3)};
}

Check above(const std::string& label, double a, double b) {
  return {label, a > b, label + " " + num(a, 3) + " > " + num(b, 3)};
}

double pct_at(const OperatingCharacteristics& o, const std::string& scen, DoseCombo d) {
  return o.pct_selected[find_builtin_scenario(scen)->grid.index(d)];
}

using Criterion = std::function<std::vector<Check>(Desk&, const Toggle&)>;

std::vector<Check> crit8(Desk& k, const Toggle& t) {
  const auto& p = k.oc(t, DesignKind::pocrm, "T4.A4");
  const auto& b = k.oc(t, DesignKind::blrm, "T4.A4");
  const auto& b2 = k.oc(t, DesignKind::blrm, "T2.A4");
  return {near("T4.A4 POCRM correct", p.pct_correct, 30), near("T4.A4 BLRM correct", b.pct_correct, 3),
          above("T4.A4 POCRM vs BLRM correct", p.pct_correct, b.pct_correct),
          near("T4.A4 BLRM none", b.pct_none, 74), near("T2.A4 BLRM none", b2.pct_none, 57)};
}

std::vector<Check> crit9(Desk& k, const Toggle& t) {
  const auto& p = k.oc(t, DesignKind::pocrm, "T4.A5");
  const auto& b = k.oc(t, DesignKind::blrm, "T4.A5");
  return {near("T4.A5 BLRM correct", b.pct_correct, 54), near("T4.A5 POCRM correct", p.pct_correct, 17),
          above("T4.A5 BLRM vs POCRM correct", b.pct_correct, p.pct_correct),
          near("T4.A5 POCRM none", p.pct_none, 69)};
}

std::vector<Check> crit10(Desk& k, const Toggle& t) {
  std::vector<Check> c;
  auto P = [&](const char* s) -> const OperatingCharacteristics& { return k.oc(t, DesignKind::pocrm, s); };
  auto B = [&](const char* s) -> const OperatingCharacteristics& { return k.oc(t, DesignKind::blrm, s); };
  c.push_back(near("S2 BLRM good", B("S2").pct_good, 59));
  c.push_back(near("S2 POCRM good", P("S2").pct_good, 12));
  c.push_back(above("S2 BLRM vs POCRM good", B("S2").pct_good, P("S2").pct_good));
  c.push_back(near("S2 POCRM no selection", P("S2").pct_none, 74));
  c.push_back(near("S3 POCRM good", P("S3").pct_good, 72));
  c.push_back(near("S3 BLRM good", B("S3").pct_good, 41));
  c.push_back(above("S3 POCRM vs BLRM good", P("S3").pct_good, B("S3").pct_good));
  c.push_back(near("S4 BLRM d21", pct_at(B("S4"), "S4", {2, 1}), 38));
  c.push_back(near("S4 BLRM correct", B("S4").pct_correct, 5));
  c.push_back(near("S4 POCRM d12", pct_at(P("S4"), "S4", {1, 2}), 30));
  c.push_back(near("S4 POCRM d13", pct_at(P("S4"), "S4", {1, 3}), 28));
  c.push_back(near("S5 POCRM correct", P("S5").pct_correct, 39));
  c.push_back(near("S5 BLRM correct", B("S5").pct_correct, 1));
  c.push_back(above("S5 POCRM vs BLRM correct", P("S5").pct_correct, B("S5").pct_correct));
  c.push_back(near("S5 BLRM none", B("S5").pct_none, 28));
  c.push_back(near("S6 BLRM correct", B("S6").pct_correct, 33));
  c.push_back(near("S6 POCRM correct", P("S6").pct_correct, 16));
  c.push_back(above("S6 BLRM vs POCRM correct", B("S6").pct_correct, P("S6").pct_correct));
  c.push_back(near("S6 POCRM good", P("S6").pct_good, 59));
  c.push_back(near("S6 BLRM good", B("S6").pct_good, 39));
  c.push_back(above("S6 POCRM vs BLRM good", P("S6").pct_good, B("S6").pct_good));
  return c;
}

// In T6 nothing is acceptable, so a correct outcome is stopping without a selection.
std::vector<Check> crit11(Desk& k, const Toggle& t) {
  std::vector<Check> c;
  for (int a = 1; a <= 6; ++a) {
    const std::string s = "T6.A" + std::to_string(a);
    const auto& o = k.oc(t, DesignKind::boin12, s);
    const auto& p = k.oc(t, DesignKind::pocrm, s);
    const auto& b = k.oc(t, DesignKind::blrm, s);
    c.push_back(above(s + " BOIN12 vs POCRM correct stops", o.pct_correct, p.pct_correct));
    c.push_back(above(s + " BOIN12 vs BLRM correct stops", o.pct_correct, b.pct_correct));
    c.push_back(above(s + " POCRM vs BOIN12 mean n", p.mean_n, o.mean_n));
    c.push_back(above(s + " BLRM vs BOIN12 mean n", b.mean_n, o.mean_n));
  }
  return c;
}

std::vector<Check> crit12(Desk& k, const Toggle& t) {
  std::vector<Check> c;
  const std::vector<std::pair<std::string, std::vector<DesignKind>>> cells{
      {"T4.A4", {DesignKind::pocrm, DesignKind::blrm}}, {"T2.A4", {DesignKind::blrm}},
      {"T4.A5", {DesignKind::pocrm, DesignKind::blrm}}, {"S2", {DesignKind::pocrm, DesignKind::blrm}},
      {"S3", {DesignKind::pocrm, DesignKind::blrm}},    {"S4", {DesignKind::pocrm, DesignKind::blrm}},
      {"S5", {DesignKind::pocrm, DesignKind::blrm}},    {"S6", {DesignKind::pocrm, DesignKind::blrm}}};
  auto add = [&](const std::string& s, DesignKind d) {
    const auto& o = k.oc(t, d, s);
    const double bench = k.bench_correct(s, convention_for(d));
    const double floor = o.pct_correct - 3 * o.mc_se(o.pct_correct);
    c.push_back({s + " " + to_string(d), bench >= floor,
                 s + " benchmark " + num(bench, 3) + " >= " + to_string(d) + " " + num(o.pct_correct, 3) + " - 3 SE"});
  };
  for (const auto& [s, ds] : cells)
    for (auto d : ds) add(s, d);
  for (int a = 1; a <= 6; ++a)
    for (auto d : {DesignKind::pocrm, DesignKind::blrm, DesignKind::boin12}) add("T6.A" + std::to_string(a), d);
  return c;
}

bool run_desk_criterion(Desk& k, int id, const std::string& what, const Criterion& crit, bool sweep) {
  say("  [" + std::to_string(id) + "] " + what);
  const auto& ts = toggles();
  std::string failed_baseline;
  for (std::size_t ti = 0; ti < (sweep ? ts.size() : 1); ++ti) {
    const auto checks = crit(k, ts[ti]);
    int bad = 0;
    std::string fails;
    for (const auto& c : checks) {
      say(std::string("      ") + (c.pass ? "ok   " : "MISS ") + c.detail);
      if (!c.pass) {
        ++bad;
        fails += (fails.empty() ? "" : "; ") + c.label;
      }
    }
    if (bad == 0) {
      return verdict(id, what, true,
                     "configuration " + ts[ti].name + ", " + std::to_string(checks.size()) + " checks" +
                         (ti > 0 ? "; baseline missed: " + failed_baseline : ""));
    }
    if (ti == 0) failed_baseline = fails;
    say("      -> " + ts[ti].name + ": " + std::to_string(bad) + "/" + std::to_string(checks.size()) + " missed");
  }
  return verdict(id, what, false,
                 sweep ? "no single toggle passes; baseline missed: " + failed_baseline : "missed: " + failed_baseline);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combodose acceptance run"};
  bool fast = false, desk = false;
  int reps = 200;
  std::uint64_t seed = 20240601;
  unsigned threads = default_threads();
  std::string report;
  app.add_flag("--fast", fast, "property criteria 1-7");
  app.add_flag("--desk", desk, "directional criteria 8-12");
  app.add_option("--replicates", reps, "replicates per cell");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--report", report, "write the run report here");
  CLI11_PARSE(app, argc, argv);
  if (!fast && !desk) fast = desk = true;

  bool ok = true;
  if (fast) {
    ok &= c1_utility();
    ok &= c2_gumbel();
    ok &= c3_hard_safety();
    ok &= c4_boin();
    ok &= c5_datagen();
    ok &= c6_sampler();
    ok &= c7_quadrature();
  }
  if (desk) {
    say("desk-scale run: " + std::to_string(reps) + " replicates per cell, seed " + std::to_string(seed) +
        ", tolerance +/-" + num(kTol) + " points");
    Desk k(reps, seed, threads);
    ok &= run_desk_criterion(k, 8, "T4.A4 / T2.A4 POCRM vs BLRM", crit8, true);
    ok &= run_desk_criterion(k, 9, "T4.A5 BLRM vs POCRM", crit9, true);
    ok &= run_desk_criterion(k, 10, "3x3 suite S2-S6", crit10, true);
    ok &= run_desk_criterion(k, 11, "T6 family: BOIN12 stops correctly and sooner", crit11, true);
    ok &= run_desk_criterion(k, 12, "benchmark dominance", crit12, false);
  }
  if (!report.empty()) std::ofstream(report) << g_report.str();
  return ok ? 0 : 1;
}
