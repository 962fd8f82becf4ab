#pragma once
// Trial orchestration on the cycle clock: cohort scheduling, per-decision
// design fits, enforcement and stopping, and the final analysis.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "combodose/core.hpp"
#include "combodose/datagen.hpp"
#include "combodose/design.hpp"
#include "combodose/posterior.hpp"
#include "combodose/rules.hpp"
#include "combodose/stats.hpp"

namespace combodose {

struct DecisionRecord {
  int index = 0;
  double time = 0.0;
  std::uint64_t seed = 0;
  std::optional<DoseCombo> chosen;
  StopReason reason = StopReason::none;
  std::vector<bool> admissible;
  std::vector<bool> allowed;
  std::vector<double> criterion;
  int order_A = -1;
  int order_T = -1;
  std::vector<PosteriorSummary> summaries;
};

struct TrialResult {
  std::uint64_t seed = 0;
  std::vector<PatientRecord> patients;
  std::vector<DecisionRecord> decisions;
  StopReason stop_reason = StopReason::none;
  std::optional<DoseCombo> selection;
  int n_total = 0;
  int n_unsafe = 0;
};

inline constexpr int kFinalDecisionIndex = 1 << 20;

inline std::uint64_t decision_seed(std::uint64_t trial_seed, int index) {
  return stats::derive_seed(trial_seed, 0x5eedULL, static_cast<std::uint64_t>(index));
}

/// One decision on the data available at `now`. `current` is the combo of the
/// latest cohort (used by the boin12 neighbourhood rule).
inline DecisionRecord decide(const TrialConfig& cfg, const DoseGrid& grid, const std::vector<PatientRecord>& patients,
                             double now, DoseCombo current, int index, std::uint64_t seed) {
  DecisionRecord rec;
  rec.index = index;
  rec.time = now;
  rec.seed = seed;
  if (patients.empty()) {
    rec.chosen = cfg.start;
    return rec;
  }
  const auto obs = observe(grid, patients, now, cfg.targets.tau);
  auto ev = evaluate_design(cfg, grid, obs, seed);
  const auto excluded = hard_safety_exclusions(grid, patients, now, cfg.rules);

  std::vector<DoseCombo> explored;
  std::vector<int> assigned(grid.size(), 0);
  for (const auto& p : patients) {
    if (assigned[grid.index(p.combo)]++ == 0) explored.push_back(p.combo);
  }

  const std::size_t n = grid.size();
  rec.admissible = ev.admissible;
  rec.criterion = ev.criterion;
  rec.allowed.assign(n, false);
  for (std::size_t c = 0; c < n; ++c) {
    rec.allowed[c] = ev.admissible[c] && !excluded[c] && allowed_by_skipping(explored, grid.combo(c), cfg.start);
  }
  rec.order_A = ev.order_A;
  rec.order_T = ev.order_T;
  rec.summaries = std::move(ev.summaries);

  std::optional<DoseCombo> next;
  if (cfg.design == DesignKind::boin12 && !cfg.safety_only) {
    const auto b = boin_boundaries(cfg.targets.phi_T, cfg.boin.phi1_factor * cfg.targets.phi_T,
                                   cfg.boin.phi2_factor * cfg.targets.phi_T);
    next = boin12_next_dose(current, ev.boin, b, rec.allowed, grid);
  } else {
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < n; ++c) {
      if (rec.allowed[c] && (!best || ev.criterion[c] > ev.criterion[*best])) best = c;
    }
    if (best) next = grid.combo(*best);
  }

  const auto counts = cycle1_counts(grid, patients, now);
  StoppingInput si;
  si.any_admissible = std::any_of(ev.admissible.begin(), ev.admissible.end(), [](bool b) { return b; });
  si.lowest = counts[grid.index(grid.lowest())];
  si.highest = counts[grid.index(grid.highest())];
  si.assigned_lowest = assigned[grid.index(grid.lowest())];
  si.assigned_highest = assigned[grid.index(grid.highest())];
  if (next) si.recommended_n = assigned[grid.index(*next)];
  si.lowest_excluded = excluded[grid.index(grid.lowest())];
  si.n_total = static_cast<int>(patients.size());
  if (cfg.rule23 == Rule23Estimator::design_posterior) {
    si.lowest_prob_unsafe = ev.prob_tox_above[grid.index(grid.lowest())];
    si.highest_prob_safe = 1.0 - ev.prob_tox_above[grid.index(grid.highest())];
  }
  rec.reason = check_stopping(si, cfg.rules);
  if (rec.reason == StopReason::none && !next) rec.reason = StopReason::no_admissible;
  if (rec.reason == StopReason::none) rec.chosen = next;
  return rec;
}

/// Final analysis at full follow-up of every enrolled patient.
inline std::optional<DoseCombo> select_final(const TrialConfig& cfg, const DoseGrid& grid,
                                             const std::vector<PatientRecord>& patients, std::uint64_t seed,
                                             DecisionRecord* log = nullptr) {
  if (patients.empty()) return std::nullopt;
  double now = 0.0;
  for (const auto& p : patients) now = std::max(now, p.entry_time + cfg.targets.tau);
  const auto obs = observe(grid, patients, now, cfg.targets.tau);
  auto ev = evaluate_design(cfg, grid, obs, seed);
  const auto excluded = hard_safety_exclusions(grid, patients, now, cfg.rules);
  std::vector<DoseCombo> explored;
  std::vector<int> assigned(grid.size(), 0);
  for (const auto& p : patients) {
    if (assigned[grid.index(p.combo)]++ == 0) explored.push_back(p.combo);
  }
  std::optional<std::size_t> best;
  std::vector<bool> allowed(grid.size(), false);
  for (std::size_t c = 0; c < grid.size(); ++c) {
    bool ok = ev.admissible[c] && !excluded[c];
    if (cfg.design == DesignKind::boin12) {
      ok = ok && assigned[c] > 0;
    } else {
      ok = ok && allowed_by_skipping(explored, grid.combo(c), cfg.start);
    }
    allowed[c] = ok;
    if (ok && (!best || ev.criterion[c] > ev.criterion[*best])) best = c;
  }
  if (log) {
    log->index = kFinalDecisionIndex;
    log->time = now;
    log->seed = seed;
    log->admissible = ev.admissible;
    log->allowed = allowed;
    log->criterion = ev.criterion;
    log->order_A = ev.order_A;
    log->order_T = ev.order_T;
    log->summaries = std::move(ev.summaries);
    if (best) log->chosen = grid.combo(*best);
  }
  if (!best) return std::nullopt;
  return grid.combo(*best);
}

/// Event-time source for a trial: patient `k` (0-based enrolment order) gets
/// the latent pair keyed by (data_seed, k) mapped through the margins of the
/// combo they receive.
struct ScenarioDataSource {
  const ScenarioSpec* scenario = nullptr;
  std::vector<LognormalParams> params;
  std::uint64_t data_seed = 0;

  ScenarioDataSource(const ScenarioSpec& s, std::uint64_t seed) : scenario(&s), params(scenario_params(s)), data_seed(seed) {}

  PatientRecord patient(std::size_t k, DoseCombo combo, double entry) const {
    const auto& p = params[scenario->grid.index(combo)];
    return make_patient(combo, entry, generate_patient(p, latent_pair(data_seed, k, p.rho)));
  }
};

inline std::uint64_t replicate_data_seed(std::uint64_t master, std::uint64_t replicate) {
  return stats::derive_seed(master, replicate, 0xda7aULL);
}

inline std::uint64_t replicate_trial_seed(std::uint64_t master, std::uint64_t replicate) {
  return stats::derive_seed(master, replicate, 0x7e1aULL);
}

inline TrialResult run_trial_with_seeds(const ScenarioSpec& s, const TrialConfig& cfg, std::uint64_t data_seed,
                                        std::uint64_t trial_seed) {
  cfg.validate(s.grid);
  COMBODOSE_REQUIRE(s.tau == cfg.targets.tau, "scenario " + s.name + ": tau differs from the trial configuration");
  const ScenarioDataSource src(s, data_seed);
  const auto& grid = s.grid;
  TrialResult res;
  res.seed = trial_seed;
  auto enrol = [&](DoseCombo c, double t) {
    for (int k = 0; k < cfg.cohort_size; ++k) res.patients.push_back(src.patient(res.patients.size(), c, t));
  };
  DoseCombo current = cfg.start;
  enrol(current, 0.0);
  for (int k = 1;; ++k) {
    const double now = k;
    auto d = decide(cfg, grid, res.patients, now, current, k, decision_seed(trial_seed, k));
    const auto reason = d.reason;
    const auto chosen = d.chosen;
    res.decisions.push_back(std::move(d));
    if (reason != StopReason::none) {
      res.stop_reason = reason;
      break;
    }
    current = *chosen;
    enrol(current, now);
  }
  if (!stop_without_selection(res.stop_reason)) {
    DecisionRecord fin;
    res.selection = select_final(cfg, grid, res.patients, decision_seed(trial_seed, kFinalDecisionIndex), &fin);
    fin.reason = res.stop_reason;
    res.decisions.push_back(std::move(fin));
  }
  res.n_total = static_cast<int>(res.patients.size());
  for (const auto& p : res.patients) res.n_unsafe += s.tox(p.combo) > 0.3 + 1e-12;
  return res;
}

inline TrialResult run_trial(const ScenarioSpec& s, const TrialConfig& cfg, std::uint64_t master_seed,
                             std::uint64_t replicate = 0) {
  return run_trial_with_seeds(s, cfg, replicate_data_seed(master_seed, replicate),
                              replicate_trial_seed(master_seed, replicate));
}

// ---------------------------------------------------------------------------
// Campaigns

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Runs fn(r) for r in [0, n) on up to `threads` workers; the first exception
/// is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t r = 0; r < n; ++r) fn(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t r = next.fetch_add(1);
        if (r >= n) return;
        try {
          fn(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

inline std::vector<TrialResult> run_trials(const ScenarioSpec& s, const TrialConfig& cfg, int replicates,
                                           std::uint64_t master_seed, unsigned threads = 1) {
  COMBODOSE_REQUIRE(replicates >= 1, "replicates must be >= 1");
  std::vector<TrialResult> out(static_cast<std::size_t>(replicates));
  parallel_for(out.size(), threads, [&](std::size_t r) { out[r] = run_trial(s, cfg, master_seed, r); });
  return out;
}

// ---------------------------------------------------------------------------
// Trial-conduct recommendation

struct Recommendation {
  std::optional<DoseCombo> combo;
  StopReason stop = StopReason::none;
  DecisionRecord decision;
};

/// Next-cohort recommendation on externally supplied data; the same decision
/// path as one step of run_trial.
inline Recommendation recommend_next(const TrialConfig& cfg_in, const DoseGrid& grid,
                                     const std::vector<PatientRecord>& patients, double now,
                                     std::uint64_t seed) {
  TrialConfig cfg = cfg_in;
  cfg.record_summaries = true;
  cfg.validate(grid);
  DoseCombo current = cfg.start;
  double last_entry = -1.0;
  for (const auto& p : patients) {
    COMBODOSE_REQUIRE(grid.contains(p.combo), "patient at combo " + to_string(p.combo) + " is outside the " +
                                                  grid.shape() + " grid");
    COMBODOSE_REQUIRE(p.entry_time <= now, "patient entry time is after the clock");
    if (p.entry_time >= last_entry) {
      last_entry = p.entry_time;
      current = p.combo;
    }
  }
  Recommendation r;
  const int index = static_cast<int>(patients.size());
  r.decision = decide(cfg, grid, patients, now, current, index, decision_seed(seed, index));
  r.combo = r.decision.chosen;
  r.stop = r.decision.reason;
  return r;
}

}  // namespace combodose
