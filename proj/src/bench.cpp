#include "csgf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "csgf/errors.hpp"
#include "csgf/parallel.hpp"
#include "csgf/recovery.hpp"

namespace csgf {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

TrialRecord run_trial(const ModelSpec& model, const Config& cfg, const BenchRow& row,
                      double lambda, std::size_t trial) {
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = derive_seed(cfg.seed, row.n, trial);
  try {
    std::tie(rec.j, rec.k) = draw_initial_population(row.n, cfg.bench.occupancy, rec.seed);

    const auto start = Clock::now();
    PgfGrid full;
    const ProbabilityGrid S =
        baseline_probabilities(model, cfg.t, rec.j, rec.k, row.n, cfg.baseline, &full);
    rec.time_full = seconds_since(start);
    rec.baseline_evals = full.pgf_evals;
    rec.baseline_ode_solves = full.ode_solves;
    rec.baseline_truncation = truncation_mass(S);

    RecoveryConfig rc = cfg.solver.recovery;
    rc.lambda = lambda;
    rc.seed = splitmix64(rec.seed);
    const RecoveryResult r = csgf_pipeline(model, cfg.t, rec.j, rec.k, row.n, row.m, rc);
    rec.time_sampled = r.measurement_seconds;
    rec.time_pgd = r.pgd_seconds;
    rec.csgf_evals = r.pgf_evals;
    rec.csgf_ode_solves = r.ode_solves;
    rec.iterations = r.iterations;
    rec.sum_hat = r.S_hat.sum();
    rec.eps_max = (r.S_hat.values - S.values).cwiseAbs().maxCoeff();
    rec.eps_rel = rec.eps_max / S.max();
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::size_t n, std::size_t trial) {
  return splitmix64(splitmix64(base ^ splitmix64(n)) + trial);
}

std::pair<unsigned, unsigned> draw_initial_population(std::size_t n, double occupancy,
                                                      std::uint64_t seed) {
  const double limit = static_cast<double>(n) * occupancy;
  // totals s with 1 <= s < limit; each contributes s + 1 pairs
  std::vector<std::pair<unsigned, unsigned>> pairs;
  for (unsigned s = 1; static_cast<double>(s) < limit; ++s)
    for (unsigned j = 0; j <= s; ++j)
      if (j < n && s - j < n) pairs.emplace_back(j, s - j);
  if (pairs.empty())
    throw InvalidArgument("no initial populations satisfy 1 <= j + k < n * occupancy");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
  return pairs[pick(rng)];
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

BenchmarkReport run_benchmark(const Config& cfg) {
  const ModelSpec model = build_model(cfg.model, cfg.ode);
  BenchmarkReport report;
  report.model = cfg.model.name;
  report.params = cfg.model.params;
  report.t = cfg.t;
  report.seed = cfg.seed;
  report.config_hash = config_hash(cfg);

  for (const BenchRow& spec_row : cfg.bench.rows) {
    if (spec_row.m == 0 || spec_row.m > spec_row.n)
      throw InvalidArgument("bench row needs 1 <= m <= n");
    BenchmarkRow row;
    row.n = spec_row.n;
    row.m = spec_row.m;
    row.lambda = resolve_lambda(cfg.solver, spec_row.m);
    row.baseline_evals_full = spec_row.n * spec_row.n;
    row.csgf_evals = spec_row.m * spec_row.m;
    row.trials.resize(cfg.bench.trials);
    parallel_for(cfg.bench.trials, [&](std::size_t trial) {
      row.trials[trial] = run_trial(model, cfg, spec_row, row.lambda, trial);
    });

    std::vector<double> full, sampled, pgd, emax, erel, sums, iters, bevals, bsolves, csolves;
    for (const TrialRecord& rec : row.trials) {
      if (!rec.ok) {
        ++row.trials_failed;
        continue;
      }
      ++row.trials_ok;
      full.push_back(rec.time_full);
      sampled.push_back(rec.time_sampled);
      pgd.push_back(rec.time_pgd);
      emax.push_back(rec.eps_max);
      erel.push_back(rec.eps_rel);
      sums.push_back(rec.sum_hat);
      iters.push_back(static_cast<double>(rec.iterations));
      bevals.push_back(static_cast<double>(rec.baseline_evals));
      bsolves.push_back(static_cast<double>(rec.baseline_ode_solves));
      csolves.push_back(static_cast<double>(rec.csgf_ode_solves));
    }
    row.time_full = median(full);
    row.time_sampled = median(sampled);
    row.time_pgd = median(pgd);
    row.eps_max = median(emax);
    row.eps_rel = median(erel);
    row.sum_hat = median(sums);
    row.iterations = median(iters);
    row.baseline_evals = median(bevals);
    row.baseline_ode_solves = median(bsolves);
    row.csgf_ode_solves = median(csolves);
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string report_json(const BenchmarkReport& report, bool with_timings) {
  using nlohmann::json;
  json params = json::object();
  for (const auto& [k, v] : report.params) params[k] = v;
  json rows = json::array();
  for (const BenchmarkRow& row : report.rows) {
    json trials = json::array();
    for (const TrialRecord& rec : row.trials) {
      json t{{"trial", rec.trial},
             {"seed", rec.seed},
             {"initial", {rec.j, rec.k}},
             {"ok", rec.ok}};
      if (!rec.ok) {
        t["error"] = rec.error;
      } else {
        t.update({{"eps_max", rec.eps_max},
                  {"eps_rel", rec.eps_rel},
                  {"sum_hat", rec.sum_hat},
                  {"baseline_truncation", rec.baseline_truncation},
                  {"iterations", rec.iterations},
                  {"baseline_evals", rec.baseline_evals},
                  {"baseline_ode_solves", rec.baseline_ode_solves},
                  {"csgf_evals", rec.csgf_evals},
                  {"csgf_ode_solves", rec.csgf_ode_solves}});
        if (with_timings)
          t.update({{"time_full", rec.time_full},
                    {"time_sampled", rec.time_sampled},
                    {"time_pgd", rec.time_pgd}});
      }
      trials.push_back(std::move(t));
    }
    json r{{"n", row.n},
           {"m", row.m},
           {"lambda", row.lambda},
           {"trials_ok", row.trials_ok},
           {"trials_failed", row.trials_failed},
           {"eps_max", row.eps_max},
           {"eps_rel", row.eps_rel},
           {"sum_hat", row.sum_hat},
           {"iterations", row.iterations},
           {"baseline_evals", row.baseline_evals},
           {"baseline_evals_full", row.baseline_evals_full},
           {"baseline_ode_solves", row.baseline_ode_solves},
           {"csgf_evals", row.csgf_evals},
           {"csgf_ode_solves", row.csgf_ode_solves},
           {"trials", std::move(trials)}};
    if (with_timings)
      r.update({{"time_full", row.time_full},
                {"time_sampled", row.time_sampled},
                {"time_pgd", row.time_pgd}});
    rows.push_back(std::move(r));
  }
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(report.config_hash));
  json doc{{"model", report.model},
           {"params", params},
           {"t", report.t},
           {"seed", report.seed},
           {"config_hash", hash},
           {"rows", std::move(rows)}};
  return doc.dump(2);
}

void write_report_csv(std::ostream& out, const BenchmarkReport& report) {
  out << "N,M,time_full,time_sampled,time_pgd,eps_max,eps_rel,sum_hat,iterations,"
         "baseline_evals,baseline_evals_full,csgf_evals,baseline_ode_solves,csgf_ode_solves,"
         "trials_ok,trials_failed,lambda,seed\n";
  char buf[512];
  for (const BenchmarkRow& r : report.rows) {
    std::snprintf(buf, sizeof buf,
                  "%zu,%zu,%.6g,%.6g,%.6g,%.17g,%.17g,%.17g,%.6g,%.6g,%zu,%zu,%.6g,%.6g,%zu,%zu,%.17g,%llu\n",
                  r.n, r.m, r.time_full, r.time_sampled, r.time_pgd, r.eps_max, r.eps_rel,
                  r.sum_hat, r.iterations, r.baseline_evals, r.baseline_evals_full, r.csgf_evals,
                  r.baseline_ode_solves, r.csgf_ode_solves, r.trials_ok, r.trials_failed,
                  r.lambda, static_cast<unsigned long long>(report.seed));
    out << buf;
  }
}

std::string render_table(const BenchmarkReport& report) {
  std::ostringstream out;
  char buf[256];
  out << "model " << report.model << ", t = " << report.t << ", seed " << report.seed << "\n";
  std::snprintf(buf, sizeof buf, "%6s %5s %14s %14s %12s %11s %11s %9s %8s\n", "N", "M",
                "time full (s)", "time B (s)", "time PGD (s)", "eps_max", "eps_rel", "evals %",
                "ok/all");
  out << buf;
  for (const BenchmarkRow& r : report.rows) {
    const double pct = 100.0 * static_cast<double>(r.csgf_evals) /
                       static_cast<double>(r.baseline_evals_full);
    std::snprintf(buf, sizeof buf, "%6zu %5zu %14.3f %14.3f %12.3f %11.3e %11.3e %8.2f%% %4zu/%zu\n",
                  r.n, r.m, r.time_full, r.time_sampled, r.time_pgd, r.eps_max, r.eps_rel, pct,
                  r.trials_ok, r.trials_ok + r.trials_failed);
    out << buf;
  }
  return out.str();
}

}  // namespace csgf
