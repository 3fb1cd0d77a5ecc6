// Command-line front end: transition probabilities by full-grid inversion,
// compressed-sensing recovery or the truncated-generator oracle; benchmark
// tables; observed log-likelihoods.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "csgf/bench.hpp"
#include "csgf/config.hpp"
#include "csgf/errors.hpp"
#include "csgf/grid_io.hpp"
#include "csgf/likelihood.hpp"
#include "csgf/parallel.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string model;
  std::optional<double> t;
  std::optional<unsigned> j, k;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out;
};

struct QueryOptions {
  std::vector<unsigned> at;
  bool no_symmetry = false;
  std::optional<std::size_t> m;
  std::optional<double> lambda;
  std::optional<bool> literal_update;
  std::optional<unsigned> cap;
  std::optional<std::size_t> reps;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON config file");
  cmd->add_option("--model", o.model, "hsc | bds (when no config file is given)");
  cmd->add_option("-t,--time", o.t, "elapsed time");
  cmd->add_option("-j", o.j, "initial type-1 count");
  cmd->add_option("-k", o.k, "initial type-2 count");
  cmd->add_option("-n", o.n, "grid size");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  cmd->add_option("-o,--out", o.out, "output path");
}

csgf::Config resolve(const CommonOptions& o) {
  csgf::Config cfg = o.config_path.empty() ? csgf::default_config(o.model.empty() ? "hsc" : o.model)
                                           : csgf::load_config(o.config_path);
  csgf::apply_environment(cfg);
  if (o.t) cfg.t = *o.t;
  if (o.j) cfg.j = *o.j;
  if (o.k) cfg.k = *o.k;
  if (o.n) cfg.n = *o.n;
  if (o.seed) cfg.seed = *o.seed;
  if (o.threads) cfg.threads = *o.threads;
  csgf::set_thread_count(cfg.threads);
  return cfg;
}

void apply_query(csgf::Config& cfg, const QueryOptions& q) {
  if (q.no_symmetry) cfg.baseline.conjugate_symmetry = false;
  if (q.m) cfg.solver.m = *q.m;
  if (q.lambda) cfg.solver.lambda = *q.lambda;
  if (q.literal_update) cfg.solver.recovery.prox_at_momentum = !*q.literal_update;
  if (q.cap) cfg.oracle.cap = *q.cap;
  if (q.reps) cfg.oracle.reps = *q.reps;
}

int run_query(csgf::Config cfg, const CommonOptions& o, const QueryOptions& q) {
  apply_query(cfg, q);
  const csgf::ModelSpec model = csgf::build_model(cfg.model, cfg.ode);
  if (!q.at.empty()) {
    if (q.at.size() != 2) throw csgf::InvalidArgument("--at takes two values: l m");
    const double p =
        csgf::transition_probability(cfg, model, cfg.t, cfg.j, cfg.k, q.at[0], q.at[1], cfg.n);
    std::printf("%.17g\n", p);
    return 0;
  }
  const csgf::ProbabilityGrid pg = csgf::transition_grid(cfg, model, cfg.t, cfg.j, cfg.k, cfg.n);
  const double lost = csgf::truncation_mass(pg);
  if (cfg.backend == csgf::Backend::Baseline && lost > 1e-6)
    std::fprintf(stderr, "warning: grid n = %zu misses probability mass %.3g; increase -n\n",
                 cfg.n, lost);
  const std::string meta = csgf::grid_metadata_json(pg, csgf::to_string(cfg.backend), model.name);
  if (o.out.empty()) {
    csgf::write_grid_csv(std::cout, pg.values, true);
    std::cerr << meta << "\n";
  } else {
    std::ofstream csv(o.out);
    csgf::write_grid_csv(csv, pg.values, true);
    std::ofstream(o.out + ".json") << meta << "\n";
  }
  return 0;
}

std::vector<csgf::BenchRow> parse_rows(const std::string& text) {
  // "128:25,256:33"
  std::vector<csgf::BenchRow> rows;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw csgf::InvalidArgument("bench rows look like 128:25,256:33");
    rows.push_back({std::stoul(item.substr(0, colon)), std::stoul(item.substr(colon + 1))});
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transition probabilities of two-type branching processes"};
  app.require_subcommand(1);

  CommonOptions common;
  QueryOptions query;

  auto* invert = app.add_subcommand("invert", "full-grid generating-function inversion");
  auto* recover = app.add_subcommand("csgf", "compressed-sensing recovery from sampled PGF values");
  auto* oracle = app.add_subcommand("oracle", "truncated-generator uniformization or simulation");
  for (auto* cmd : {invert, recover, oracle}) {
    add_common(cmd, common);
    cmd->add_option("--at", query.at, "print a single entry p(l, m)")->expected(2);
  }
  invert->add_flag("--no-symmetry", query.no_symmetry, "evaluate every grid point");
  recover->add_option("-m", query.m, "sampled frequencies per axis");
  recover->add_option("--lambda", query.lambda, "l1 penalty");
  recover->add_flag("--literal-update", query.literal_update,
                      "take the prox step from S_k instead of the momentum point");
  oracle->add_option("--cap", query.cap, "per-type population cap");
  oracle->add_option("--reps", query.reps, "simulate this many trajectories instead");

  auto* bench = app.add_subcommand("bench", "error and cost tables over seeded trials");
  add_common(bench, common);
  std::string rows;
  std::optional<std::size_t> trials;
  bench->add_option("--rows", rows, "N:M pairs, e.g. 128:25,256:33");
  bench->add_option("--trials", trials, "trials per row");
  bench->add_flag("--no-symmetry", query.no_symmetry, "baseline evaluates every grid point");

  auto* loglik = app.add_subcommand("loglik", "observed log-likelihood of a count series");
  add_common(loglik, common);
  std::string observations, backend;
  loglik->add_option("--observations", observations, "CSV lines time,x1,x2")->required();
  loglik->add_option("--backend", backend, "baseline | csgf | oracle");

  CLI11_PARSE(app, argc, argv);

  try {
    csgf::Config cfg = resolve(common);
    if (invert->parsed()) {
      cfg.backend = csgf::Backend::Baseline;
      return run_query(cfg, common, query);
    }
    if (recover->parsed()) {
      cfg.backend = csgf::Backend::Csgf;
      return run_query(cfg, common, query);
    }
    if (oracle->parsed()) {
      cfg.backend = csgf::Backend::Oracle;
      return run_query(cfg, common, query);
    }
    if (bench->parsed()) {
      apply_query(cfg, query);
      if (!rows.empty()) cfg.bench.rows = parse_rows(rows);
      if (trials) cfg.bench.trials = *trials;
      const csgf::BenchmarkReport report = csgf::run_benchmark(cfg);
      std::cout << csgf::render_table(report);
      if (!common.out.empty()) {
        std::ofstream(common.out + ".json") << csgf::report_json(report) << "\n";
        std::ofstream csv(common.out + ".csv");
        csgf::write_report_csv(csv, report);
      }
      for (const auto& row : report.rows)
        for (const auto& rec : row.trials)
          if (!rec.ok) std::fprintf(stderr, "N=%zu trial %zu failed: %s\n", row.n, rec.trial, rec.error.c_str());
      return 0;
    }
    if (loglik->parsed()) {
      if (!backend.empty()) cfg.backend = csgf::parse_backend(backend);
      const csgf::ModelSpec model = csgf::build_model(cfg.model, cfg.ode);
      const auto series = csgf::read_observations(observations);
      const auto ll = csgf::observed_log_likelihood(series, cfg, model);
      for (const auto& term : ll.terms)
        std::printf("interval %zu: p = %.17g, log p = %.17g\n", term.interval, term.probability,
                    term.log_probability);
      for (const auto& d : ll.diagnostics) std::fprintf(stderr, "warning: %s\n", d.c_str());
      std::printf("loglik %.17g\n", ll.value);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
