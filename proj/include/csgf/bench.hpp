#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "csgf/config.hpp"

namespace csgf {

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  unsigned j = 0;
  unsigned k = 0;
  bool ok = false;
  std::string error;

  double time_full = 0.0;  // full PGF grid + inversion
  double time_sampled = 0.0;
  double time_pgd = 0.0;
  double eps_max = 0.0;
  double eps_rel = 0.0;
  double sum_hat = 0.0;
  double baseline_truncation = 0.0;
  std::size_t iterations = 0;
  std::size_t baseline_evals = 0;
  std::size_t baseline_ode_solves = 0;
  std::size_t csgf_evals = 0;
  std::size_t csgf_ode_solves = 0;
};

struct BenchmarkRow {
  std::size_t n = 0;
  std::size_t m = 0;
  double lambda = 0.0;
  std::size_t trials_ok = 0;
  std::size_t trials_failed = 0;

  // medians over successful trials
  double time_full = 0.0;
  double time_sampled = 0.0;
  double time_pgd = 0.0;
  double eps_max = 0.0;
  double eps_rel = 0.0;
  double sum_hat = 0.0;
  double iterations = 0.0;
  double baseline_evals = 0.0;
  double baseline_ode_solves = 0.0;
  double csgf_ode_solves = 0.0;

  std::size_t baseline_evals_full = 0;  // n^2, the count without the symmetry shortcut
  std::size_t csgf_evals = 0;           // m^2

  std::vector<TrialRecord> trials;
};

struct BenchmarkReport {
  std::string model;
  std::vector<std::pair<std::string, double>> params;
  double t = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<BenchmarkRow> rows;
};

// Seed for trial `trial` of the row with grid size n.
std::uint64_t derive_seed(std::uint64_t base, std::size_t n, std::size_t trial);

// Initial population with 1 <= j + k < n * occupancy, uniform over such pairs.
std::pair<unsigned, unsigned> draw_initial_population(std::size_t n, double occupancy,
                                                      std::uint64_t seed);

// For every configured (n, m) row and trial: draw an initial population,
// compute the full-grid baseline and the CSGF recovery, and record errors,
// counts and timings. Trial failures are recorded, not thrown.
BenchmarkReport run_benchmark(const Config& cfg);

double median(std::vector<double> values);

// JSON document with metadata, rows and per-trial records. Wall times are
// omitted unless with_timings is set; everything else is deterministic.
std::string report_json(const BenchmarkReport& report, bool with_timings = true);

// One line per row: N,M,time_full,time_sampled,time_pgd,eps_max,eps_rel,...
void write_report_csv(std::ostream& out, const BenchmarkReport& report);

// Human-readable table in the column order N, M, time full, time sampled,
// time PGD, eps_max, eps_rel.
std::string render_table(const BenchmarkReport& report);

}  // namespace csgf
