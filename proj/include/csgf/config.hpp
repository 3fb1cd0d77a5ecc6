#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csgf/inversion.hpp"
#include "csgf/models.hpp"
#include "csgf/recovery.hpp"

namespace csgf {

enum class Backend { Baseline, Csgf, Oracle };

Backend parse_backend(const std::string& name);
std::string to_string(Backend backend);

struct ModelConfig {
  std::string name = "hsc";  // hsc | bds | custom
  // Named parameters for hsc (rho, nu, mu) and bds (beta, sigma, delta).
  std::vector<std::pair<std::string, double>> params;
  // Off-diagonal events for custom models.
  RateTable type1_events;
  RateTable type2_events;
};

struct SolverConfig {
  std::optional<std::size_t> m;
  std::optional<double> lambda;
  LambdaRule lambda_rule = LambdaRule::SqrtLogM;
  RecoveryConfig recovery;
};

struct BenchRow {
  std::size_t n = 0;
  std::size_t m = 0;
};

struct BenchSettings {
  std::vector<BenchRow> rows;
  std::size_t trials = 10;
  double occupancy = 0.5;
};

struct OracleSettings {
  unsigned cap = 64;
  double max_sink_mass = 1e-9;
  std::size_t reps = 0;  // > 0 switches the oracle back end to simulation
};

struct Config {
  ModelConfig model;
  double t = 1.0;
  unsigned j = 1;
  unsigned k = 0;
  std::size_t n = 32;
  Backend backend = Backend::Baseline;
  SolverConfig solver;
  ode::Tolerances ode;
  GridOptions baseline;
  OracleSettings oracle;
  BenchSettings bench;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

// Defaults for a built-in model: rates, time, lambda rule, benchmark rows.
Config default_config(const std::string& model_name);

// Parses a JSON config document. Keys not present keep the defaults of the
// named model. Throws InvalidArgument on unknown keys or bad values.
Config parse_config(const std::string& json_text);
Config load_config(const std::string& path);

// Applies CSGF_SEED and CSGF_THREADS when set.
void apply_environment(Config& cfg);

// Canonical JSON rendering, used for hashing and report metadata.
std::string to_json(const Config& cfg);
std::uint64_t config_hash(const Config& cfg);

ModelSpec build_model(const ModelConfig& mc, const ode::Tolerances& tol);

// lambda from the explicit value or the rule.
double resolve_lambda(const SolverConfig& solver, std::size_t m);

}  // namespace csgf
