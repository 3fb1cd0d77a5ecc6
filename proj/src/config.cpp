#include "csgf/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "csgf/errors.hpp"

namespace csgf {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const char* where) {
  if (!obj.is_object()) throw InvalidArgument(std::string(where) + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key))
      throw InvalidArgument("unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end() && !it->is_null()) out = it->get<T>();
}

std::string lambda_rule_name(LambdaRule r) {
  return r == LambdaRule::LogM ? "log_m" : "sqrt_log_m";
}

LambdaRule parse_lambda_rule(const std::string& s) {
  if (s == "log_m") return LambdaRule::LogM;
  if (s == "sqrt_log_m") return LambdaRule::SqrtLogM;
  throw InvalidArgument("lambda_rule must be 'log_m' or 'sqrt_log_m', got '" + s + "'");
}

RateTable parse_events(const json& list) {
  RateTable table;
  for (const auto& e : list) {
    if (!e.is_array() || e.size() != 3)
      throw InvalidArgument("custom rate entries are [type1_offspring, type2_offspring, rate]");
    table[{e[0].get<unsigned>(), e[1].get<unsigned>()}] += e[2].get<double>();
  }
  return table;
}

json events_json(const RateTable& table) {
  json out = json::array();
  for (const auto& [offspring, rate] : table)
    out.push_back({offspring.first, offspring.second, rate});
  return out;
}

double param(const ModelConfig& mc, const std::string& key) {
  for (const auto& [name, value] : mc.params)
    if (name == key) return value;
  throw InvalidArgument("model '" + mc.name + "' is missing parameter '" + key + "'");
}

std::vector<std::string> param_names(const std::string& model) {
  if (model == "hsc") return {"rho", "nu", "mu"};
  if (model == "bds") return {"beta", "sigma", "delta"};
  return {};
}

}  // namespace

Backend parse_backend(const std::string& name) {
  if (name == "baseline") return Backend::Baseline;
  if (name == "csgf") return Backend::Csgf;
  if (name == "oracle") return Backend::Oracle;
  throw InvalidArgument("back end must be baseline, csgf or oracle, got '" + name + "'");
}

std::string to_string(Backend backend) {
  switch (backend) {
    case Backend::Baseline: return "baseline";
    case Backend::Csgf: return "csgf";
    case Backend::Oracle: return "oracle";
  }
  return "baseline";
}

Config default_config(const std::string& model_name) {
  Config cfg;
  cfg.model.name = model_name;
  if (model_name == "hsc") {
    cfg.model.params = {{"rho", 0.125}, {"nu", 0.104}, {"mu", 0.147}};
    cfg.t = 1.0;
    cfg.solver.lambda_rule = LambdaRule::SqrtLogM;
    cfg.bench.rows = {{32, 16}, {64, 29}, {128, 43}, {256, 65}};
  } else if (model_name == "bds") {
    cfg.model.params = {{"beta", 0.0156}, {"sigma", 0.00426}, {"delta", 0.0187}};
    cfg.t = 0.35;
    cfg.solver.lambda_rule = LambdaRule::LogM;
    cfg.bench.rows = {{32, 12}, {64, 18}, {128, 25}, {256, 33}};
  } else if (model_name == "custom") {
    cfg.bench.rows = {{32, 16}, {64, 29}, {128, 43}, {256, 65}};
  } else {
    throw InvalidArgument("unknown model '" + model_name + "' (expected hsc, bds or custom)");
  }
  return cfg;
}

Config parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(doc, {"model", "t", "j", "k", "n", "backend", "solver", "ode", "baseline",
                       "oracle", "bench", "seed", "threads"},
                 "config");

  std::string name = "hsc";
  if (doc.contains("model")) read(doc["model"], "name", name);
  Config cfg = default_config(name);

  try {
    if (doc.contains("model")) {
      const json& m = doc["model"];
      std::set<std::string> allowed{"name", "type1", "type2"};
      for (const auto& p : param_names(name)) allowed.insert(p);
      reject_unknown(m, allowed, "model");
      for (auto& [key, value] : cfg.model.params) read(m, key.c_str(), value);
      if (name == "custom") {
        if (!m.contains("type1") || !m.contains("type2"))
          throw InvalidArgument("custom model needs 'type1' and 'type2' event lists");
        cfg.model.type1_events = parse_events(m["type1"]);
        cfg.model.type2_events = parse_events(m["type2"]);
      }
    }
    read(doc, "t", cfg.t);
    read(doc, "j", cfg.j);
    read(doc, "k", cfg.k);
    read(doc, "n", cfg.n);
    if (doc.contains("backend")) cfg.backend = parse_backend(doc["backend"].get<std::string>());
    read(doc, "seed", cfg.seed);
    read(doc, "threads", cfg.threads);

    if (doc.contains("solver")) {
      const json& s = doc["solver"];
      reject_unknown(s, {"m", "lambda", "lambda_rule", "initial_step", "step_cap", "shrink",
                         "warm_start", "max_iters", "stop_tol", "prox_at_momentum",
                         "max_shrinks"},
                     "solver");
      if (s.contains("m") && !s["m"].is_null()) cfg.solver.m = s["m"].get<std::size_t>();
      if (s.contains("lambda") && !s["lambda"].is_null())
        cfg.solver.lambda = s["lambda"].get<double>();
      if (s.contains("lambda_rule"))
        cfg.solver.lambda_rule = parse_lambda_rule(s["lambda_rule"].get<std::string>());
      RecoveryConfig& r = cfg.solver.recovery;
      read(s, "initial_step", r.initial_step);
      read(s, "step_cap", r.step_cap);
      read(s, "shrink", r.shrink);
      read(s, "warm_start", r.warm_start);
      read(s, "max_iters", r.max_iters);
      read(s, "stop_tol", r.stop_tol);
      read(s, "prox_at_momentum", r.prox_at_momentum);
      read(s, "max_shrinks", r.max_shrinks);
    }
    if (doc.contains("ode")) {
      reject_unknown(doc["ode"], {"abs_tol", "rel_tol"}, "ode");
      read(doc["ode"], "abs_tol", cfg.ode.abs_tol);
      read(doc["ode"], "rel_tol", cfg.ode.rel_tol);
    }
    if (doc.contains("baseline")) {
      reject_unknown(doc["baseline"], {"conjugate_symmetry"}, "baseline");
      read(doc["baseline"], "conjugate_symmetry", cfg.baseline.conjugate_symmetry);
    }
    if (doc.contains("oracle")) {
      reject_unknown(doc["oracle"], {"cap", "max_sink_mass", "reps"}, "oracle");
      read(doc["oracle"], "cap", cfg.oracle.cap);
      read(doc["oracle"], "max_sink_mass", cfg.oracle.max_sink_mass);
      read(doc["oracle"], "reps", cfg.oracle.reps);
    }
    if (doc.contains("bench")) {
      const json& b = doc["bench"];
      reject_unknown(b, {"rows", "trials", "occupancy"}, "bench");
      if (b.contains("rows")) {
        cfg.bench.rows.clear();
        for (const auto& row : b["rows"]) {
          reject_unknown(row, {"n", "m"}, "bench row");
          cfg.bench.rows.push_back({row.at("n").get<std::size_t>(), row.at("m").get<std::size_t>()});
        }
      }
      read(b, "trials", cfg.bench.trials);
      read(b, "occupancy", cfg.bench.occupancy);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }

  if (!(cfg.t >= 0.0)) throw InvalidArgument("t must be non-negative");
  if (!(cfg.bench.occupancy > 0.0 && cfg.bench.occupancy <= 1.0))
    throw InvalidArgument("bench occupancy must lie in (0, 1]");
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void apply_environment(Config& cfg) {
  if (const char* s = std::getenv("CSGF_SEED"); s && *s) cfg.seed = std::stoull(s);
  if (const char* s = std::getenv("CSGF_THREADS"); s && *s)
    cfg.threads = static_cast<unsigned>(std::stoul(s));
}

std::string to_json(const Config& cfg) {
  json model{{"name", cfg.model.name}};
  for (const auto& [key, value] : cfg.model.params) model[key] = value;
  if (cfg.model.name == "custom") {
    model["type1"] = events_json(cfg.model.type1_events);
    model["type2"] = events_json(cfg.model.type2_events);
  }
  const RecoveryConfig& r = cfg.solver.recovery;
  json solver{{"lambda_rule", lambda_rule_name(cfg.solver.lambda_rule)},
              {"initial_step", r.initial_step},
              {"step_cap", r.step_cap},
              {"shrink", r.shrink},
              {"warm_start", r.warm_start},
              {"max_iters", r.max_iters},
              {"stop_tol", r.stop_tol},
              {"prox_at_momentum", r.prox_at_momentum},
              {"max_shrinks", r.max_shrinks}};
  solver["m"] = cfg.solver.m ? json(*cfg.solver.m) : json(nullptr);
  solver["lambda"] = cfg.solver.lambda ? json(*cfg.solver.lambda) : json(nullptr);
  json rows = json::array();
  for (const auto& row : cfg.bench.rows) rows.push_back({{"n", row.n}, {"m", row.m}});

  json doc{{"model", model},
           {"t", cfg.t},
           {"j", cfg.j},
           {"k", cfg.k},
           {"n", cfg.n},
           {"backend", to_string(cfg.backend)},
           {"solver", solver},
           {"ode", {{"abs_tol", cfg.ode.abs_tol}, {"rel_tol", cfg.ode.rel_tol}}},
           {"baseline", {{"conjugate_symmetry", cfg.baseline.conjugate_symmetry}}},
           {"oracle",
            {{"cap", cfg.oracle.cap},
             {"max_sink_mass", cfg.oracle.max_sink_mass},
             {"reps", cfg.oracle.reps}}},
           {"bench", {{"rows", rows}, {"trials", cfg.bench.trials}, {"occupancy", cfg.bench.occupancy}}},
           {"seed", cfg.seed}};
  // threads are deliberately absent: they never change results
  return doc.dump(2);
}

std::uint64_t config_hash(const Config& cfg) {
  // FNV-1a over the canonical rendering
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : to_json(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

ModelSpec build_model(const ModelConfig& mc, const ode::Tolerances& tol) {
  ModelSpec model;
  if (mc.name == "hsc") {
    model = hsc_model(param(mc, "rho"), param(mc, "nu"), param(mc, "mu"));
  } else if (mc.name == "bds") {
    model = bds_model(param(mc, "beta"), param(mc, "sigma"), param(mc, "delta"));
  } else if (mc.name == "custom") {
    model.name = "custom";
    model.rates = TwoTypeRates::from_events(mc.type1_events, mc.type2_events);
    model.rates.validate();
  } else {
    throw InvalidArgument("unknown model '" + mc.name + "'");
  }
  model.tolerances = tol;
  return model;
}

double resolve_lambda(const SolverConfig& solver, std::size_t m) {
  return solver.lambda ? *solver.lambda : default_lambda(solver.lambda_rule, m);
}

}  // namespace csgf
