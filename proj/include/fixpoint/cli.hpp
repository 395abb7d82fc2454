#pragma once

// Batch front-end: resolves a run configuration (flags > config file >
// defaults, seed falling back to FIXPOINT_SEED), drives certify / scan /
// iterate / solve / demo and writes deterministic JSON and CSV reports.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fixpoint/conditions.hpp"
#include "fixpoint/iterate.hpp"
#include "fixpoint/mapping.hpp"
#include "fixpoint/report.hpp"

namespace fixpoint {

// usage / configuration problem; maps to exit code 2
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& field, const std::string& msg)
      : std::runtime_error("config field '" + field + "': " + msg), field(field) {}
  std::string field;
};

namespace cli_detail {

inline void deep_merge(json& base, const json& overlay) {
  if (!overlay.is_object() || !base.is_object()) {
    base = overlay;
    return;
  }
  for (auto it = overlay.begin(); it != overlay.end(); ++it) {
    if (base.contains(it.key()) && base[it.key()].is_object() && it.value().is_object())
      deep_merge(base[it.key()], it.value());
    else
      base[it.key()] = it.value();
  }
}

inline std::vector<double> parse_number_list(const std::string& s, const char* field) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(field, "bad number '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(field, "empty list");
  return out;
}

// "a:b:step" (inclusive) or a comma-separated list
inline std::vector<double> parse_k_grid(const std::string& s) {
  const auto c1 = s.find(':');
  if (c1 == std::string::npos) return parse_number_list(s, "k-grid");
  const auto c2 = s.find(':', c1 + 1);
  if (c2 == std::string::npos) throw ConfigError("k-grid", "expected a:b:step");
  try {
    const double a = std::stod(s.substr(0, c1));
    const double b = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(s.substr(c2 + 1));
    if (!(step > 0) || b < a) throw ConfigError("k-grid", "expected a <= b and step > 0");
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("k-grid", "bad range '" + s + "'");
  }
}

// "k=0.5,b=0.25" -> json object
inline json parse_params_string(const std::string& s) {
  json out = json::object();
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("params", "expected name=value, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    try {
      out[name] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("params", "bad value in '" + item + "'");
    }
  }
  return out;
}

// inline JSON, @file, or a bare builtin name
inline json parse_mapping_arg(const std::string& s) {
  if (!s.empty() && s[0] == '@') {
    std::ifstream f(s.substr(1));
    if (!f) throw ConfigError("mapping", "cannot open file '" + s.substr(1) + "'");
    try {
      return json::parse(f);
    } catch (const std::exception& e) {
      throw ConfigError("mapping", std::string("bad JSON: ") + e.what());
    }
  }
  if (!s.empty() && s[0] == '{') {
    try {
      return json::parse(s);
    } catch (const std::exception& e) {
      throw ConfigError("mapping", std::string("bad JSON: ") + e.what());
    }
  }
  return json{{"kind", "builtin"}, {"name", s}};
}

}  // namespace cli_detail

// Raw command-line options; empty optionals mean "not given".
struct CliOptions {
  std::string command;
  std::optional<std::string> config_path;
  std::optional<std::string> mapping;
  std::optional<std::string> kind;
  std::optional<std::string> params;
  std::optional<std::string> k_grid;
  std::optional<std::string> x0;
  std::optional<std::string> norm;
  std::optional<std::string> stop_rule;  // "a-posteriori=DELTA" | "step-norm" | "max-iter"
  std::optional<std::string> out_json;
  std::optional<std::string> out_csv;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> max_iter;
  std::optional<std::uint64_t> grid;
  std::optional<std::uint64_t> random;
};

struct RunConfig {
  std::string command;
  std::optional<MappingSpec> mapping;
  std::optional<ConditionKind> kind;
  std::optional<json> params_json;  // validated per command
  PairSampler sampler;
  NormKind norm = NormKind::L2;
  std::vector<double> k_grid;
  std::optional<Point> x0;
  std::optional<double> lambda;
  double epsilon = 1e-10;
  std::size_t max_iter = 10000;
  StopRule stop = StopRule::step_norm();
  std::optional<std::string> out_json;
  std::optional<std::string> out_csv;
  std::uint64_t seed = 0;
  json resolved;  // the merged config echoed into every report
};

// flags override config-file fields override defaults
inline RunConfig resolve_config(const CliOptions& opts) {
  json cfg = {
      {"sampler", {{"grid", 51}, {"random", 256}}},
      {"iteration", {{"epsilon", 1e-10}, {"max_iter", 10000}}},
      {"norm", "l2"},
  };
  if (const char* env = std::getenv("FIXPOINT_SEED")) {
    try {
      cfg["seed"] = static_cast<std::uint64_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw ConfigError("seed", std::string("bad FIXPOINT_SEED '") + env + "'");
    }
  }

  if (opts.config_path) {
    std::ifstream f(*opts.config_path);
    if (!f) throw ConfigError("config", "cannot open '" + *opts.config_path + "'");
    json file_cfg;
    try {
      file_cfg = json::parse(f);
    } catch (const std::exception& e) {
      throw ConfigError("config", std::string("bad JSON: ") + e.what());
    }
    cli_detail::deep_merge(cfg, file_cfg);
  }

  json flags = json::object();
  if (opts.mapping) flags["mapping"] = cli_detail::parse_mapping_arg(*opts.mapping);
  if (opts.kind) flags["kind"] = *opts.kind;
  if (opts.params) flags["params"] = cli_detail::parse_params_string(*opts.params);
  if (opts.k_grid) flags["k_grid"] = cli_detail::parse_k_grid(*opts.k_grid);
  if (opts.seed) flags["seed"] = *opts.seed;
  if (opts.norm) flags["norm"] = *opts.norm;
  if (opts.grid) flags["sampler"]["grid"] = *opts.grid;
  if (opts.random) flags["sampler"]["random"] = *opts.random;
  if (opts.x0) flags["iteration"]["x0"] = cli_detail::parse_number_list(*opts.x0, "x0");
  if (opts.lambda) flags["iteration"]["lambda"] = *opts.lambda;
  if (opts.epsilon) flags["iteration"]["epsilon"] = *opts.epsilon;
  if (opts.max_iter) flags["iteration"]["max_iter"] = *opts.max_iter;
  if (opts.stop_rule) {
    const std::string& s = *opts.stop_rule;
    json rule;
    if (s == "step-norm") rule = {{"kind", "step_norm"}};
    else if (s == "max-iter") rule = {{"kind", "max_iter_only"}};
    else if (s.rfind("a-posteriori=", 0) == 0) {
      try {
        rule = {{"kind", "a_posteriori"}, {"delta", std::stod(s.substr(13))}};
      } catch (const std::exception&) {
        throw ConfigError("stop-rule", "bad delta in '" + s + "'");
      }
    } else {
      throw ConfigError("stop-rule", "unknown rule '" + s + "'");
    }
    flags["iteration"]["stop_rule"] = rule;
  }
  if (opts.out_json) flags["out_json"] = *opts.out_json;
  if (opts.out_csv) flags["out_csv"] = *opts.out_csv;
  cli_detail::deep_merge(cfg, flags);

  RunConfig rc;
  rc.command = opts.command;
  try {
    if (cfg.contains("seed")) rc.seed = cfg.at("seed").get<std::uint64_t>();
    rc.sampler = sampler_from_json(cfg.at("sampler"));
    if (!cfg.at("sampler").contains("seed")) rc.sampler.seed = rc.seed;
    rc.norm = norm_from_string(cfg.at("norm").get<std::string>());
    if (cfg.contains("mapping")) {
      try {
        rc.mapping = mapping_from_json(cfg.at("mapping"));
      } catch (const std::exception& e) {
        throw ConfigError("mapping", e.what());
      }
    }
    if (cfg.contains("kind")) {
      try {
        rc.kind = condition_kind_from_string(cfg.at("kind").get<std::string>());
      } catch (const std::exception& e) {
        throw ConfigError("kind", e.what());
      }
    }
    if (cfg.contains("params")) rc.params_json = cfg.at("params");
    if (cfg.contains("k_grid")) rc.k_grid = cfg.at("k_grid").get<std::vector<double>>();
    const json& it = cfg.at("iteration");
    rc.epsilon = it.at("epsilon").get<double>();
    rc.max_iter = it.at("max_iter").get<std::size_t>();
    if (it.contains("x0")) rc.x0 = Point(it.at("x0").get<std::vector<double>>());
    if (it.contains("lambda")) rc.lambda = it.at("lambda").get<double>();
    if (it.contains("stop_rule")) {
      const json& r = it.at("stop_rule");
      const std::string kind = r.at("kind").get<std::string>();
      if (kind == "step_norm") rc.stop = StopRule::step_norm();
      else if (kind == "max_iter_only") rc.stop = StopRule::max_iter_only();
      else if (kind == "a_posteriori") rc.stop = StopRule::a_posteriori(r.at("delta").get<double>());
      else throw ConfigError("iteration.stop_rule", "unknown kind '" + kind + "'");
    }
    if (cfg.contains("out_json")) rc.out_json = cfg.at("out_json").get<std::string>();
    if (cfg.contains("out_csv")) rc.out_csv = cfg.at("out_csv").get<std::string>();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("config", e.what());
  }
  rc.resolved = std::move(cfg);
  return rc;
}

namespace cli_detail {

inline void emit(const RunConfig& rc, const json& report, std::ostream& out) {
  const std::string text = dump_json(report);
  if (rc.out_json)
    write_atomic(*rc.out_json, text);
  else
    out << text;
}

inline const MappingSpec& require_mapping(const RunConfig& rc) {
  if (!rc.mapping) throw ConfigError("mapping", "required but not given");
  return *rc.mapping;
}

inline ConditionKind require_kind(const RunConfig& rc) {
  if (!rc.kind) throw ConfigError("kind", "required but not given");
  return *rc.kind;
}

// params for certify: full constants -> params mode; for enriched kinds a
// bare {"k":...} requests estimate mode at that k
struct CertifyRequest {
  std::optional<ConditionParams> params;
  std::optional<double> enriched_k;
};

inline CertifyRequest certify_request(ConditionKind kind, const std::optional<json>& params_json) {
  CertifyRequest req;
  if (!params_json) {
    if (is_enriched(kind)) throw ConfigError("params", "enriched kinds need at least k=...");
    if (kind == ConditionKind::Zamfirescu) throw ConfigError("params", "zamfirescu needs a=..,b=..,c=..");
    return req;
  }
  const json& pj = *params_json;
  const bool only_k = is_enriched(kind) && pj.contains("k") && pj.size() == 1;
  try {
    if (only_k)
      req.enriched_k = pj.at("k").get<double>();
    else
      req.params = ConditionParams::from_json(kind, pj);
  } catch (const std::exception& e) {
    throw ConfigError("params", e.what());
  }
  return req;
}

}  // namespace cli_detail

// exit codes: 0 feasible / verified, 1 infeasible / falsified, 2 usage error
inline int cmd_certify(const RunConfig& rc, std::ostream& out) {
  const MappingSpec& T = cli_detail::require_mapping(rc);
  const ConditionKind kind = cli_detail::require_kind(rc);
  const auto req = cli_detail::certify_request(kind, rc.params_json);
  const CertificateReport rep = certify(kind, T, rc.sampler, rc.norm, req.params, req.enriched_k);
  json j = certificate_to_json(rep);
  j["config"] = rc.resolved;
  cli_detail::emit(rc, j, out);
  return rep.verdict == Verdict::Infeasible ? 1 : 0;
}

inline int cmd_scan(const RunConfig& rc, std::ostream& out) {
  const MappingSpec& T = cli_detail::require_mapping(rc);
  ConditionKind kind = rc.kind.value_or(ConditionKind::EnrichedChatterjea);
  if (!is_enriched(kind)) throw ConfigError("kind", "scan needs an enriched condition kind");
  if (rc.k_grid.empty()) throw ConfigError("k-grid", "required but not given");
  const FeasibilityCurve curve = scan_k(kind, T, rc.k_grid, rc.sampler, rc.norm);
  json j = curve_to_json(curve);
  j["sampler"] = sampler_to_json(rc.sampler);
  j["norm"] = to_string(rc.norm);
  j["config"] = rc.resolved;
  cli_detail::emit(rc, j, out);
  return curve.best.feasible ? 0 : 1;
}

inline int cmd_iterate(const RunConfig& rc, std::ostream& out) {
  const MappingSpec& T = cli_detail::require_mapping(rc);
  if (!rc.x0) throw ConfigError("x0", "required but not given");
  IterationConfig cfg;
  cfg.lambda = rc.lambda.value_or(1.0);
  cfg.x0 = *rc.x0;
  cfg.max_iter = rc.max_iter;
  cfg.epsilon = rc.epsilon;
  cfg.stop = rc.stop;
  cfg.norm = rc.norm;

  const SelfMapReport sm = check_self_map(T, rc.seed, 256);
  json j;
  if (!sm.ok) {
    j["error"] = "mapping is not a self-map on its domain";
    j["worst_violation"] = sm.worst_violation;
    if (sm.worst_point) j["worst_point"] = sm.worst_point->coords();
    j["config"] = rc.resolved;
    cli_detail::emit(rc, j, out);
    return 1;
  }

  const IterationTrace trace = krasnoselskij(T, cfg);
  const std::optional<double> delta =
      rc.stop.kind == StopRuleKind::APosteriori ? std::optional<double>(rc.stop.delta)
                                                : std::nullopt;
  if (rc.out_csv)
    write_atomic(*rc.out_csv, trace_to_csv(trace, delta, known_fixed_point(T), rc.norm));
  j["converged"] = trace.converged;
  j["iterations"] = trace.iterations_used;
  j["final"] = trace.final().coords();
  j["last_step_norm"] = trace.step_norms.empty() ? json(nullptr) : json(trace.step_norms.back());
  if (!trace.diagnostic.empty()) j["diagnostic"] = trace.diagnostic;
  j["config"] = rc.resolved;
  cli_detail::emit(rc, j, out);
  return trace.converged ? 0 : 1;
}

inline int cmd_solve(const RunConfig& rc, std::ostream& out) {
  const MappingSpec& T = cli_detail::require_mapping(rc);
  const ConditionKind kind = rc.kind.value_or(ConditionKind::EnrichedChatterjea);
  if (!is_enriched(kind)) throw ConfigError("kind", "solve needs an enriched condition kind");

  // certificate: inline constants, or scan the k grid for the best ones
  std::optional<CertificateReport> cert;
  if (rc.params_json && !(rc.params_json->contains("k") && rc.params_json->size() == 1)) {
    ConditionParams params = [&] {
      try {
        return ConditionParams::from_json(kind, *rc.params_json);
      } catch (const std::exception& e) {
        throw ConfigError("params", e.what());
      }
    }();
    cert = certify(kind, T, rc.sampler, rc.norm, params);
  } else if (rc.params_json) {
    cert = certify(kind, T, rc.sampler, rc.norm, std::nullopt,
                   rc.params_json->at("k").get<double>());
  } else {
    std::vector<double> grid = rc.k_grid;
    if (grid.empty())
      for (int i = 1; i <= 20; ++i) grid.push_back(0.1 * i);
    const FeasibilityCurve curve = scan_k(kind, T, grid, rc.sampler, rc.norm);
    if (!curve.best.feasible) {
      json j;
      j["error"] = "no feasible enriched constants found on the k grid";
      j["best"] = {{"k", curve.best.k}, {"min_constant", json_real(curve.best.constant_min)}};
      j["config"] = rc.resolved;
      cli_detail::emit(rc, j, out);
      return 1;
    }
    cert = certify(kind, T, rc.sampler, rc.norm, std::nullopt, curve.best.k);
  }

  json j;
  j["certificate"] = certificate_to_json(*cert);
  if (cert->verdict == Verdict::Infeasible) {
    j["error"] = "certificate is infeasible";
    j["config"] = rc.resolved;
    cli_detail::emit(rc, j, out);
    return 1;
  }

  const Point x0 = rc.x0 ? *rc.x0
                         : convex_combine(0.5, T.domain().lower(), T.domain().upper());
  const std::string csv_path = rc.out_csv.value_or("solve_trace.csv");
  try {
    const SolveResult res = solve(T, *cert, x0, rc.epsilon, rc.max_iter, rc.norm, rc.lambda);
    const std::optional<double> delta =
        cert->kind == ConditionKind::EnrichedChatterjea
            ? std::optional<double>(delta_from_b(cert->params->constant()))
            : std::nullopt;
    write_atomic(csv_path, trace_to_csv(res.trace, delta,
                                        res.reference_p ? res.reference_p : known_fixed_point(T),
                                        rc.norm));
    const std::size_t violations = res.budget ? res.budget->total_violations() : 0;
    j["p"] = res.p.coords();
    j["lambda"] = res.lambda;
    j["iterations"] = res.trace.iterations_used;
    j["violations"] = violations;
    if (res.budget) j["budget"] = budget_to_json(*res.budget);
    j["trace_csv"] = csv_path;
    j["config"] = rc.resolved;
    cli_detail::emit(rc, j, out);
    out << "p = " << point_csv(res.p) << "  iterations = " << res.trace.iterations_used
        << "  bound violations = " << violations << "\n";
    return violations == 0 ? 0 : 1;
  } catch (const DivergenceError& e) {
    write_atomic(csv_path, trace_to_csv(e.trace, std::nullopt, known_fixed_point(T), rc.norm));
    j["error"] = e.what();
    j["iterations"] = e.trace.iterations_used;
    j["trace_csv"] = csv_path;
    j["config"] = rc.resolved;
    cli_detail::emit(rc, j, out);
    out << "diverged: " << e.what() << "\n  trace written to " << csv_path << "\n";
    return 1;
  }
}

}  // namespace fixpoint
