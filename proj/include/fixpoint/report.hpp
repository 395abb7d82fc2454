#pragma once

// JSON / CSV serialization of certifier reports, feasibility curves,
// iteration traces and error budgets. Output is deterministic: object keys
// are sorted, CSV floats carry 17 significant digits, '.' decimal point.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fixpoint/conditions.hpp"
#include "fixpoint/iterate.hpp"
#include "fixpoint/mapping.hpp"

namespace fixpoint {

using nlohmann::json;

// JSON has no inf/nan literals; keep them readable instead of null.
inline json json_real(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "infinity" : "-infinity";
  return v;
}

inline std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline json sampler_to_json(const PairSampler& s) {
  return {{"seed", s.seed}, {"grid", s.grid_per_axis}, {"random", s.n_random}};
}

inline PairSampler sampler_from_json(const json& j) {
  PairSampler s;
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("grid")) s.grid_per_axis = j.at("grid").get<std::size_t>();
  if (j.contains("random")) s.n_random = j.at("random").get<std::size_t>();
  if (j.contains("exclude_diagonal")) s.exclude_diagonal = j.at("exclude_diagonal").get<bool>();
  return s;
}

inline json certificate_to_json(const CertificateReport& rep) {
  json j;
  j["kind"] = to_string(rep.kind);
  j["verdict"] = to_string(rep.verdict);
  j["min_constant"] = json_real(rep.min_constant);
  if (rep.witness) {
    j["witness"] = {{"x", rep.witness->x.coords()},
                    {"y", rep.witness->y.coords()},
                    {"lhs", rep.witness->lhs},
                    {"rhs", rep.witness->rhs}};
  } else {
    j["witness"] = nullptr;
  }
  j["pairs_checked"] = rep.pairs_checked;
  j["margin"] = json_real(rep.margin);
  j["sampler"] = sampler_to_json(rep.sampler);
  j["norm"] = to_string(rep.norm);
  if (rep.params) j["params"] = rep.params->to_json();
  return j;
}

inline json curve_to_json(const FeasibilityCurve& curve) {
  json entries = json::array();
  for (const auto& e : curve.entries)
    entries.push_back(
        {{"k", e.k}, {"min_constant", json_real(e.constant_min)}, {"feasible", e.feasible}});
  json j;
  j["kind"] = to_string(curve.kind);
  j["entries"] = std::move(entries);
  j["best"] = {{"k", curve.best.k},
               {"min_constant", json_real(curve.best.constant_min)},
               {"feasible", curve.best.feasible}};
  if (curve.refined)
    j["refined"] = {{"k", curve.refined->k},
                    {"min_constant", json_real(curve.refined->constant_min)},
                    {"feasible", curve.refined->feasible}};
  return j;
}

inline json budget_to_json(const ErrorBudget& b) {
  json j;
  j["delta"] = b.delta;
  j["a_priori"] = b.a_priori;
  j["a_posteriori"] = b.a_posteriori;
  j["unified"] = b.unified;
  j["ratio_violations"] = b.ratio_violations;
  j["a_priori_violations"] = b.a_priori_violations;
  j["a_posteriori_violations"] = b.a_posteriori_violations;
  json uv = json::array();
  for (const auto& [n, i] : b.unified_violations) uv.push_back({n, i});
  j["unified_violations"] = std::move(uv);
  j["total_violations"] = b.total_violations();
  return j;
}

inline std::string point_csv(const Point& p) {
  std::string s;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) s += ';';
    s += csv_double(p[i]);
  }
  return s;
}

// Columns: n, x (semicolon-joined coords), step_norm, a_priori_bound,
// a_posteriori_bound, dist_to_p. Bounds need delta (and the a priori one a
// first step); dist_to_p needs p. Missing values stay blank.
inline std::string trace_to_csv(const IterationTrace& trace,
                                const std::optional<double>& delta = std::nullopt,
                                const std::optional<Point>& p = std::nullopt,
                                NormKind norm = NormKind::L2) {
  std::string out = "n,x,step_norm,a_priori_bound,a_posteriori_bound,dist_to_p\n";
  const std::size_t N = trace.iterations_used;
  const bool has_delta = delta.has_value();
  const double d = delta.value_or(0.0);
  const double factor = 1.0 / (1.0 - d);
  for (std::size_t n = 0; n <= N; ++n) {
    out += std::to_string(n);
    out += ',';
    out += point_csv(trace.points[n]);
    out += ',';
    if (n >= 1) out += csv_double(trace.step(n));
    out += ',';
    if (n >= 1 && has_delta && N >= 1) {
      out += csv_double(std::pow(d, static_cast<double>(n)) * factor * trace.step(1));
      out += ',';
      out += csv_double(d * factor * trace.step(n));
    } else {
      out += ',';
    }
    out += ',';
    if (p) out += csv_double(distance(trace.points[n], *p, norm));
    out += '\n';
  }
  return out;
}

// temp file + rename, so readers never observe a half-written report
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    if (!f.good()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace fixpoint
