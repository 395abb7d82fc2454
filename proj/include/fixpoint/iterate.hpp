#pragma once

// Picard / Krasnoselskij iteration drivers, stopping rules, trace capture
// and verification of the a priori / a posteriori / unified error bounds
// along a computed orbit.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fixpoint/conditions.hpp"
#include "fixpoint/mapping.hpp"
#include "fixpoint/space.hpp"

namespace fixpoint {

// delta = b/(1-b), the step-contraction rate of the averaged orbit.
inline double delta_from_b(double b) {
  if (!(b >= 0.0 && b < 0.5))
    throw std::invalid_argument("delta_from_b: b must lie in [0,1/2)");
  return b / (1.0 - b);
}

enum class StopRuleKind { APosteriori, StepNorm, MaxIterOnly };

struct StopRule {
  StopRuleKind kind = StopRuleKind::StepNorm;
  double delta = 0;  // only for APosteriori

  static StopRule a_posteriori(double delta) {
    if (!(delta >= 0.0 && delta < 1.0))
      throw std::invalid_argument("stop rule: delta must lie in [0,1)");
    return StopRule{StopRuleKind::APosteriori, delta};
  }
  static StopRule step_norm() { return StopRule{StopRuleKind::StepNorm, 0}; }
  static StopRule max_iter_only() { return StopRule{StopRuleKind::MaxIterOnly, 0}; }
};

struct IterationConfig {
  double lambda = 1.0;  // in (0,1]; 1 is plain Picard iteration
  Point x0{0.0};
  std::size_t max_iter = 10000;
  double epsilon = 1e-10;
  StopRule stop;
  NormKind norm = NormKind::L2;
};

struct IterationTrace {
  std::vector<Point> points;       // x_0 .. x_N
  std::vector<double> step_norms;  // step_norms[n-1] = ||x_n - x_{n-1}||, n = 1..N
  bool converged = false;
  std::size_t iterations_used = 0;  // N
  std::string diagnostic;           // set when the driver aborted early

  const Point& final() const { return points.back(); }
  double step(std::size_t n) const { return step_norms.at(n - 1); }  // 1-based
};

struct IterationDomainError : std::runtime_error {
  IterationDomainError(const std::string& msg, std::size_t index)
      : std::runtime_error(msg + " (iteration " + std::to_string(index) + ")"), index(index) {}
  std::size_t index;
};

// x_{n+1} = (1-lambda) x_n + lambda T x_n until the stop rule fires or
// max_iter is reached. Under the a posteriori rule the driver aborts with a
// diagnostic if the step norm stops decreasing over a 50-step window.
inline IterationTrace krasnoselskij(const MappingSpec& T, const IterationConfig& cfg) {
  if (!(cfg.lambda > 0.0 && cfg.lambda <= 1.0))
    throw std::invalid_argument("krasnoselskij: lambda outside (0,1]");
  if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("krasnoselskij: epsilon must be > 0");
  if (cfg.max_iter < 1) throw std::invalid_argument("krasnoselskij: max_iter must be >= 1");
  if (!T.domain().contains(cfg.x0))
    throw std::invalid_argument("krasnoselskij: x0 outside domain");

  const AveragedSpec Tl = average(T, cfg.lambda);
  constexpr std::size_t kStallWindow = 50;

  IterationTrace trace;
  trace.points.push_back(cfg.x0);
  double best_step = std::numeric_limits<double>::infinity();
  std::size_t since_improvement = 0;

  for (std::size_t n = 1; n <= cfg.max_iter; ++n) {
    Point next = [&] {
      try {
        return evaluate(Tl, trace.points.back());
      } catch (const std::exception& e) {
        throw IterationDomainError(std::string("krasnoselskij: ") + e.what(), n);
      }
    }();
    const double step = distance(next, trace.points.back(), cfg.norm);
    trace.points.push_back(std::move(next));
    trace.step_norms.push_back(step);
    trace.iterations_used = n;

    double bound = step;
    switch (cfg.stop.kind) {
      case StopRuleKind::APosteriori:
        bound = cfg.stop.delta / (1.0 - cfg.stop.delta) * step;
        break;
      case StopRuleKind::StepNorm: bound = step; break;
      case StopRuleKind::MaxIterOnly: bound = std::numeric_limits<double>::infinity(); break;
    }
    if (bound <= cfg.epsilon) {
      trace.converged = true;
      return trace;
    }

    if (cfg.stop.kind == StopRuleKind::APosteriori) {
      if (step < best_step) {
        best_step = step;
        since_improvement = 0;
      } else if (++since_improvement >= kStallWindow) {
        trace.diagnostic = "step norm did not decrease over " + std::to_string(kStallWindow) +
                           " iterations (last step " + format_double(step) + ")";
        return trace;
      }
    }
  }
  return trace;
}

struct ErrorBudget {
  double delta = 0;
  // bounds indexed by n = 1..N (position n-1)
  std::vector<double> a_priori;      // delta^n/(1-delta) * ||x_1 - x_0||
  std::vector<double> a_posteriori;  // delta/(1-delta) * ||x_n - x_{n-1}||
  // unified[i-1][n-1] = delta^i/(1-delta) * ||x_n - x_{n-1}||, i = 1..i_max
  std::vector<std::vector<double>> unified;
  std::vector<std::size_t> ratio_violations;         // n with step(n+1) > delta*step(n)
  std::vector<std::size_t> a_priori_violations;      // n with ||x_n - p|| > bound
  std::vector<std::size_t> a_posteriori_violations;  // n with ||x_n - p|| > bound
  std::vector<std::pair<std::size_t, std::size_t>> unified_violations;  // (n, i)

  std::size_t total_violations() const {
    return ratio_violations.size() + a_priori_violations.size() + a_posteriori_violations.size() +
           unified_violations.size();
  }
};

// Checks, against a known (or high-precision) fixed point p, the bounds
//   ||x_{n+i-1} - p|| <= delta^i/(1-delta) * ||x_n - x_{n-1}||   (n >= 1)
// together with the step contraction ||x_{n+1}-x_n|| <= delta*||x_n-x_{n-1}||.
// A bound counts as violated when exceeded by more than tol_abs + tol_rel*bound.
inline ErrorBudget verify_error_budget(const IterationTrace& trace, double b, const Point& p,
                                       std::size_t i_max, NormKind norm, double tol_abs = 1e-12,
                                       double tol_rel = 1e-12) {
  if (trace.points.empty()) throw std::invalid_argument("verify_error_budget: empty trace");
  const double delta = delta_from_b(b);
  const std::size_t N = trace.iterations_used;

  ErrorBudget budget;
  budget.delta = delta;
  const auto tol = [&](double bound) { return tol_abs + tol_rel * bound; };

  std::vector<double> dist_to_p(N + 1);
  for (std::size_t n = 0; n <= N; ++n) dist_to_p[n] = distance(trace.points[n], p, norm);

  const double factor = 1.0 / (1.0 - delta);
  for (std::size_t n = 1; n <= N; ++n) {
    const double apri = std::pow(delta, static_cast<double>(n)) * factor *
                        (N >= 1 ? trace.step(1) : 0.0);
    const double apost = delta * factor * trace.step(n);
    budget.a_priori.push_back(apri);
    budget.a_posteriori.push_back(apost);
    if (dist_to_p[n] > apri + tol(apri)) budget.a_priori_violations.push_back(n);
    if (dist_to_p[n] > apost + tol(apost)) budget.a_posteriori_violations.push_back(n);
    if (n < N) {
      const double rhs = delta * trace.step(n);
      if (trace.step(n + 1) > rhs + tol(rhs)) budget.ratio_violations.push_back(n);
    }
  }
  for (std::size_t i = 1; i <= i_max; ++i) {
    std::vector<double> row;
    row.reserve(N);
    for (std::size_t n = 1; n <= N; ++n) {
      const double bound = std::pow(delta, static_cast<double>(i)) * factor * trace.step(n);
      row.push_back(bound);
      const std::size_t idx = n + i - 1;
      if (idx <= N && dist_to_p[idx] > bound + tol(bound))
        budget.unified_violations.emplace_back(n, i);
    }
    budget.unified.push_back(std::move(row));
  }
  return budget;
}

struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& msg, IterationTrace trace)
      : std::runtime_error(msg), trace(std::move(trace)) {}
  IterationTrace trace;
};

struct SolveResult {
  Point p;
  double lambda;
  IterationTrace trace;
  std::optional<ErrorBudget> budget;  // enriched-Chatterjea path only
  std::optional<Point> reference_p;   // what the budget was checked against
};

// Runs the Krasnoselskij scheme with lambda = 1/(k+1) taken from a feasible
// enriched certificate. The Chatterjea path stops on the a posteriori bound
// and verifies the error budget against the known fixed point (or a
// reference run at 10x tighter epsilon); the type path stops on the step
// norm and produces no budget (its theorem asserts convergence only).
inline SolveResult solve(const MappingSpec& T, const CertificateReport& cert, const Point& x0,
                         double epsilon, std::size_t max_iter = 10000,
                         NormKind norm = NormKind::L2,
                         std::optional<double> lambda_override = std::nullopt) {
  if (!is_enriched(cert.kind))
    throw std::invalid_argument("solve: certificate must be for an enriched condition");
  if (cert.verdict == Verdict::Infeasible)
    throw std::invalid_argument("solve: certificate is infeasible");
  if (!cert.params) throw std::invalid_argument("solve: certificate carries no constants");

  const double k = cert.params->enriched_k();
  const double constant = cert.params->constant();
  const double lambda = lambda_override ? *lambda_override : lambda_from_k(k);
  const bool chatterjea_path = cert.kind == ConditionKind::EnrichedChatterjea;

  {
    const SelfMapReport sm = check_self_map(T, cert.sampler.seed, 256);
    if (!sm.ok)
      throw std::invalid_argument("solve: T is not a self-map on its domain (violation " +
                                  format_double(sm.worst_violation) + ")");
  }

  IterationConfig cfg;
  cfg.lambda = lambda;
  cfg.x0 = x0;
  cfg.max_iter = max_iter;
  cfg.epsilon = epsilon;
  cfg.norm = norm;
  cfg.stop = chatterjea_path ? StopRule::a_posteriori(delta_from_b(constant))
                             : StopRule::step_norm();

  IterationTrace trace = krasnoselskij(T, cfg);
  if (!trace.converged) {
    std::string msg = trace.diagnostic.empty()
                          ? "no convergence within " + std::to_string(max_iter) + " iterations"
                          : trace.diagnostic;
    throw DivergenceError("solve: " + msg, std::move(trace));
  }

  SolveResult result{trace.final(), lambda, std::move(trace), std::nullopt, std::nullopt};
  if (chatterjea_path) {
    std::optional<Point> p_ref = known_fixed_point(T);
    double tol_abs = 1e-12;
    if (!p_ref) {
      IterationConfig ref_cfg = cfg;
      ref_cfg.epsilon = epsilon / 10.0;
      ref_cfg.max_iter = max_iter * 10;
      const IterationTrace ref = krasnoselskij(T, ref_cfg);
      if (!ref.converged)
        throw DivergenceError("solve: reference run did not converge", std::move(result.trace));
      p_ref = ref.final();
      tol_abs = 10.0 * epsilon;  // slack for the approximate reference limit
    }
    result.reference_p = p_ref;
    result.budget = verify_error_budget(result.trace, constant, *p_ref, 5, norm, tol_abs);
  }
  return result;
}

struct UniquenessVerdict {
  bool consistent = false;
  std::optional<Point> limit;  // the agreed limit when consistent
  std::optional<std::pair<std::size_t, std::size_t>> divergent_pair;
  double max_spread = 0;
};

// All limits must agree within 10*epsilon to count as unique-consistent.
inline UniquenessVerdict uniqueness_probe(std::span<const Point> limits, double epsilon,
                                          NormKind norm = NormKind::L2) {
  if (limits.size() < 2)
    throw std::invalid_argument("uniqueness_probe: need at least two limits");
  UniquenessVerdict v;
  v.consistent = true;
  for (std::size_t i = 0; i < limits.size(); ++i) {
    for (std::size_t j = i + 1; j < limits.size(); ++j) {
      const double d = distance(limits[i], limits[j], norm);
      if (d > v.max_spread) {
        v.max_spread = d;
        if (d > 10.0 * epsilon) {
          v.consistent = false;
          v.divergent_pair = {i, j};
        }
      }
    }
  }
  if (v.consistent) v.limit = limits[0];
  return v;
}

}  // namespace fixpoint
