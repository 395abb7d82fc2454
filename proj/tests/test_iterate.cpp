#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fixpoint/iterate.hpp"

using namespace fixpoint;

namespace {

const MappingSpec& flip() {
  static const MappingSpec m = MappingSpec::builtin("flip");
  return m;
}
const MappingSpec& step() {
  static const MappingSpec m = MappingSpec::builtin("step_half");
  return m;
}

const PairSampler kSampler{1, 100, 51, true};
constexpr NormKind kNorm = NormKind::L2;

CertificateReport flip_cert(double k, double b) {
  return certify(ConditionKind::EnrichedChatterjea, flip(), kSampler, kNorm,
                 ConditionParams::enriched_chatterjea(k, b));
}

}  // namespace

TEST_CASE("delta_from_b") {
  CHECK(delta_from_b(0.0) == 0.0);
  CHECK(delta_from_b(0.25) == Catch::Approx(1.0 / 3.0).margin(1e-16));
  CHECK(delta_from_b(1.0 / 3.0) == Catch::Approx(0.5).margin(1e-16));
  CHECK_THROWS_AS(delta_from_b(0.5), std::invalid_argument);
  CHECK_THROWS_AS(delta_from_b(-0.1), std::invalid_argument);
}

TEST_CASE("Picard iteration of the flip map oscillates exactly") {
  IterationConfig cfg;
  cfg.lambda = 1.0;
  cfg.x0 = Point{0.0};
  cfg.max_iter = 100;
  cfg.stop = StopRule::max_iter_only();
  const IterationTrace trace = krasnoselskij(flip(), cfg);
  CHECK_FALSE(trace.converged);
  REQUIRE(trace.iterations_used == 100);
  REQUIRE(trace.points.size() == 101);
  for (std::size_t n = 0; n < trace.points.size(); ++n) {
    REQUIRE(trace.points[n] == Point{n % 2 ? 1.0 : 0.0});
    REQUIRE(std::abs(trace.points[n][0] - 0.5) == 0.5);  // exact
  }
  for (double s : trace.step_norms) REQUIRE(s == 1.0);
}

TEST_CASE("Krasnoselskij orbit of the flip map follows the closed form") {
  IterationConfig cfg;
  cfg.lambda = lambda_from_k(2.0 / 3.0);  // 0.6
  cfg.x0 = Point{0.0};
  cfg.max_iter = 20;
  cfg.stop = StopRule::max_iter_only();
  const IterationTrace trace = krasnoselskij(flip(), cfg);
  for (std::size_t n = 0; n <= 20; ++n) {
    const double expected = 0.5 * std::pow(0.2, static_cast<double>(n));
    REQUIRE(std::abs(trace.points[n][0] - 0.5) == Catch::Approx(expected).margin(1e-12));
  }

  cfg.max_iter = 1000;
  cfg.epsilon = 1e-10;
  cfg.stop = StopRule::a_posteriori(delta_from_b(0.25));
  const IterationTrace run = krasnoselskij(flip(), cfg);
  CHECK(run.converged);
  CHECK(run.iterations_used <= 16);
  CHECK(std::abs(run.final()[0] - 0.5) <= 1e-10);
}

TEST_CASE("lambda = 1/2 sends the flip map to its fixed point in one step") {
  IterationConfig cfg;
  cfg.lambda = 0.5;
  cfg.x0 = Point{0.0};
  cfg.stop = StopRule::a_posteriori(0.0);
  const IterationTrace trace = krasnoselskij(flip(), cfg);
  CHECK(trace.converged);
  CHECK(trace.iterations_used == 1);
  CHECK(trace.final() == Point{0.5});
}

TEST_CASE("the step map reaches its fixed point in two steps") {
  IterationConfig cfg;
  cfg.lambda = 1.0;
  cfg.x0 = Point{0.8};
  cfg.epsilon = 1e-12;
  cfg.stop = StopRule::step_norm();
  const IterationTrace trace = krasnoselskij(step(), cfg);
  CHECK(trace.converged);
  REQUIRE(trace.points.size() >= 3);
  CHECK(trace.points[1] == Point{0.0});
  CHECK(trace.points[2] == Point{0.0});
  CHECK(trace.final() == Point{0.0});
  CHECK(trace.iterations_used == 2);
}

TEST_CASE("escaping the domain raises a runtime error carrying the index") {
  const MappingSpec shifted = MappingSpec::expression("x + 1", BoxDomain::unit_interval());
  IterationConfig cfg;
  cfg.lambda = 1.0;
  cfg.x0 = Point{0.0};
  cfg.stop = StopRule::max_iter_only();
  cfg.max_iter = 10;
  try {
    krasnoselskij(shifted, cfg);
    FAIL("expected IterationDomainError");
  } catch (const IterationDomainError& e) {
    CHECK(e.index == 3);  // x2 = 2 left the box; evaluating there fails
  }
}

TEST_CASE("traces are bit-for-bit reproducible and lambda = 1 is plain Picard") {
  IterationConfig cfg;
  cfg.lambda = 1.0;
  cfg.x0 = Point{0.3};
  cfg.max_iter = 50;
  cfg.stop = StopRule::max_iter_only();
  const IterationTrace a = krasnoselskij(flip(), cfg);
  const IterationTrace b = krasnoselskij(flip(), cfg);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t n = 0; n < a.points.size(); ++n) REQUIRE(a.points[n] == b.points[n]);

  Point x = cfg.x0;
  for (std::size_t n = 1; n < a.points.size(); ++n) {
    x = evaluate(flip(), x);
    REQUIRE(a.points[n] == x);
  }
}

TEST_CASE("step norms are recomputable from the points") {
  IterationConfig cfg;
  cfg.lambda = 0.6;
  cfg.x0 = Point{0.1};
  cfg.max_iter = 30;
  cfg.stop = StopRule::max_iter_only();
  const IterationTrace t = krasnoselskij(flip(), cfg);
  REQUIRE(t.points.size() == t.iterations_used + 1);
  REQUIRE(t.step_norms.size() == t.iterations_used);
  for (std::size_t n = 1; n <= t.iterations_used; ++n)
    REQUIRE(t.step(n) == distance(t.points[n], t.points[n - 1], cfg.norm));
}

TEST_CASE("error budget of the averaged flip orbit has zero violations") {
  IterationConfig cfg;
  cfg.lambda = lambda_from_k(2.0 / 3.0);
  cfg.x0 = Point{0.0};
  cfg.max_iter = 60;
  cfg.stop = StopRule::max_iter_only();
  const IterationTrace trace = krasnoselskij(flip(), cfg);
  const ErrorBudget budget = verify_error_budget(trace, 0.25, Point{0.5}, 5, kNorm);
  CHECK(budget.delta == Catch::Approx(1.0 / 3.0).margin(1e-16));
  CHECK(budget.total_violations() == 0);
  // n = 1 bounds: delta/(1-delta)*step(1) with step(1) = 0.6
  CHECK(budget.a_priori[0] == Catch::Approx(0.3).margin(1e-12));
  CHECK(budget.a_posteriori[0] == Catch::Approx(0.3).margin(1e-12));
}

TEST_CASE("unified bounds subsume the a priori and a posteriori bounds") {
  IterationConfig cfg;
  cfg.lambda = 0.6;
  cfg.x0 = Point{0.05};
  cfg.max_iter = 40;
  cfg.stop = StopRule::max_iter_only();
  const IterationTrace trace = krasnoselskij(flip(), cfg);
  const ErrorBudget b = verify_error_budget(trace, 0.25, Point{0.5}, 6, kNorm);
  const std::size_t N = trace.iterations_used;
  for (std::size_t n = 1; n <= N; ++n)
    REQUIRE(b.unified[0][n - 1] == b.a_posteriori[n - 1]);  // i = 1
  for (std::size_t i = 1; i <= 6; ++i)
    REQUIRE(b.unified[i - 1][0] == b.a_priori[i - 1]);  // n = 1 chain
}

TEST_CASE("step contraction holds from grid starts under certified constants") {
  struct Case {
    const char* name;
    double k;
  };
  for (const Case& c : {Case{"flip", 2.0 / 3.0}, Case{"affine(0.3)", 0.0}}) {
    const MappingSpec T = MappingSpec::builtin(c.name);
    const auto cert =
        certify(ConditionKind::EnrichedChatterjea, T, PairSampler{1, 100, 101, true}, kNorm,
                std::nullopt, c.k);
    REQUIRE(cert.verdict == Verdict::FeasibleAt);
    const double delta = delta_from_b(cert.params->constant());
    for (const Point& x0 : grid_points(T.domain(), 9)) {
      IterationConfig cfg;
      cfg.lambda = lambda_from_k(c.k);
      cfg.x0 = x0;
      cfg.max_iter = 40;
      cfg.stop = StopRule::max_iter_only();
      const IterationTrace t = krasnoselskij(T, cfg);
      for (std::size_t n = 1; n < t.iterations_used; ++n) {
        INFO(c.name << " from " << x0[0] << " at n=" << n);
        REQUIRE(t.step(n + 1) <= delta * t.step(n) + 1e-12);
      }
    }
  }
}

TEST_CASE("a Picard trace of the flip map violates the step ratio") {
  IterationConfig cfg;
  cfg.lambda = 1.0;
  cfg.x0 = Point{0.0};
  cfg.max_iter = 20;
  cfg.stop = StopRule::max_iter_only();
  const IterationTrace trace = krasnoselskij(flip(), cfg);
  const ErrorBudget budget = verify_error_budget(trace, 0.25, Point{0.5}, 3, kNorm);
  CHECK_FALSE(budget.ratio_violations.empty());
  // dist to p stays at 0.5 while the a priori bound 1.5*(1/3)^n decays past it
  CHECK_FALSE(budget.a_priori_violations.empty());
}

TEST_CASE("degenerate traces are vacuously clean") {
  IterationConfig cfg;
  cfg.lambda = 0.6;
  cfg.x0 = Point{0.5};  // start at the fixed point
  cfg.stop = StopRule::a_posteriori(1.0 / 3.0);
  const IterationTrace trace = krasnoselskij(flip(), cfg);
  CHECK(trace.converged);
  CHECK(trace.iterations_used == 1);
  const ErrorBudget budget = verify_error_budget(trace, 0.25, Point{0.5}, 5, kNorm);
  CHECK(budget.total_violations() == 0);

  IterationTrace empty;
  CHECK_THROWS_AS(verify_error_budget(empty, 0.25, Point{0.5}, 5, kNorm), std::invalid_argument);
}

TEST_CASE("solve: averaged flip with certified constants") {
  const SolveResult res = solve(flip(), flip_cert(2.0 / 3.0, 0.25), Point{0.0}, 1e-10);
  CHECK(std::abs(res.p[0] - 0.5) <= 1e-10);
  CHECK(res.trace.iterations_used <= 30);
  CHECK(res.lambda == Catch::Approx(0.6).margin(1e-15));
  REQUIRE(res.budget.has_value());
  CHECK(res.budget->total_violations() == 0);

  // fixed-point residual at the returned approximation
  const double delta = delta_from_b(0.25);
  const double residual = distance(res.p, evaluate(flip(), res.p), kNorm);
  CHECK(residual <= 1e-10 * (1.0 + 1.0 / (1.0 - delta)));
}

TEST_CASE("solve: k = 1 averages the flip map to a constant") {
  const SolveResult res = solve(flip(), flip_cert(1.0, 0.0), Point{0.13}, 1e-10);
  CHECK(res.lambda == 0.5);
  CHECK(res.p == Point{0.5});
  CHECK(res.trace.iterations_used == 1);
}

TEST_CASE("solve: type certificate drives the step map by plain Picard") {
  const auto cert = certify(ConditionKind::EnrichedChatterjeaType, step(), kSampler, kNorm,
                            ConditionParams::enriched_chatterjea_type(0.0, 0.5));
  REQUIRE(cert.verdict == Verdict::Feasible);
  const SolveResult res = solve(step(), cert, Point{1.0}, 1e-12);
  CHECK(res.p == Point{0.0});
  CHECK(res.trace.iterations_used <= 3);
  CHECK_FALSE(res.budget.has_value());  // no error estimate on the type path
}

TEST_CASE("solve: forcing lambda = 1 on the flip map diverges with a diagnostic") {
  try {
    solve(flip(), flip_cert(2.0 / 3.0, 0.25), Point{0.0}, 1e-10, 10000, kNorm, 1.0);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.trace.iterations_used >= 50);
    CHECK_FALSE(e.trace.converged);
    CHECK(std::string(e.what()).find("did not decrease") != std::string::npos);
  }
}

TEST_CASE("solve rejects infeasible certificates") {
  const auto bad = certify(ConditionKind::EnrichedChatterjea, flip(), kSampler, kNorm,
                           ConditionParams::enriched_chatterjea(4.0 / 9.0, 0.25));
  REQUIRE(bad.verdict == Verdict::Infeasible);
  CHECK_THROWS_AS(solve(flip(), bad, Point{0.0}, 1e-10), std::invalid_argument);
}

TEST_CASE("solve uses a reference run when no fixed point is known") {
  // same contraction as affine(0.25) but centered at 0.4: p = 0.4 is not in
  // the catalog, so the budget must be checked against a reference orbit
  const MappingSpec T =
      MappingSpec::expression("0.25 * x + 0.3", BoxDomain::unit_interval());
  const auto cert = certify(ConditionKind::EnrichedChatterjea, T, kSampler, kNorm,
                            ConditionParams::enriched_chatterjea(0.0, 1.0 / 3.0));
  REQUIRE(cert.verdict == Verdict::Feasible);
  const SolveResult res = solve(T, cert, Point{0.0}, 1e-9);
  CHECK(std::abs(res.p[0] - 0.4) <= 1e-9);
  REQUIRE(res.reference_p.has_value());
  CHECK(std::abs((*res.reference_p)[0] - 0.4) <= 1e-9);
  REQUIRE(res.budget.has_value());
  CHECK(res.budget->total_violations() == 0);
}

TEST_CASE("uniqueness probe") {
  std::vector<Point> flip_limits;
  for (double x0 : {0.0, 0.3, 1.0})
    flip_limits.push_back(solve(flip(), flip_cert(2.0 / 3.0, 0.25), Point{x0}, 1e-10).p);
  const UniquenessVerdict v1 = uniqueness_probe(flip_limits, 1e-10, kNorm);
  CHECK(v1.consistent);
  CHECK(std::abs((*v1.limit)[0] - 0.5) <= 1e-9);

  const auto type_cert = certify(ConditionKind::EnrichedChatterjeaType, step(), kSampler, kNorm,
                                 ConditionParams::enriched_chatterjea_type(0.0, 0.5));
  std::vector<Point> step_limits;
  for (double x0 : {0.0, 0.99, 1.0})
    step_limits.push_back(solve(step(), type_cert, Point{x0}, 1e-12).p);
  const UniquenessVerdict v2 = uniqueness_probe(step_limits, 1e-12, kNorm);
  CHECK(v2.consistent);
  CHECK(*v2.limit == Point{0.0});

  // negative control: every point of the identity map is fixed
  const MappingSpec identity = MappingSpec::builtin("affine(1)");
  std::vector<Point> id_limits;
  for (double x0 : {0.0, 0.3, 1.0}) {
    IterationConfig cfg;
    cfg.lambda = 0.5;
    cfg.x0 = Point{x0};
    cfg.epsilon = 1e-9;
    cfg.stop = StopRule::step_norm();
    id_limits.push_back(krasnoselskij(identity, cfg).final());
  }
  const UniquenessVerdict v3 = uniqueness_probe(id_limits, 1e-9, kNorm);
  CHECK_FALSE(v3.consistent);
  REQUIRE(v3.divergent_pair.has_value());
}
