// Acceptance suite: runs every top-level guarantee end to end and prints one
// pass/fail line per criterion. Exit code is the number of failures.
//
// Criterion 10 additionally round-trips through the installed CLI binary when
// FIXPOINT_CLI points at it (the ctest registration sets it).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fixpoint/cli.hpp"
#include "fixpoint/demo.hpp"

using namespace fixpoint;
namespace fs = std::filesystem;

namespace {

struct Checker {
  int failures = 0;
  int index = 0;

  void criterion(const std::string& name, bool ok, const std::string& detail = "") {
    ++index;
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << index << ": " << name;
    if (!ok && !detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << "\n";
    if (!ok) ++failures;
  }
};

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const MappingSpec& flip() {
  static const MappingSpec m = MappingSpec::builtin("flip");
  return m;
}
const MappingSpec& step() {
  static const MappingSpec m = MappingSpec::builtin("step_half");
  return m;
}

constexpr NormKind kNorm = NormKind::L2;

// independent brute-force oracle for the minimal enriched constant of the
// flip map at a given k (reduced algebra of Tx = 1-x, dense pair grid)
double oracle_flip_bmin(double k, std::size_t n) {
  double sup = 0;
  bool hard = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double x = static_cast<double>(i) / static_cast<double>(n - 1);
      const double y = static_cast<double>(j) / static_cast<double>(n - 1);
      const double lhs = std::abs(k - 1.0) * std::abs(x - y);
      const double den = std::abs((k + 1.0) * x - (k - 1.0) * y - 1.0) +
                         std::abs((k + 1.0) * y - (k - 1.0) * x - 1.0);
      if (den < 1e-15) {
        if (lhs >= 1e-15) hard = true;
      } else {
        sup = std::max(sup, lhs / den);
      }
    }
  }
  return hard ? std::numeric_limits<double>::infinity() : sup;
}

void c1_picard_divergence(Checker& ck) {
  IterationConfig cfg;
  cfg.lambda = 1.0;
  cfg.x0 = Point{0.0};
  cfg.max_iter = 100;
  cfg.stop = StopRule::max_iter_only();
  krasnoselskij(flip(), cfg);  // warm-up
  const auto t0 = std::chrono::steady_clock::now();
  const IterationTrace trace = krasnoselskij(flip(), cfg);
  const auto t1 = std::chrono::steady_clock::now();
  const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  bool exact = !trace.converged && trace.points.size() == 101;
  for (const Point& x : trace.points) exact = exact && std::abs(x[0] - 0.5) == 0.5;
  ck.criterion("Picard divergence of the flip map (exact oscillation, < 1 ms)",
               exact && ms < 1.0, "elapsed " + std::to_string(ms) + " ms");
}

void c2_krasnoselskij_convergence(Checker& ck) {
  const double lambda = lambda_from_k(2.0 / 3.0);
  IterationConfig cfg;
  cfg.lambda = lambda;
  cfg.x0 = Point{0.0};
  cfg.max_iter = 20;
  cfg.stop = StopRule::max_iter_only();
  const IterationTrace orbit = krasnoselskij(flip(), cfg);
  bool closed_form = true;
  for (std::size_t n = 0; n <= 20; ++n) {
    const double expected = 0.5 * std::pow(0.2, static_cast<double>(n));
    closed_form =
        closed_form && std::abs(std::abs(orbit.points[n][0] - 0.5) - expected) <= 1e-12;
  }

  cfg.max_iter = 1000;
  cfg.epsilon = 1e-10;
  cfg.stop = StopRule::a_posteriori(delta_from_b(0.25));
  const IterationTrace run = krasnoselskij(flip(), cfg);
  const bool fast = run.converged && run.iterations_used <= 16 &&
                    std::abs(run.final()[0] - 0.5) <= 1e-10;
  ck.criterion("Krasnoselskij convergence at lambda = 0.6 (|x_n - 1/2| = 0.5*0.2^n, 1e-10 in <= 16 iters)",
               closed_form && fast,
               "iterations " + std::to_string(run.iterations_used));
}

void c3_error_budget(Checker& ck) {
  IterationConfig cfg;
  cfg.lambda = lambda_from_k(2.0 / 3.0);
  cfg.x0 = Point{0.0};
  cfg.max_iter = 60;  // covers n <= 50 with i <= 5
  cfg.stop = StopRule::max_iter_only();
  const IterationTrace trace = krasnoselskij(flip(), cfg);
  const ErrorBudget budget = verify_error_budget(trace, 0.25, Point{0.5}, 5, kNorm);
  ck.criterion("error-estimate suite at b = 0.25 (ratio, a priori, a posteriori, unified; tol 1e-12)",
               budget.total_violations() == 0,
               std::to_string(budget.total_violations()) + " violations");
}

void c4_chatterjea_infeasibility(Checker& ck) {
  const PairSampler s{11, 200, 50, true};
  const CertificateReport rep = certify(ConditionKind::Chatterjea, flip(), s, kNorm);
  const bool ok = rep.verdict == Verdict::Infeasible && rep.witness &&
                  rep.witness->x == Point{0.0} && rep.witness->y == Point{1.0};

  const CertificateReport with_b = certify(ConditionKind::Chatterjea, flip(), s, kNorm,
                                           ConditionParams::chatterjea(0.4));
  const bool ok_b = with_b.verdict == Verdict::Infeasible && with_b.witness &&
                    with_b.witness->x == Point{0.0} && with_b.witness->y == Point{1.0};
  ck.criterion("Chatterjea infeasibility of the flip map with witness pair (0,1)", ok && ok_b);
}

void c5_kscan_oracle(Checker& ck) {
  const PairSampler s{13, 0, 200, true};  // the 200 x 200 pair grid
  bool ok = true;
  std::string detail;
  for (double k : {0.2, 0.5, 2.0 / 3.0, 1.0, 1.5, 2.0}) {
    const double oracle = oracle_flip_bmin(k, 200);
    const double closed_form = std::abs(1.0 - k) / (2.0 * k);
    const double estimate =
        certify(ConditionKind::EnrichedChatterjea, flip(), s, kNorm, std::nullopt, k)
            .min_constant;
    if (std::abs(oracle - closed_form) > 1e-6 || std::abs(estimate - closed_form) > 1e-6) {
      ok = false;
      detail = "mismatch at k = " + format_double(k);
    }
  }
  const double at_one =
      certify(ConditionKind::EnrichedChatterjea, flip(), s, kNorm, std::nullopt, 1.0).min_constant;
  const double at_claimed =
      certify(ConditionKind::EnrichedChatterjea, flip(), s, kNorm, std::nullopt, 4.0 / 9.0)
          .min_constant;
  ok = ok && at_one <= 1e-12 && std::abs(at_claimed - 0.625) <= 1e-6;

  std::ostringstream demo_out;
  cmd_demo(demo_out);
  const std::string text = demo_out.str();
  const bool surfaced = text.find("1/(b+2)") != std::string::npos &&
                        text.find("1/(1+2b)") != std::string::npos &&
                        text.find("0.625") != std::string::npos &&
                        text.find("[disagree]") != std::string::npos;
  ck.criterion("k-scan matches the brute-force oracle |1-k|/(2k); demo surfaces the k = 1/(b+2) discrepancy",
               ok && surfaced, detail);
}

void c6_step_constants(Checker& ck) {
  const PairSampler s{17, 200, 201, true};  // 201 per axis puts 1/2 in the grid
  const CertificateReport type_rep = certify(ConditionKind::ChatterjeaType, step(), s, kNorm);
  const bool type_ok = type_rep.verdict == Verdict::FeasibleAt &&
                       std::abs(type_rep.min_constant - 0.5) <= 1e-6;
  const CertificateReport chat_rep = certify(ConditionKind::Chatterjea, step(), s, kNorm);
  const bool chat_ok = chat_rep.verdict == Verdict::Infeasible && chat_rep.min_constant >= 0.5 &&
                       chat_rep.witness && chat_rep.witness->x == Point{0.5} &&
                       chat_rep.witness->y == Point{1.0};
  ck.criterion("step map constants: Chatterjea-type h_min = 0.5, Chatterjea infeasible at (1/2, 1)",
               type_ok && chat_ok);
}

void c7_implication_margins(Checker& ck) {
  const PairSampler s{19, 200, 51, true};
  const MappingSpec banach_witness = MappingSpec::builtin("affine(0.25)");
  const MappingSpec kannan_witness = MappingSpec::builtin("affine(0.16666666666666666)");

  const ConditionParams derived =
      derive_implied(ConditionParams::banach(0.25), ConditionKind::Chatterjea);
  bool ok = std::abs(derived.constant() - 1.0 / 3.0) <= 1e-15;
  ok = ok && implication_margin(ConditionParams::banach(0.25), ConditionKind::Chatterjea,
                                banach_witness, s, kNorm) >= -1e-12;
  const ConditionParams derived_k =
      derive_implied(ConditionParams::kannan(0.2), ConditionKind::Chatterjea);
  ok = ok && std::abs(derived_k.constant() - 1.0 / 3.0) <= 1e-15;
  ok = ok && implication_margin(ConditionParams::kannan(0.2), ConditionKind::Chatterjea,
                                kannan_witness, s, kNorm) >= -1e-12;

  std::mt19937_64 rng(4242);
  const PairSampler sp{23, 64, 21, true};
  for (int rep = 0; rep < 100 && ok; ++rep) {
    const double c = (uniform01(rng) * 2.0 - 1.0) / 3.0 * 0.999;
    const double lo = std::max(0.0, -c) + 1e-9;
    const double hi = 1.0 - std::max(0.0, c) - 1e-9;
    const double t = lo + (hi - lo) * uniform01(rng);
    const MappingSpec T = MappingSpec::affine({{c}}, Point{t}, BoxDomain::unit_interval());
    ok = implication_margin(ConditionParams::banach(std::abs(c)), ConditionKind::Chatterjea, T,
                            sp, kNorm) >= -1e-12;
  }
  ck.criterion("implication margins: Banach(1/4) and Kannan(0.2) to Chatterjea(1/3); 100 random affine maps",
               ok);
}

void c8_reduction_identity(Checker& ck) {
  std::mt19937_64 rng(808);
  const char* names[] = {"flip", "step_half", "affine(0.3)"};
  double worst = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const MappingSpec T = MappingSpec::builtin(names[rng() % 3]);
    const double lambda = 0.05 + 0.9 * uniform01(rng);
    const Point x = random_point(rng, T.domain());
    const Point y = random_point(rng, T.domain());
    worst = std::max(worst, enriched_reduction_residual(T, lambda, x, y, kNorm));
  }
  ck.criterion("reduction identity residual <= 1e-12 over 1000 seeded draws", worst <= 1e-12,
               "worst " + format_double(worst));
}

void c9_uniqueness(Checker& ck) {
  const PairSampler s{29, 100, 51, true};
  const auto cert = certify(ConditionKind::EnrichedChatterjea, flip(), s, kNorm,
                            ConditionParams::enriched_chatterjea(2.0 / 3.0, 0.25));
  std::vector<Point> flip_limits;
  for (double x0 : {0.0, 0.3, 1.0}) flip_limits.push_back(solve(flip(), cert, Point{x0}, 1e-10).p);
  double flip_spread = 0;
  for (std::size_t i = 0; i < flip_limits.size(); ++i)
    for (std::size_t j = i + 1; j < flip_limits.size(); ++j)
      flip_spread = std::max(flip_spread, distance(flip_limits[i], flip_limits[j], kNorm));

  const auto type_cert = certify(ConditionKind::EnrichedChatterjeaType, step(),
                                 PairSampler{29, 100, 201, true}, kNorm,
                                 ConditionParams::enriched_chatterjea_type(0.0, 0.5));
  std::vector<Point> step_limits;
  for (double x0 : {0.0, 0.99, 1.0})
    step_limits.push_back(solve(step(), type_cert, Point{x0}, 1e-12).p);
  double step_spread = 0;
  for (std::size_t i = 0; i < step_limits.size(); ++i)
    for (std::size_t j = i + 1; j < step_limits.size(); ++j)
      step_spread = std::max(step_spread, distance(step_limits[i], step_limits[j], kNorm));

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
  const UniquenessVerdict control = uniqueness_probe(id_limits, 1e-9, kNorm);

  ck.criterion("uniqueness probe: flip and step limits agree within 1e-9; identity control diverges",
               flip_spread <= 1e-9 && step_spread <= 1e-9 && !control.consistent &&
                   control.divergent_pair.has_value(),
               "spreads " + format_double(flip_spread) + ", " + format_double(step_spread));
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

void c10_determinism(Checker& ck) {
  const fs::path dir = fs::temp_directory_path() / "fixpoint_acceptance";
  fs::create_directories(dir);
  const fs::path cert_json = dir / "cert.json";
  const fs::path solve_json = dir / "solve.json";
  const fs::path solve_csv = dir / "solve.csv";

  bool ok = true;
  std::string detail;
  std::ostringstream sink;

  {  // library level
    CliOptions opts;
    opts.command = "certify";
    opts.mapping = "flip";
    opts.kind = "chatterjea";
    opts.params = "b=0.4";
    opts.seed = 31;
    opts.out_json = cert_json.string();
    cmd_certify(resolve_config(opts), sink);
    const std::string first = read_file(cert_json);
    cmd_certify(resolve_config(opts), sink);
    ok = ok && first == read_file(cert_json) && !first.empty();

    CliOptions sv;
    sv.command = "solve";
    sv.mapping = "flip";
    sv.kind = "enriched-chatterjea";
    sv.params = "k=0.6666666666666666,b=0.25";
    sv.x0 = "0";
    sv.seed = 31;
    sv.out_json = solve_json.string();
    sv.out_csv = solve_csv.string();
    cmd_solve(resolve_config(sv), sink);
    const std::string sj = read_file(solve_json), sc = read_file(solve_csv);
    cmd_solve(resolve_config(sv), sink);
    ok = ok && sj == read_file(solve_json) && sc == read_file(solve_csv) && !sj.empty();
    if (!ok) detail = "library-level reports differ";
  }

  if (const char* cli = std::getenv("FIXPOINT_CLI")) {  // binary level
    const std::string cert_args = "certify --mapping flip --kind chatterjea --params b=0.4 "
                                  "--seed 31 --out-json \"" +
                                  cert_json.string() + "\"";
    bool bin_ok = run_cli(cli, cert_args) != -1;
    const std::string first = read_file(cert_json);
    bin_ok = bin_ok && run_cli(cli, cert_args) != -1;
    bin_ok = bin_ok && first == read_file(cert_json) && !first.empty();

    const std::string solve_args =
        "solve --mapping flip --kind enriched-chatterjea --params k=0.6666666666666666,b=0.25 "
        "--x0 0 --seed 31 --out-json \"" +
        solve_json.string() + "\" --out-csv \"" + solve_csv.string() + "\"";
    bin_ok = bin_ok && run_cli(cli, solve_args) != -1;
    const std::string sj = read_file(solve_json);
    bin_ok = bin_ok && run_cli(cli, solve_args) != -1;
    bin_ok = bin_ok && sj == read_file(solve_json) && !sj.empty();
    if (!bin_ok) detail = "binary-level reports differ";
    ok = ok && bin_ok;
  } else {
    detail = "FIXPOINT_CLI not set; binary round-trip skipped";
  }
  ck.criterion("determinism: certify and solve reports byte-identical across reruns", ok, detail);
}

}  // namespace

int main() {
  Checker ck;
  c1_picard_divergence(ck);
  c2_krasnoselskij_convergence(ck);
  c3_error_budget(ck);
  c4_chatterjea_infeasibility(ck);
  c5_kscan_oracle(ck);
  c6_step_constants(ck);
  c7_implication_margins(ck);
  c8_reduction_identity(ck);
  c9_uniqueness(ck);
  c10_determinism(ck);
  std::cout << (ck.failures == 0 ? "all criteria passed" : "FAILURES: " + std::to_string(ck.failures))
            << "\n";
  return ck.failures;
}
