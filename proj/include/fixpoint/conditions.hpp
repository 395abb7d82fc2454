#pragma once

// Contractive-condition catalog and a sampling-based certifier.
//
// The catalog covers the six-displacement family (Banach, Kannan,
// Chatterjea, Chatterjea-type, Ciric max-of-five, Zamfirescu) and the
// enriched Chatterjea / enriched Chatterjea-type conditions on the
// combinations k(x-y)+Tx-Ty, (k+1)(x-y)+y-Ty, (k+1)(y-x)+x-Tx.
//
// certify() falsifies a condition over a deterministic pair sample or
// estimates the minimal admissible constant as a sup of ratios; a sup over
// a finite sample is always a lower bound on the true minimal constant.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fixpoint/golden_section.hpp"
#include "fixpoint/mapping.hpp"
#include "fixpoint/sampling.hpp"
#include "fixpoint/space.hpp"

namespace fixpoint {

enum class ConditionKind {
  Banach,
  Kannan,
  Chatterjea,
  ChatterjeaType,
  CiricMax5,
  Zamfirescu,
  EnrichedChatterjea,
  EnrichedChatterjeaType,
};

inline const char* to_string(ConditionKind k) {
  switch (k) {
    case ConditionKind::Banach: return "banach";
    case ConditionKind::Kannan: return "kannan";
    case ConditionKind::Chatterjea: return "chatterjea";
    case ConditionKind::ChatterjeaType: return "chatterjea-type";
    case ConditionKind::CiricMax5: return "ciric-max5";
    case ConditionKind::Zamfirescu: return "zamfirescu";
    case ConditionKind::EnrichedChatterjea: return "enriched-chatterjea";
    case ConditionKind::EnrichedChatterjeaType: return "enriched-chatterjea-type";
  }
  return "?";
}

inline ConditionKind condition_kind_from_string(const std::string& s) {
  for (ConditionKind k :
       {ConditionKind::Banach, ConditionKind::Kannan, ConditionKind::Chatterjea,
        ConditionKind::ChatterjeaType, ConditionKind::CiricMax5, ConditionKind::Zamfirescu,
        ConditionKind::EnrichedChatterjea, ConditionKind::EnrichedChatterjeaType})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown condition kind '" + s + "'");
}

inline bool is_enriched(ConditionKind k) {
  return k == ConditionKind::EnrichedChatterjea || k == ConditionKind::EnrichedChatterjeaType;
}

// Supremum of the admissible constant range (exclusive): estimates at or
// above this bound mean the condition class is infeasible.
inline double class_bound(ConditionKind k) {
  switch (k) {
    case ConditionKind::Banach:
    case ConditionKind::ChatterjeaType:
    case ConditionKind::CiricMax5:
    case ConditionKind::EnrichedChatterjeaType: return 1.0;
    case ConditionKind::Kannan:
    case ConditionKind::Chatterjea:
    case ConditionKind::EnrichedChatterjea: return 0.5;
    case ConditionKind::Zamfirescu:
      throw std::invalid_argument("class_bound: zamfirescu has three constants");
  }
  return 0;
}

// Validated constants for one condition. Ranges:
//   c in [0,1) | a in [0,1/2) | b in [0,1/2) | h in [0,1)
//   zamfirescu: a in [0,1), b,c in [0,1/2)
//   enriched:   k in [0,inf) plus b in [0,1/2) or h in [0,1)
class ConditionParams {
 public:
  static ConditionParams banach(double c) {
    return ConditionParams(ConditionKind::Banach, checked(c, 1.0, "c"));
  }
  static ConditionParams kannan(double a) {
    return ConditionParams(ConditionKind::Kannan, checked(a, 0.5, "a"));
  }
  static ConditionParams chatterjea(double b) {
    return ConditionParams(ConditionKind::Chatterjea, checked(b, 0.5, "b"));
  }
  static ConditionParams chatterjea_type(double h) {
    return ConditionParams(ConditionKind::ChatterjeaType, checked(h, 1.0, "h"));
  }
  static ConditionParams ciric_max5(double h) {
    return ConditionParams(ConditionKind::CiricMax5, checked(h, 1.0, "h"));
  }
  static ConditionParams zamfirescu(double a, double b, double c) {
    return ConditionParams(ConditionKind::Zamfirescu, checked(a, 1.0, "a"), checked(b, 0.5, "b"),
                           checked(c, 0.5, "c"));
  }
  static ConditionParams enriched_chatterjea(double k, double b) {
    return ConditionParams(ConditionKind::EnrichedChatterjea, checked(b, 0.5, "b"), checked_k(k));
  }
  static ConditionParams enriched_chatterjea_type(double k, double h) {
    return ConditionParams(ConditionKind::EnrichedChatterjeaType, checked(h, 1.0, "h"),
                           checked_k(k));
  }

  // The single contraction constant estimated by certify (b or h for the
  // enriched kinds). Not defined for zamfirescu.
  static ConditionParams with_constant(ConditionKind kind, double constant, double k = 0.0) {
    switch (kind) {
      case ConditionKind::Banach: return banach(constant);
      case ConditionKind::Kannan: return kannan(constant);
      case ConditionKind::Chatterjea: return chatterjea(constant);
      case ConditionKind::ChatterjeaType: return chatterjea_type(constant);
      case ConditionKind::CiricMax5: return ciric_max5(constant);
      case ConditionKind::EnrichedChatterjea: return enriched_chatterjea(k, constant);
      case ConditionKind::EnrichedChatterjeaType: return enriched_chatterjea_type(k, constant);
      case ConditionKind::Zamfirescu: break;
    }
    throw std::invalid_argument("with_constant: zamfirescu has three constants");
  }

  ConditionKind kind() const { return kind_; }

  double constant() const {
    if (kind_ == ConditionKind::Zamfirescu)
      throw std::invalid_argument("constant(): zamfirescu has three constants");
    return v0_;
  }
  double enriched_k() const {
    if (!is_enriched(kind_)) throw std::invalid_argument("enriched_k(): not an enriched kind");
    return v1_;
  }
  double zamfirescu_a() const { return require_z(), v0_; }
  double zamfirescu_b() const { return require_z(), v1_; }
  double zamfirescu_c() const { return require_z(), v2_; }

  nlohmann::json to_json() const {
    switch (kind_) {
      case ConditionKind::Banach: return {{"c", v0_}};
      case ConditionKind::Kannan: return {{"a", v0_}};
      case ConditionKind::Chatterjea: return {{"b", v0_}};
      case ConditionKind::ChatterjeaType:
      case ConditionKind::CiricMax5: return {{"h", v0_}};
      case ConditionKind::Zamfirescu: return {{"a", v0_}, {"b", v1_}, {"c", v2_}};
      case ConditionKind::EnrichedChatterjea: return {{"k", v1_}, {"b", v0_}};
      case ConditionKind::EnrichedChatterjeaType: return {{"k", v1_}, {"h", v0_}};
    }
    return {};
  }

  static ConditionParams from_json(ConditionKind kind, const nlohmann::json& j) {
    const auto get = [&j](const char* key) {
      if (!j.contains(key))
        throw std::invalid_argument(std::string("params: missing constant '") + key + "'");
      return j.at(key).get<double>();
    };
    switch (kind) {
      case ConditionKind::Banach: return banach(get("c"));
      case ConditionKind::Kannan: return kannan(get("a"));
      case ConditionKind::Chatterjea: return chatterjea(get("b"));
      case ConditionKind::ChatterjeaType: return chatterjea_type(get("h"));
      case ConditionKind::CiricMax5: return ciric_max5(get("h"));
      case ConditionKind::Zamfirescu: return zamfirescu(get("a"), get("b"), get("c"));
      case ConditionKind::EnrichedChatterjea: return enriched_chatterjea(get("k"), get("b"));
      case ConditionKind::EnrichedChatterjeaType:
        return enriched_chatterjea_type(get("k"), get("h"));
    }
    throw std::invalid_argument("params: bad kind");
  }

 private:
  ConditionParams(ConditionKind kind, double v0, double v1 = 0, double v2 = 0)
      : kind_(kind), v0_(v0), v1_(v1), v2_(v2) {}

  static double checked(double v, double sup, const char* name) {
    if (!(v >= 0.0) || !(v < sup))
      throw std::invalid_argument(std::string("params: ") + name + " must lie in [0," +
                                  format_double(sup) + "), got " + format_double(v));
    return v;
  }
  static double checked_k(double k) {
    if (!(k >= 0.0) || !std::isfinite(k))
      throw std::invalid_argument("params: k must lie in [0,inf), got " + format_double(k));
    return k;
  }
  void require_z() const {
    if (kind_ != ConditionKind::Zamfirescu)
      throw std::invalid_argument("zamfirescu accessor on non-zamfirescu params");
  }

  ConditionKind kind_;
  double v0_, v1_, v2_;
};

// The six displacements of a pair (x,y) under T.
struct DisplacementTuple {
  double d_TxTy, d_xy, d_xTx, d_yTy, d_xTy, d_yTx;
};

inline DisplacementTuple displacements_from_images(const Point& x, const Point& y, const Point& Tx,
                                                   const Point& Ty, NormKind norm) {
  return DisplacementTuple{distance(Tx, Ty, norm), distance(x, y, norm), distance(x, Tx, norm),
                           distance(y, Ty, norm),  distance(x, Ty, norm), distance(y, Tx, norm)};
}

inline DisplacementTuple displacements(const MappingSpec& T, const Point& x, const Point& y,
                                       NormKind norm) {
  return displacements_from_images(x, y, evaluate(T, x), evaluate(T, y), norm);
}

namespace detail {

// ||k(x-y)+Tx-Ty||, ||(k+1)(x-y)+y-Ty||, ||(k+1)(y-x)+x-Tx||
struct EnrichedTerms {
  double lhs, e1, e2;
};

inline EnrichedTerms enriched_terms(const Point& x, const Point& y, const Point& Tx,
                                    const Point& Ty, double k, NormKind norm) {
  const std::size_t d = x.dim();
  std::vector<double> a(d), b1(d), b2(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double dx = x[i] - y[i];
    a[i] = k * dx + (Tx[i] - Ty[i]);
    b1[i] = (k + 1.0) * dx + (y[i] - Ty[i]);
    b2[i] = -(k + 1.0) * dx + (x[i] - Tx[i]);
  }
  return {norm_of(Point(std::move(a)), norm), norm_of(Point(std::move(b1)), norm),
          norm_of(Point(std::move(b2)), norm)};
}

// lhs and the constant-free denominator of one condition at one pair.
inline std::pair<double, double> lhs_denominator(ConditionKind kind, double k,
                                                 const DisplacementTuple& t,
                                                 const EnrichedTerms* et) {
  switch (kind) {
    case ConditionKind::Banach: return {t.d_TxTy, t.d_xy};
    case ConditionKind::Kannan: return {t.d_TxTy, t.d_xTx + t.d_yTy};
    case ConditionKind::Chatterjea: return {t.d_TxTy, t.d_xTy + t.d_yTx};
    case ConditionKind::ChatterjeaType: return {t.d_TxTy, std::max(t.d_xTy, t.d_yTx)};
    case ConditionKind::CiricMax5:
      return {t.d_TxTy,
              std::max({t.d_xy, t.d_xTx, t.d_yTy, t.d_xTy, t.d_yTx})};
    case ConditionKind::EnrichedChatterjea: return {et->lhs, et->e1 + et->e2};
    case ConditionKind::EnrichedChatterjeaType: return {et->lhs, std::max(et->e1, et->e2)};
    case ConditionKind::Zamfirescu: break;
  }
  (void)k;
  throw std::invalid_argument("lhs_denominator: zamfirescu has no single denominator");
}

}  // namespace detail

// Left and full right side of a condition at one pair. For zamfirescu the
// right side is the max of the three clause bounds (the pair passes iff
// lhs <= at least one clause bound).
inline std::pair<double, double> lhs_rhs(const ConditionParams& params, const MappingSpec& T,
                                         const Point& x, const Point& y, NormKind norm) {
  const Point Tx = evaluate(T, x), Ty = evaluate(T, y);
  if (params.kind() == ConditionKind::Zamfirescu) {
    const DisplacementTuple t = displacements_from_images(x, y, Tx, Ty, norm);
    const double z1 = params.zamfirescu_a() * t.d_xy;
    const double z2 = params.zamfirescu_b() * (t.d_xTx + t.d_yTy);
    const double z3 = params.zamfirescu_c() * (t.d_xTy + t.d_yTx);
    return {t.d_TxTy, std::max({z1, z2, z3})};
  }
  if (is_enriched(params.kind())) {
    const auto et = detail::enriched_terms(x, y, Tx, Ty, params.enriched_k(), norm);
    const auto [lhs, den] = detail::lhs_denominator(params.kind(), params.enriched_k(),
                                                    DisplacementTuple{}, &et);
    return {lhs, params.constant() * den};
  }
  const DisplacementTuple t = displacements_from_images(x, y, Tx, Ty, norm);
  const auto [lhs, den] = detail::lhs_denominator(params.kind(), 0.0, t, nullptr);
  return {lhs, params.constant() * den};
}

// Deterministic pair sample over a box: all unordered pairs of a per-axis
// grid (corner pairs always present for grid_per_axis >= 2) plus seeded
// uniform random pairs. Same seed and counts give the same sequence.
struct PairSampler {
  std::uint64_t seed = 0;
  std::size_t n_random = 0;
  std::size_t grid_per_axis = 0;
  bool exclude_diagonal = true;
};

struct SampleSet {
  std::vector<Point> points;                         // grid points then random points
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // indices into points
  std::size_t n_grid_points = 0;
};

inline SampleSet build_sample_set(const PairSampler& s, const BoxDomain& box) {
  SampleSet set;
  set.points = grid_points(box, s.grid_per_axis);
  set.n_grid_points = set.points.size();
  const std::size_t g = set.n_grid_points;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = s.exclude_diagonal ? i + 1 : i; j < g; ++j) {
      if (i == j && s.exclude_diagonal) continue;
      set.pairs.emplace_back(i, j);
    }
  }
  std::mt19937_64 rng(s.seed);
  for (std::size_t t = 0; t < s.n_random; ++t) {
    set.points.push_back(random_point(rng, box));
    set.points.push_back(random_point(rng, box));
    set.pairs.emplace_back(set.points.size() - 2, set.points.size() - 1);
  }
  return set;
}

enum class Verdict { Feasible, Infeasible, FeasibleAt };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return "feasible";
    case Verdict::Infeasible: return "infeasible";
    case Verdict::FeasibleAt: return "feasible-at";
  }
  return "?";
}

struct PairWitness {
  Point x, y;
  double lhs = 0, rhs = 0;
};

struct CertificateReport {
  ConditionKind kind;
  Verdict verdict = Verdict::Feasible;
  // sup over sampled pairs of lhs/denominator (a lower bound on the true
  // minimal constant); +inf when some pair has lhs > 0 with denominator 0;
  // NaN for zamfirescu, which has no single free constant.
  double min_constant = 0;
  std::optional<ConditionParams> params;  // given, or carrying the estimate
  std::optional<PairWitness> witness;     // argmax pair (violation or ratio)
  std::size_t pairs_checked = 0;
  double margin = 0;  // params mode: min(rhs-lhs); estimate mode: bound-estimate
  PairSampler sampler;
  NormKind norm = NormKind::L2;
};

// Slack on lhs <= rhs comparisons (float noise on exact-equality examples).
inline constexpr double kFeasibilitySlack = 1e-12;
// Below this, a denominator counts as zero in ratio estimation.
inline constexpr double kZeroDenominator = 1e-15;

// Falsify (params given) or estimate the minimal constant (params omitted)
// of a condition over the sampled pairs. Estimating an enriched kind needs
// the structural constant k, passed as enriched_k. Throws
// std::invalid_argument if T fails the self-map check on the sample points.
inline CertificateReport certify(ConditionKind kind, const MappingSpec& T, const PairSampler& s,
                                 NormKind norm,
                                 std::optional<ConditionParams> params = std::nullopt,
                                 std::optional<double> enriched_k = std::nullopt) {
  if (params && params->kind() != kind)
    throw std::invalid_argument("certify: params kind does not match condition kind");
  if (!params && kind == ConditionKind::Zamfirescu)
    throw std::invalid_argument("certify: zamfirescu needs explicit (a,b,c) constants");
  if (!params && is_enriched(kind) && !enriched_k)
    throw std::invalid_argument("certify: estimating an enriched kind needs k");
  if (enriched_k && !is_enriched(kind))
    throw std::invalid_argument("certify: k given for a non-enriched kind");
  if (enriched_k && !(*enriched_k >= 0.0))
    throw std::invalid_argument("certify: k must be nonnegative");

  const double k = params && is_enriched(kind) ? params->enriched_k()
                   : enriched_k               ? *enriched_k
                                              : 0.0;
  const BoxDomain& box = T.domain();
  SampleSet set = build_sample_set(s, box);

  // self-map precondition: every sample point must map back into the box
  std::vector<Point> images;
  images.reserve(set.points.size());
  for (const Point& p : set.points) {
    Point img = [&] {
      try {
        return evaluate(T, p);
      } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("certify: self-map check failed: ") + e.what());
      }
    }();
    if (!box.contains(img))
      throw std::invalid_argument(
          "certify: self-map check failed: image outside domain at sampled point");
    images.push_back(std::move(img));
  }

  CertificateReport rep;
  rep.kind = kind;
  rep.params = params;
  rep.sampler = s;
  rep.norm = norm;

  const bool estimate_mode = !params;
  double sup_ratio = 0;
  bool hard_infeasible = false;
  double max_violation = -std::numeric_limits<double>::infinity();
  double min_margin = std::numeric_limits<double>::infinity();
  // argmax reduction keyed (hard, value, lowest index) so the result does
  // not depend on evaluation order
  double best_key = -std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  bool best_hard = false;
  bool have_witness = false;
  double witness_lhs = 0, witness_den = 0, witness_rhs = 0;

  for (std::size_t pi = 0; pi < set.pairs.size(); ++pi) {
    const auto [ia, ib] = set.pairs[pi];
    const Point& x = set.points[ia];
    const Point& y = set.points[ib];
    if (s.exclude_diagonal && x == y) continue;
    ++rep.pairs_checked;

    const Point& Tx = images[ia];
    const Point& Ty = images[ib];

    double lhs = 0, den = 0, rhs = 0;
    if (kind == ConditionKind::Zamfirescu) {
      const DisplacementTuple t = displacements_from_images(x, y, Tx, Ty, norm);
      lhs = t.d_TxTy;
      rhs = std::max({params->zamfirescu_a() * t.d_xy,
                      params->zamfirescu_b() * (t.d_xTx + t.d_yTy),
                      params->zamfirescu_c() * (t.d_xTy + t.d_yTx)});
    } else if (is_enriched(kind)) {
      const auto et = detail::enriched_terms(x, y, Tx, Ty, k, norm);
      std::tie(lhs, den) = detail::lhs_denominator(kind, k, DisplacementTuple{}, &et);
    } else {
      const DisplacementTuple t = displacements_from_images(x, y, Tx, Ty, norm);
      std::tie(lhs, den) = detail::lhs_denominator(kind, 0.0, t, nullptr);
    }

    bool hard = false;
    double key = 0;
    if (kind != ConditionKind::Zamfirescu) {
      // sup-of-ratios bookkeeping; a 0/0 pair carries no constraint
      if (den < kZeroDenominator) {
        if (lhs >= kZeroDenominator) hard_infeasible = true;
      } else {
        sup_ratio = std::max(sup_ratio, lhs / den);
      }
      if (params) rhs = params->constant() * den;
    }
    if (params) {
      max_violation = std::max(max_violation, lhs - rhs);
      min_margin = std::min(min_margin, rhs - lhs);
      key = lhs - rhs;
    } else {
      if (den < kZeroDenominator) {
        if (lhs < kZeroDenominator) continue;
        hard = true;
        key = lhs;
      } else {
        key = lhs / den;
      }
    }

    const bool better =
        !have_witness || (hard && !best_hard) ||
        (hard == best_hard && (key > best_key || (key == best_key && pi < best_index)));
    if (better) {
      have_witness = true;
      best_key = key;
      best_index = pi;
      best_hard = hard;
      witness_lhs = lhs;
      witness_den = den;
      witness_rhs = rhs;
      rep.witness = PairWitness{x, y, lhs, rhs};
    }
  }

  if (kind == ConditionKind::Zamfirescu) {
    rep.min_constant = std::numeric_limits<double>::quiet_NaN();
  } else {
    rep.min_constant =
        hard_infeasible ? std::numeric_limits<double>::infinity() : sup_ratio;
  }

  if (estimate_mode) {
    const double bound = class_bound(kind);
    rep.margin = bound - rep.min_constant;
    if (rep.min_constant < bound) {
      rep.verdict = Verdict::FeasibleAt;
      rep.params = ConditionParams::with_constant(kind, rep.min_constant, k);
    } else {
      rep.verdict = Verdict::Infeasible;
    }
    if (rep.witness) {
      const double c = rep.verdict == Verdict::FeasibleAt ? rep.min_constant : bound;
      rep.witness->rhs = c * witness_den;
    }
  } else {
    rep.margin = min_margin;
    rep.verdict = max_violation > kFeasibilitySlack ? Verdict::Infeasible : Verdict::Feasible;
    if (rep.witness) {
      rep.witness->lhs = witness_lhs;
      rep.witness->rhs = witness_rhs;
    }
  }
  return rep;
}

inline CertificateReport zamfirescu_check(const MappingSpec& T, double a, double b, double c,
                                          const PairSampler& s, NormKind norm) {
  return certify(ConditionKind::Zamfirescu, T, s, norm, ConditionParams::zamfirescu(a, b, c));
}

struct FeasibilityEntry {
  double k = 0;
  double constant_min = 0;  // b_min(k) or h_min(k); +inf when hard-infeasible
  bool feasible = false;    // constant_min < class bound
};

struct FeasibilityCurve {
  ConditionKind kind;
  std::vector<FeasibilityEntry> entries;      // sorted by k
  FeasibilityEntry best;                      // grid argmin of constant_min
  std::optional<FeasibilityEntry> refined;    // golden-section pass around best
};

// Estimate the minimal enriched constant over a grid of k values and locate
// the best k. The grid result is authoritative; the golden-section pass is a
// best-effort refinement between the grid neighbors of the minimum.
inline FeasibilityCurve scan_k(ConditionKind kind, const MappingSpec& T,
                               std::span<const double> k_grid, const PairSampler& s,
                               NormKind norm) {
  if (!is_enriched(kind))
    throw std::invalid_argument("scan_k: kind must be an enriched condition");
  if (k_grid.empty()) throw std::invalid_argument("scan_k: empty k grid");
  std::vector<double> ks(k_grid.begin(), k_grid.end());
  for (double k : ks)
    if (!(k >= 0.0)) throw std::invalid_argument("scan_k: k values must be nonnegative");
  std::sort(ks.begin(), ks.end());

  const double bound = class_bound(kind);
  const auto estimate = [&](double k) {
    return certify(kind, T, s, norm, std::nullopt, k).min_constant;
  };

  FeasibilityCurve curve;
  curve.kind = kind;
  curve.entries.reserve(ks.size());
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double c = estimate(ks[i]);
    curve.entries.push_back({ks[i], c, c < bound});
    if (c < curve.entries[best_i].constant_min) best_i = i;
  }
  curve.best = curve.entries[best_i];

  if (ks.size() >= 2) {
    const double lo = best_i == 0 ? ks[0] : ks[best_i - 1];
    const double hi = best_i + 1 == ks.size() ? ks.back() : ks[best_i + 1];
    if (hi > lo) {
      const auto [k_ref, c_ref] = golden_section_min(estimate, lo, hi, 1e-4);
      // best-known point: the grid winner unless refinement improved on it
      curve.refined = c_ref < curve.best.constant_min
                          ? FeasibilityEntry{k_ref, c_ref, c_ref < bound}
                          : curve.best;
    }
  }
  return curve;
}

// Residual of the algebraic identities tying the enriched condition at
// k = (1-lambda)/lambda to the plain Chatterjea displacements of T_lambda:
//   lambda*||k(x-y)+Tx-Ty||       == ||T_l x - T_l y||
//   lambda*||(k+1)(x-y)+y-Ty||    == ||x - T_l y||
//   lambda*||(k+1)(y-x)+x-Tx||    == ||y - T_l x||
inline double enriched_reduction_residual(const MappingSpec& T, double lambda, const Point& x,
                                          const Point& y, NormKind norm) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("enriched_reduction_residual: lambda must lie in (0,1)");
  const double k = (1.0 - lambda) / lambda;
  const Point Tx = evaluate(T, x), Ty = evaluate(T, y);
  const auto et = detail::enriched_terms(x, y, Tx, Ty, k, norm);
  const Point Tlx = convex_combine(lambda, x, Tx);
  const Point Tly = convex_combine(lambda, y, Ty);
  const double r1 = std::abs(lambda * et.lhs - distance(Tlx, Tly, norm));
  const double r2 = std::abs(lambda * et.e1 - distance(x, Tly, norm));
  const double r3 = std::abs(lambda * et.e2 - distance(y, Tlx, norm));
  return std::max({r1, r2, r3});
}

// Constants derived by the classical implication chains.
inline ConditionParams derive_implied(const ConditionParams& source, ConditionKind target) {
  if (source.kind() == ConditionKind::Banach && target == ConditionKind::Chatterjea) {
    const double c = source.constant();
    if (!(c < 1.0 / 3.0))
      throw std::invalid_argument("implication: banach -> chatterjea needs c < 1/3");
    return ConditionParams::chatterjea(c / (1.0 - c));
  }
  if (source.kind() == ConditionKind::Kannan && target == ConditionKind::Chatterjea) {
    const double a = source.constant();
    if (!(a < 0.25))
      throw std::invalid_argument("implication: kannan -> chatterjea needs a < 1/4");
    return ConditionParams::chatterjea(a / (1.0 - 2.0 * a));
  }
  if (source.kind() == ConditionKind::EnrichedChatterjea &&
      target == ConditionKind::EnrichedChatterjeaType) {
    const double b = source.constant();
    // b(u+v) <= 2b*max(u,v), so h = 2b (< 1 since b < 1/2)
    return ConditionParams::enriched_chatterjea_type(source.enriched_k(), 2.0 * b);
  }
  throw std::invalid_argument(std::string("implication: unsupported pair ") +
                              to_string(source.kind()) + " -> " + to_string(target));
}

// Certifies the implied condition with its derived constant and returns the
// worst margin min(rhs - lhs) over the sample.
inline double implication_margin(const ConditionParams& source, ConditionKind target,
                                 const MappingSpec& T, const PairSampler& s, NormKind norm) {
  const ConditionParams derived = derive_implied(source, target);
  return certify(target, T, s, norm, derived).margin;
}

}  // namespace fixpoint
