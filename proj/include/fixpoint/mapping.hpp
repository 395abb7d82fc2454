#pragma once

// Declarative self-map specifications: a builtin catalog, affine maps,
// parsed one-variable expressions and piecewise definitions, plus the
// Krasnoselskij averaged transform T_lambda = (1-lambda)*I + lambda*T.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fixpoint/expr.hpp"
#include "fixpoint/sampling.hpp"
#include "fixpoint/space.hpp"

namespace fixpoint {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class MappingSpec {
 public:
  struct Builtin {
    std::string name;  // "flip" | "step_half" | "affine(<c>)"
    double param = 0;  // the c of affine(c)
    bool has_param = false;
  };
  struct Affine {
    std::vector<std::vector<double>> matrix;  // square, dim x dim
    Point offset;
  };
  struct Expression {
    std::string source;
    ExprPtr ast;
  };
  struct PiecewiseCase {
    std::string guard_source;
    GuardExpr guard;
    std::shared_ptr<const MappingSpec> map;
  };
  struct Piecewise {
    std::vector<PiecewiseCase> cases;  // first matching guard wins
  };

  using Impl = std::variant<Builtin, Affine, Expression, Piecewise>;

  // Catalog maps, all on [0,1]:
  //   flip        T(x) = 1 - x
  //   step_half   T(x) = 0 on [0,1), T(1) = 1/2
  //   affine(c)   T(x) = c*x, c in [0,1]
  static MappingSpec builtin(const std::string& name) {
    Builtin b;
    b.name = name;
    if (name.rfind("affine(", 0) == 0 && name.back() == ')') {
      const std::string inner = name.substr(7, name.size() - 8);
      std::size_t used = 0;
      double c = 0;
      try {
        c = std::stod(inner, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("builtin: bad affine parameter '" + inner + "'");
      }
      if (used != inner.size() || !(c >= 0.0 && c <= 1.0))
        throw std::invalid_argument("builtin: affine parameter must lie in [0,1], got '" + inner + "'");
      b.param = c;
      b.has_param = true;
    } else if (name != "flip" && name != "step_half") {
      throw std::invalid_argument("builtin: unknown mapping '" + name + "'");
    }
    return MappingSpec(BoxDomain::unit_interval(), Impl(std::move(b)));
  }

  static MappingSpec affine(std::vector<std::vector<double>> matrix, Point offset, BoxDomain domain) {
    const std::size_t d = domain.dim();
    if (matrix.size() != d)
      throw std::invalid_argument("affine: matrix rows != domain dimension");
    for (const auto& row : matrix)
      if (row.size() != d) throw std::invalid_argument("affine: matrix is not square");
    require_same_dim(offset, domain.lower(), "affine offset");
    return MappingSpec(std::move(domain), Impl(Affine{std::move(matrix), std::move(offset)}));
  }

  static MappingSpec expression(const std::string& src, BoxDomain domain) {
    if (domain.dim() != 1)
      throw std::invalid_argument("expression: mappings are one-dimensional");
    return MappingSpec(std::move(domain), Impl(Expression{src, parse_expression(src)}));
  }

  static MappingSpec piecewise(std::vector<std::pair<std::string, MappingSpec>> cases, BoxDomain domain) {
    if (domain.dim() != 1)
      throw std::invalid_argument("piecewise: mappings are one-dimensional");
    if (cases.empty()) throw std::invalid_argument("piecewise: no cases");
    Piecewise pw;
    pw.cases.reserve(cases.size());
    for (auto& [guard_src, map] : cases) {
      PiecewiseCase c;
      c.guard_source = guard_src;
      c.guard = parse_guard(guard_src);
      c.map = std::make_shared<const MappingSpec>(std::move(map));
      pw.cases.push_back(std::move(c));
    }
    return MappingSpec(std::move(domain), Impl(std::move(pw)));
  }

  const BoxDomain& domain() const { return domain_; }
  const Impl& impl() const { return impl_; }

 private:
  MappingSpec(BoxDomain domain, Impl impl) : domain_(std::move(domain)), impl_(std::move(impl)) {}

  BoxDomain domain_;
  Impl impl_;
};

inline Point evaluate(const MappingSpec& spec, const Point& x);

namespace detail {

inline Point eval_builtin(const MappingSpec::Builtin& b, const Point& x) {
  const double v = x[0];
  if (b.name == "flip") return Point{1.0 - v};
  if (b.name == "step_half") return Point{v < 1.0 ? 0.0 : 0.5};
  return Point{b.param * v};  // affine(c)
}

inline Point eval_affine(const MappingSpec::Affine& a, const Point& x) {
  const std::size_t d = x.dim();
  std::vector<double> y(d);
  for (std::size_t i = 0; i < d; ++i) {
    double s = a.offset[i];
    for (std::size_t j = 0; j < d; ++j) s += a.matrix[i][j] * x[j];
    y[i] = s;
  }
  return Point(std::move(y));
}

}  // namespace detail

inline Point evaluate(const MappingSpec& spec, const Point& x) {
  if (!spec.domain().contains(x))
    throw std::domain_error("evaluate: point outside mapping domain");
  struct Ev {
    const MappingSpec& spec;
    const Point& x;
    Point operator()(const MappingSpec::Builtin& b) const { return detail::eval_builtin(b, x); }
    Point operator()(const MappingSpec::Affine& a) const { return detail::eval_affine(a, x); }
    Point operator()(const MappingSpec::Expression& e) const {
      const double y = eval_expr(e.ast, x[0]);
      if (!std::isfinite(y))
        throw EvalError("expression '" + e.source + "' produced a non-finite value at x=" +
                        format_double(x[0]));
      return Point{y};
    }
    Point operator()(const MappingSpec::Piecewise& pw) const {
      for (const auto& c : pw.cases)
        if (c.guard.eval(x[0])) return evaluate(*c.map, x);
      throw EvalError("piecewise: no guard matched at x=" + format_double(x[0]));
    }
  };
  return std::visit(Ev{spec, x}, spec.impl());
}

// The analytically known unique fixed point for catalog maps, when one exists.
inline std::optional<Point> known_fixed_point(const MappingSpec& spec) {
  if (const auto* b = std::get_if<MappingSpec::Builtin>(&spec.impl())) {
    if (b->name == "flip") return Point{0.5};
    if (b->name == "step_half") return Point{0.0};
    if (b->has_param && b->param < 1.0) return Point{0.0};
  }
  return std::nullopt;
}

struct AveragedSpec {
  MappingSpec base;
  double lambda;
};

inline AveragedSpec average(const MappingSpec& spec, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw std::invalid_argument("average: lambda outside (0,1]");
  return AveragedSpec{spec, lambda};
}

inline Point evaluate(const AveragedSpec& avg, const Point& x) {
  return convex_combine(avg.lambda, x, evaluate(avg.base, x));
}

// lambda = 1/(k+1); k = 0 gives lambda = 1 (plain Picard iteration).
inline double lambda_from_k(double k) {
  if (!(k >= 0.0)) throw std::invalid_argument("lambda_from_k: k must be nonnegative");
  return 1.0 / (k + 1.0);
}

struct SelfMapReport {
  bool ok = true;
  std::size_t n_checked = 0;
  double worst_violation = 0;
  std::optional<Point> worst_point;
  std::string note;
};

// Samples grid + random points and evaluates T on each; any image outside
// the domain (or an evaluation failure) fails the verdict.
inline SelfMapReport check_self_map(const MappingSpec& spec, std::uint64_t sampler_seed,
                                    std::size_t n_samples) {
  if (n_samples < 1) throw std::invalid_argument("check_self_map: n_samples must be >= 1");
  const BoxDomain& box = spec.domain();
  const std::size_t d = box.dim();
  // roughly half the budget on a grid (corners included), the rest random
  const auto grid_total = [d](std::size_t g) {
    std::size_t t = 1;
    for (std::size_t i = 0; i < d; ++i) {
      if (t > 1u << 20) return t;
      t *= g;
    }
    return t;
  };
  std::size_t per_axis = n_samples == 1 ? 1 : 2;
  while (per_axis < 64 && grid_total(per_axis + 1) * 2 <= n_samples) ++per_axis;
  std::vector<Point> pts = grid_points(box, per_axis);
  std::mt19937_64 rng(sampler_seed);
  while (pts.size() < n_samples) pts.push_back(random_point(rng, box));

  SelfMapReport rep;
  rep.n_checked = pts.size();
  for (const Point& p : pts) {
    double v = 0;
    std::string note;
    try {
      v = box.violation(evaluate(spec, p));
    } catch (const std::exception& e) {
      v = std::numeric_limits<double>::infinity();
      note = e.what();
    }
    if (v > 0 && (!rep.worst_point || v > rep.worst_violation)) {
      rep.ok = false;
      rep.worst_violation = v;
      rep.worst_point = p;
      if (!note.empty()) rep.note = note;
    }
  }
  return rep;
}

// ---- JSON (de)serialization -------------------------------------------------
//
// {"kind":"builtin","name":"flip"}
// {"kind":"expr","src":"1 - x"}
// {"kind":"affine","matrix":[[...]],"offset":[...]}
// {"kind":"piecewise","cases":[{"guard":"x < 1","map":{...}},...]}
// plus {"domain":{"lower":[...],"upper":[...]}} at the top level; nested
// piecewise branches inherit the outer domain.

inline nlohmann::json domain_to_json(const BoxDomain& d) {
  return {{"lower", d.lower().coords()}, {"upper", d.upper().coords()}};
}

inline BoxDomain domain_from_json(const nlohmann::json& j) {
  return BoxDomain(Point(j.at("lower").get<std::vector<double>>()),
                   Point(j.at("upper").get<std::vector<double>>()));
}

inline nlohmann::json mapping_to_json(const MappingSpec& spec, bool with_domain = true) {
  nlohmann::json j;
  struct Ser {
    nlohmann::json& j;
    void operator()(const MappingSpec::Builtin& b) const {
      j["kind"] = "builtin";
      j["name"] = b.name;
    }
    void operator()(const MappingSpec::Affine& a) const {
      j["kind"] = "affine";
      j["matrix"] = a.matrix;
      j["offset"] = a.offset.coords();
    }
    void operator()(const MappingSpec::Expression& e) const {
      j["kind"] = "expr";
      j["src"] = e.source;
    }
    void operator()(const MappingSpec::Piecewise& pw) const {
      j["kind"] = "piecewise";
      auto cases = nlohmann::json::array();
      for (const auto& c : pw.cases)
        cases.push_back({{"guard", c.guard_source}, {"map", mapping_to_json(*c.map, false)}});
      j["cases"] = std::move(cases);
    }
  };
  std::visit(Ser{j}, spec.impl());
  if (with_domain) j["domain"] = domain_to_json(spec.domain());
  return j;
}

inline MappingSpec mapping_from_json(const nlohmann::json& j,
                                     std::optional<BoxDomain> inherited = std::nullopt) {
  const std::string kind = j.at("kind").get<std::string>();
  std::optional<BoxDomain> domain = inherited;
  if (j.contains("domain")) domain = domain_from_json(j.at("domain"));
  if (kind == "builtin") {
    auto spec = MappingSpec::builtin(j.at("name").get<std::string>());
    if (domain && !(*domain == spec.domain()))
      throw std::invalid_argument("mapping: builtin maps are defined on [0,1]");
    return spec;
  }
  if (!domain) throw std::invalid_argument("mapping: missing \"domain\"");
  if (kind == "expr") return MappingSpec::expression(j.at("src").get<std::string>(), *domain);
  if (kind == "affine")
    return MappingSpec::affine(j.at("matrix").get<std::vector<std::vector<double>>>(),
                               Point(j.at("offset").get<std::vector<double>>()), *domain);
  if (kind == "piecewise") {
    std::vector<std::pair<std::string, MappingSpec>> cases;
    for (const auto& c : j.at("cases"))
      cases.emplace_back(c.at("guard").get<std::string>(), mapping_from_json(c.at("map"), domain));
    return MappingSpec::piecewise(std::move(cases), *domain);
  }
  throw std::invalid_argument("mapping: unknown kind '" + kind + "'");
}

}  // namespace fixpoint
