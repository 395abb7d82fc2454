#pragma once

// Finite-dimensional normed-space primitives: points, L1/L2/Linf norms,
// distances, convex combinations and closed box domains.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fixpoint {

enum class NormKind { L1, L2, LInf };

inline const char* to_string(NormKind k) {
  switch (k) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::LInf: return "linf";
  }
  return "?";
}

inline NormKind norm_from_string(const std::string& s) {
  if (s == "l1" || s == "L1") return NormKind::L1;
  if (s == "l2" || s == "L2") return NormKind::L2;
  if (s == "linf" || s == "Linf" || s == "LINF") return NormKind::LInf;
  throw std::invalid_argument("unknown norm: " + s);
}

// A point of R^n. Immutable after construction; coordinates are always
// finite and the dimension is at least 1.
class Point {
 public:
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw std::invalid_argument("Point: dimension 0");
    for (double c : coords_)
      if (!std::isfinite(c)) throw std::invalid_argument("Point: non-finite coordinate");
  }
  Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }

  friend bool operator==(const Point& a, const Point& b) { return a.coords_ == b.coords_; }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }

 private:
  std::vector<double> coords_;
};

inline void require_same_dim(const Point& a, const Point& b, const char* what) {
  if (a.dim() != b.dim())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
}

inline Point add(const Point& a, const Point& b) {
  require_same_dim(a, b, "add");
  std::vector<double> c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) c[i] = a[i] + b[i];
  return Point(std::move(c));
}

inline Point sub(const Point& a, const Point& b) {
  require_same_dim(a, b, "sub");
  std::vector<double> c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) c[i] = a[i] - b[i];
  return Point(std::move(c));
}

inline Point scale(double t, const Point& p) {
  std::vector<double> c(p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) c[i] = t * p[i];
  return Point(std::move(c));
}

inline double norm_of(const Point& p, NormKind kind) {
  switch (kind) {
    case NormKind::L1: {
      double s = 0;
      for (std::size_t i = 0; i < p.dim(); ++i) s += std::abs(p[i]);
      return s;
    }
    case NormKind::L2: {
      double s = 0;
      for (std::size_t i = 0; i < p.dim(); ++i) s += p[i] * p[i];
      return std::sqrt(s);
    }
    case NormKind::LInf: {
      double m = 0;
      for (std::size_t i = 0; i < p.dim(); ++i) m = std::max(m, std::abs(p[i]));
      return m;
    }
  }
  throw std::invalid_argument("norm_of: bad kind");
}

inline double distance(const Point& x, const Point& y, NormKind kind) {
  require_same_dim(x, y, "distance");
  return norm_of(sub(x, y), kind);
}

// (1-a)*x + a*y, coordinatewise. a must lie in [0,1].
inline Point convex_combine(double a, const Point& x, const Point& y) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("convex_combine: a outside [0,1]");
  require_same_dim(x, y, "convex_combine");
  std::vector<double> c(x.dim());
  const double one_minus = 1.0 - a;
  for (std::size_t i = 0; i < x.dim(); ++i) c[i] = one_minus * x[i] + a * y[i];
  return Point(std::move(c));
}

// Closed axis-aligned box [lower, upper]; boundary points belong to it.
class BoxDomain {
 public:
  BoxDomain(Point lower, Point upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    require_same_dim(lower_, upper_, "BoxDomain");
    for (std::size_t i = 0; i < lower_.dim(); ++i)
      if (!(lower_[i] <= upper_[i]))
        throw std::invalid_argument("BoxDomain: lower > upper at coordinate " + std::to_string(i));
  }

  static BoxDomain unit_interval() { return BoxDomain(Point{0.0}, Point{1.0}); }

  std::size_t dim() const { return lower_.dim(); }
  const Point& lower() const { return lower_; }
  const Point& upper() const { return upper_; }

  bool contains(const Point& p) const {
    require_same_dim(lower_, p, "contains");
    for (std::size_t i = 0; i < dim(); ++i)
      if (p[i] < lower_[i] || p[i] > upper_[i]) return false;
    return true;
  }

  // Linf distance from p to the box; 0 iff contains(p).
  double violation(const Point& p) const {
    require_same_dim(lower_, p, "violation");
    double v = 0;
    for (std::size_t i = 0; i < dim(); ++i) {
      if (p[i] < lower_[i]) v = std::max(v, lower_[i] - p[i]);
      if (p[i] > upper_[i]) v = std::max(v, p[i] - upper_[i]);
    }
    return v;
  }

  friend bool operator==(const BoxDomain& a, const BoxDomain& b) {
    return a.lower_ == b.lower_ && a.upper_ == b.upper_;
  }

 private:
  Point lower_;
  Point upper_;
};

inline bool contains(const BoxDomain& d, const Point& p) { return d.contains(p); }

}  // namespace fixpoint
