#pragma once

// Derivative-free golden-section minimization on a bracket. Tolerates
// nonsmooth and infinite objective values; quasi-convexity is assumed,
// not checked.

#include <cmath>
#include <utility>

namespace fixpoint {

template <class F>
std::pair<double, double> golden_section_min(F&& f, double lo, double hi, double x_tol,
                                             int max_iter = 200) {
  if (hi < lo) std::swap(lo, hi);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iter && (hi - lo) > x_tol; ++i) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

}  // namespace fixpoint
