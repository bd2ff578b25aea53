#pragma once

#include <cmath>
#include <functional>

#include "actsearch/rng.hpp"

namespace actsearch::testing {

// Central finite difference, the independent oracle for derivative checks.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Relative agreement between an analytic derivative and its
// finite-difference oracle. Values below the floor are treated as equal
// (finite differences lose all precision against near-zero derivatives).
inline bool grads_agree(double analytic, double fd, double rel_tol = 1e-4,
                        double floor = 1e-6) {
  if (std::abs(analytic) < floor && std::abs(fd) < floor) return true;
  const double denom = std::max(std::abs(analytic), std::abs(fd));
  return std::abs(analytic - fd) / denom < rel_tol;
}

// Sign-change bisection for root finding; g must bracket a root on [lo, hi].
inline double bisect(const std::function<double(double)>& g, double lo,
                     double hi, int iters = 200) {
  double flo = g(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = g(mid);
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace actsearch::testing
