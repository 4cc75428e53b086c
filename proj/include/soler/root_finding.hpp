#pragma once

#include <cmath>
#include <functional>

#include "soler/errors.hpp"

namespace soler {

/// Bracketed root finding: bisection with a secant acceleration step.
/// Converges to |hi - lo| <= tol.
inline double find_root(const std::function<double(double)>& f, double lo,
                        double hi, double tol = 1e-13) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw BracketingError("find_root: no sign change on the bracket");
  for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    // secant candidate on alternate iterations, kept only if it lands well
    // inside the bracket; the bisection fallback guarantees convergence
    if (it % 2 == 0) {
      const double denom = fhi - flo;
      if (denom != 0.0) {
        const double sec = lo - flo * (hi - lo) / denom;
        if (sec > lo + 0.05 * (hi - lo) && sec < hi - 0.05 * (hi - lo))
          mid = sec;
      }
    }
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace soler
