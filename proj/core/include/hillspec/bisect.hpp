#pragma once

#include <cmath>
#include <functional>
#include <utility>

namespace hillspec {

/// Called with the bracket after every halving.
using BisectionTrace = std::function<void(double lo, double hi)>;

/// Shrinks [lo, hi] around a sign change of f until hi - lo <= width or the
/// midpoint is no longer representable. f_lo is f(lo); a zero value counts
/// as its own side.
template <class F>
std::pair<double, double> bisect_sign_change(F&& f, double lo, double hi, double f_lo,
                                             double width, const BisectionTrace& trace = {}) {
  const bool lo_negative = f_lo < 0.0;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return {mid, mid};
    if ((f_mid < 0.0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (trace) trace(lo, hi);
  }
  return {lo, hi};
}

}  // namespace hillspec
