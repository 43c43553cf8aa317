#pragma once

#include <cmath>
#include <utility>

namespace hypflow::detail {

struct LineMinimum {
  double arg = 0.0;
  double value = 0.0;
  double bracket = 0.0;  // width of the final bracket
};

/// Golden-section minimisation of a unimodal function on [lo, hi]. The
/// endpoints are evaluated too, and ties go to the smaller argument.
template <class F>
LineMinimum golden_section(F&& fn, double lo, double hi, double tol, int max_iter = 200) {
  constexpr double kInvPhi = 0.6180339887498948482;
  LineMinimum best{lo, fn(lo), hi - lo};
  if (!(hi > lo)) {
    best.bracket = 0.0;
    return best;
  }
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = fn(d);
    }
  }
  const double mid = 0.5 * (a + b);
  const double fmid = fn(mid);
  if (fc < best.value) best = {c, fc, b - a};
  if (fmid < best.value) best = {mid, fmid, b - a};
  if (fd < best.value) best = {d, fd, b - a};
  const double fhi = fn(hi);
  if (fhi < best.value) best = {hi, fhi, b - a};
  best.bracket = b - a;
  return best;
}

}  // namespace hypflow::detail
