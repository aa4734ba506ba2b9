#pragma once

#include <cmath>
#include <cstdint>
#include <span>

// Error-free float transforms and compensated accumulation. These back the
// probability-space evolution (which must conserve mass to ~1e-15 over 1e4
// steps) and the double-double ratio chains used to build hypergeometric
// pmf tables to full double precision.

namespace knesermix {

struct SplitFloat {
  double hi = 0.0;
  double lo = 0.0;
};

// Knuth two-sum, branchless.
inline SplitFloat two_sum(double a, double b) {
  double s = a + b;
  double v = s - a;
  double err = (a - (s - v)) + (b - v);
  return {s, err};
}

// Requires |a| >= |b| (or a == 0).
inline SplitFloat quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline SplitFloat two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

// Neumaier running sum: value plus carried compensation, folded on demand.
class CompensatedSum {
 public:
  void add(double x) {
    SplitFloat s = two_sum(value_, x);
    value_ = s.hi;
    carry_ += s.lo;
  }
  double result() const { return value_ + carry_; }

 private:
  double value_ = 0.0;
  double carry_ = 0.0;
};

inline double compensated_total(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.result();
}

// Minimal double-double arithmetic (~106-bit significand). Only the
// operations the pmf ratio chains need.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  static DoubleDouble from(double x) { return {x, 0.0}; }
  double value() const { return hi + lo; }
};

inline DoubleDouble dd_add(DoubleDouble a, DoubleDouble b) {
  SplitFloat s = two_sum(a.hi, b.hi);
  SplitFloat t = two_sum(a.lo, b.lo);
  double lo = s.lo + t.hi;
  SplitFloat r = quick_two_sum(s.hi, lo);
  r.lo += t.lo;
  SplitFloat out = quick_two_sum(r.hi, r.lo);
  return {out.hi, out.lo};
}

inline DoubleDouble dd_mul(DoubleDouble a, DoubleDouble b) {
  SplitFloat p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  SplitFloat out = quick_two_sum(p.hi, p.lo);
  return {out.hi, out.lo};
}

inline DoubleDouble dd_div(DoubleDouble a, DoubleDouble b) {
  double q1 = a.hi / b.hi;
  DoubleDouble r = dd_add(a, dd_mul(DoubleDouble::from(-q1), b));
  double q2 = r.hi / b.hi;
  r = dd_add(r, dd_mul(DoubleDouble::from(-q2), b));
  double q3 = r.hi / b.hi;
  SplitFloat s = quick_two_sum(q1, q2);
  DoubleDouble out{s.hi, s.lo};
  return dd_add(out, DoubleDouble::from(q3));
}

}  // namespace knesermix
