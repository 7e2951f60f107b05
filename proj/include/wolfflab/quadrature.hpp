#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace wolff {

// One evaluation node of a committed quadrature rule. Callers that need to
// replay the exact same node set against a pointwise-ordered family of
// integrands (the fixed-rule iteration path) collect these during an
// adaptive run and reuse them, which makes the replayed values ordered too.
struct QuadNode {
  double x;
  double w;
};

namespace detail {

template <class F>
double simpson_rec(F& f, double a, double m, double b, double fa, double fm,
                   double fb, double whole, double abs_tol, int depth,
                   double scale, double parent_err, int strikes,
                   std::vector<QuadNode>* rec) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  // A split whose defect is already negligible against the whole call yet
  // fails to shrink 4x is grinding on roundoff; three such levels in a row
  // and the panel is accepted as it stands.  Defects that are still large
  // on the call's scale never count: the panel is merely unresolved.
  const double aerr = std::fabs(err);
  const int next_strikes =
      (aerr <= 1e-6 * scale && !(aerr <= 0.25 * parent_err)) ? strikes + 1
                                                             : 0;
  if (depth <= 0 || aerr <= 15.0 * abs_tol || next_strikes >= 3) {
    if (rec) {
      const double hl = (m - a) / 6.0;
      const double hr = (b - m) / 6.0;
      rec->push_back({a, hl});
      rec->push_back({lm, 4.0 * hl});
      rec->push_back({m, hl + hr});
      rec->push_back({rm, 4.0 * hr});
      rec->push_back({b, hr});
    }
    return left + right + err / 15.0;
  }
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1,
                     scale, aerr, next_strikes, rec) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1,
                     scale, aerr, next_strikes, rec);
}

}  // namespace detail

// Adaptive Simpson on [a,b] with an absolute error budget for the segment.
// scale is the magnitude of the enclosing computation (for the roundoff
// detector); nonpositive means derive it from the first estimate.
template <class F>
double adaptive_simpson_abs(F&& f, double a, double b, double abs_tol,
                            int max_depth, std::vector<QuadNode>* rec = nullptr,
                            double scale = 0.0) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  if (!(scale > 0.0)) scale = std::max(std::fabs(whole), 1e-300);
  return detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, abs_tol, max_depth,
                             scale, std::numeric_limits<double>::infinity(), 0,
                             rec);
}

// Relative-control wrapper. The budget is seeded from a trapezoid scan so a
// segment where the integrand vanishes identically is detected and skipped.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double rel_tol, int max_depth,
                        std::vector<QuadNode>* rec = nullptr) {
  if (!(b > a)) return 0.0;
  constexpr int kProbe = 8;
  double prev_x = a;
  double prev_f = f(a);
  bool any = prev_f != 0.0;
  double coarse = 0.0;
  for (int i = 1; i <= kProbe; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / kProbe;
    const double fx = f(x);
    any = any || fx != 0.0;
    coarse += 0.5 * (prev_f + fx) * (x - prev_x);
    prev_x = x;
    prev_f = fx;
  }
  if (!any) return 0.0;
  const double scale = std::max(std::fabs(coarse), 1e-300);
  const double budget = 0.5 * rel_tol * scale;
  return adaptive_simpson_abs(f, a, b, budget, max_depth, rec, scale);
}

// 15-point Gauss-Legendre nodes on [-1,1]; exact through degree 29.
inline constexpr std::array<double, 15> kGauss15X = {
    -0.98799251802048543, -0.93727339240070590, -0.84820658341042722,
    -0.72441773136017005, -0.57097217260853885, -0.39415134707756337,
    -0.20119409399743452, 0.0,                  0.20119409399743452,
    0.39415134707756337,  0.57097217260853885,  0.72441773136017005,
    0.84820658341042722,  0.93727339240070590,  0.98799251802048543};

inline constexpr std::array<double, 15> kGauss15W = {
    0.030753241996117268, 0.070366047488108125, 0.107159220467171935,
    0.139570677926154314, 0.166269205816993934, 0.186161000015562211,
    0.198431485327111576, 0.202578241925561273, 0.198431485327111576,
    0.186161000015562211, 0.166269205816993934, 0.139570677926154314,
    0.107159220467171935, 0.070366047488108125, 0.030753241996117268};

template <class F>
double gauss15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < kGauss15X.size(); ++i) {
    acc += kGauss15W[i] * f(c + h * kGauss15X[i]);
  }
  return acc * h;
}

}  // namespace wolff
