#pragma once

#include <vector>

namespace wolff {

// Piecewise-cubic interpolant with caller-supplied node derivatives.
// Intended for cumulative integrals, where the exact derivative (the
// integrand itself) is available; the two-point Hermite error there is
// O(h^4) without any derivative estimation. Queries clamp to the node range.
class CubicHermite {
 public:
  CubicHermite() = default;
  // x strictly increasing, all vectors the same length >= 2.
  CubicHermite(std::vector<double> x, std::vector<double> y,
               std::vector<double> d);

  double operator()(double xq) const;
  bool empty() const { return x_.empty(); }
  double front_x() const { return x_.front(); }
  double back_x() const { return x_.back(); }
  double front_y() const { return y_.front(); }
  double back_y() const { return y_.back(); }

 private:
  std::vector<double> x_, y_, d_;
};

}  // namespace wolff
