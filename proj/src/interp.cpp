#include "wolfflab/interp.hpp"

#include <algorithm>
#include <cstddef>

#include "wolfflab/errors.hpp"

namespace wolff {

CubicHermite::CubicHermite(std::vector<double> x, std::vector<double> y,
                           std::vector<double> d)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)) {
  if (x_.size() < 2 || x_.size() != y_.size() || x_.size() != d_.size()) {
    throw validation_error("CubicHermite: need matching vectors of length >= 2");
  }
  for (std::size_t i = 1; i < x_.size(); ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw validation_error("CubicHermite: abscissae must strictly increase");
    }
  }
}

double CubicHermite::operator()(double xq) const {
  if (xq <= x_.front()) return y_.front();
  if (xq >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), xq);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double s = (xq - x_[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

}  // namespace wolff
