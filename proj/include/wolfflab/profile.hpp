#pragma once

#include <string>
#include <vector>

namespace wolff {

// Log-spaced evaluation grid for radial quantities.
struct RadialGrid {
  double r_min = 1e-4;
  double r_max = 1e4;
  int points = 400;

  std::vector<double> radii() const;
  void validate() const;  // throws validation_error
};

// Radial curve sampled on a strictly increasing positive grid.
// Interpolation is piecewise linear in (log r, log v): exact on pure powers.
// Below the first node the value is held constant; above the last node the
// curve is extrapolated with the power law fitted to the last two nodes.
// Nodes with non-positive values fall back to linear-in-log-r interpolation.
class RadialProfile {
 public:
  RadialProfile() = default;
  RadialProfile(std::vector<double> radii, std::vector<double> values);

  const std::vector<double>& radii() const { return r_; }
  const std::vector<double>& values() const { return v_; }
  std::size_t size() const { return r_.size(); }
  bool empty() const { return r_.empty(); }

  double operator()(double r) const;
  double sup() const;
  double min_value() const;

  // CSV with header "r,value", 17 significant digits per field.
  std::string to_csv() const;
  static RadialProfile from_csv(const std::string& text);

 private:
  std::vector<double> r_, v_, logr_;
};

}  // namespace wolff
