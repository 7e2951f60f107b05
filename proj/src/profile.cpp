#include "wolfflab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "wolfflab/errors.hpp"

namespace wolff {

void RadialGrid::validate() const {
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max)) {
    throw validation_error("RadialGrid: need 0 < r_min < r_max < inf");
  }
  if (points < 2 || points > 2000000) {
    throw validation_error("RadialGrid: points must be in [2, 2e6]");
  }
}

std::vector<double> RadialGrid::radii() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(points));
  const double la = std::log(r_min);
  const double lb = std::log(r_max);
  for (int i = 0; i < points; ++i) {
    const double w = static_cast<double>(i) / (points - 1);
    out[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * w);
  }
  out.front() = r_min;
  out.back() = r_max;
  return out;
}

RadialProfile::RadialProfile(std::vector<double> radii,
                             std::vector<double> values)
    : r_(std::move(radii)), v_(std::move(values)) {
  if (r_.size() != v_.size() || r_.size() < 2) {
    throw validation_error("RadialProfile: need matching vectors, length >= 2");
  }
  logr_.resize(r_.size());
  for (std::size_t i = 0; i < r_.size(); ++i) {
    if (!(r_[i] > 0.0) || (i > 0 && !(r_[i] > r_[i - 1]))) {
      throw validation_error("RadialProfile: radii must be positive increasing");
    }
    if (!(v_[i] >= 0.0) || !std::isfinite(v_[i])) {
      throw validation_error("RadialProfile: values must be >= 0 and finite");
    }
    logr_[i] = std::log(r_[i]);
  }
}

double RadialProfile::operator()(double r) const {
  if (r_.empty()) throw validation_error("RadialProfile: empty");
  if (!(r >= 0.0)) throw validation_error("RadialProfile: bad query radius");
  if (r <= r_.front()) return v_.front();
  const std::size_t nn = r_.size();
  std::size_t i;
  if (r >= r_.back()) {
    i = nn - 2;  // extrapolate from the last segment
  } else {
    const auto it = std::upper_bound(r_.begin(), r_.end(), r);
    i = static_cast<std::size_t>(it - r_.begin()) - 1;
  }
  const double va = v_[i], vb = v_[i + 1];
  const double w = (std::log(r) - logr_[i]) / (logr_[i + 1] - logr_[i]);
  if (va > 0.0 && vb > 0.0) {
    return std::exp(std::log(va) + w * (std::log(vb) - std::log(va)));
  }
  if (r >= r_.back()) return vb;  // no power law through zero
  return va + w * (vb - va);
}

double RadialProfile::sup() const {
  return r_.empty() ? 0.0 : *std::max_element(v_.begin(), v_.end());
}

double RadialProfile::min_value() const {
  return r_.empty() ? 0.0 : *std::min_element(v_.begin(), v_.end());
}

std::string RadialProfile::to_csv() const {
  std::string out = "r,value\n";
  char buf[96];
  for (std::size_t i = 0; i < r_.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", r_[i], v_[i]);
    out += buf;
  }
  return out;
}

RadialProfile RadialProfile::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> r, v;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      if (line.rfind("r,", 0) == 0) continue;
    }
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw validation_error("RadialProfile::from_csv: malformed row");
    }
    r.push_back(std::stod(line.substr(0, comma)));
    v.push_back(std::stod(line.substr(comma + 1)));
  }
  return RadialProfile(std::move(r), std::move(v));
}

}  // namespace wolff
