#include "wolfflab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <utility>

#include "wolfflab/errors.hpp"
#include "wolfflab/quadrature.hpp"

namespace wolff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

void check_dim(int n) {
  if (n < 2 || n > 64) throw validation_error("dimension must be in [2, 64]");
}

// C(theta) = int_0^theta sin^{n-2}, and its exact value at pi.
double colatitude_total(int n) {
  return std::sqrt(M_PI) * std::tgamma((n - 1) / 2.0) / std::tgamma(n / 2.0);
}

struct ColatitudeTable {
  CubicHermite cum;
  double total;
};

const ColatitudeTable& colatitude_table(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const ColatitudeTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    const int m = 2048;
    std::vector<double> th(m + 1), y(m + 1), d(m + 1);
    const auto f = [n](double u) { return std::pow(std::sin(u), n - 2); };
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) {
      th[i] = M_PI * i / m;
      if (i > 0) acc += gauss15(f, th[i - 1], th[i]);
      y[i] = acc;
      d[i] = f(th[i]);
    }
    auto tab = std::make_shared<ColatitudeTable>(ColatitudeTable{
        CubicHermite(th, y, d), colatitude_total(n)});
    it = cache.emplace(n, std::move(tab)).first;
  }
  return *it->second;
}

void check_cap_args(double rho, double r, double t, int n) {
  check_dim(n);
  if (!(rho >= 0.0) || !std::isfinite(rho) || !(r > 0.0) ||
      !std::isfinite(r) || !(t > 0.0)) {
    throw validation_error("shell_cap_fraction: need rho >= 0, r > 0, t > 0");
  }
}

}  // namespace

double unit_ball_volume(int n) {
  check_dim(n);
  return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double sphere_area_constant(int n) { return n * unit_ball_volume(n); }

double shell_cap_fraction(double rho, double r, double t, int n) {
  check_cap_args(rho, r, t, n);
  if (rho == 0.0) return r < t ? 1.0 : 0.0;
  if (rho + r <= t) return 1.0;
  if (std::abs(rho - r) >= t) return 0.0;
  if (n == 3) {
    const double d = rho - r;
    return std::clamp((t * t - d * d) / (4.0 * rho * r), 0.0, 1.0);
  }
  const double c = std::clamp((rho * rho + r * r - t * t) / (2.0 * rho * r),
                              -1.0, 1.0);
  const auto& tab = colatitude_table(n);
  return std::clamp(tab.cum(std::acos(c)) / tab.total, 0.0, 1.0);
}

double shell_cap_fraction_by_quadrature(double rho, double r, double t,
                                        int n) {
  check_cap_args(rho, r, t, n);
  if (rho == 0.0) return r < t ? 1.0 : 0.0;
  if (rho + r <= t) return 1.0;
  if (std::abs(rho - r) >= t) return 0.0;
  const double c = std::clamp((rho * rho + r * r - t * t) / (2.0 * rho * r),
                              -1.0, 1.0);
  const double theta0 = std::acos(c);
  const double num = adaptive_simpson(
      [n](double u) { return std::pow(std::sin(u), n - 2); }, 0.0, theta0,
      1e-12, 40);
  return std::clamp(num / colatitude_total(n), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// RadialDensity

RadialDensity RadialDensity::constant(double level, double support_radius) {
  if (!(level > 0.0) || !std::isfinite(level)) {
    throw validation_error("constant density: level must be positive");
  }
  if (!(support_radius > 0.0) || !std::isfinite(support_radius)) {
    throw validation_error("density: support radius must be positive finite");
  }
  RadialDensity d;
  d.kind_ = DensityKind::constant;
  d.a_ = level;
  d.support_ = support_radius;
  d.head_coeff_ = level;
  d.head_exp_ = 0.0;
  d.breakpoints_ = {support_radius};
  return d;
}

RadialDensity RadialDensity::power(double coeff, double exponent_s,
                                   double support_radius) {
  if (!(coeff > 0.0) || !std::isfinite(coeff) || !std::isfinite(exponent_s)) {
    throw validation_error("power density: need positive coeff, finite exponent");
  }
  if (!(support_radius > 0.0) || !std::isfinite(support_radius)) {
    throw validation_error("density: support radius must be positive finite");
  }
  RadialDensity d;
  d.kind_ = DensityKind::power;
  d.a_ = coeff;
  d.b_ = exponent_s;
  d.support_ = support_radius;
  d.head_coeff_ = coeff;
  d.head_exp_ = -exponent_s;
  d.breakpoints_ = {support_radius};
  return d;
}

RadialDensity RadialDensity::gaussian(double amplitude, double length_scale,
                                      double support_radius) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude) ||
      !(length_scale > 0.0) || !std::isfinite(length_scale)) {
    throw validation_error("gaussian density: need positive amplitude, scale");
  }
  if (!(support_radius > 0.0) || !std::isfinite(support_radius)) {
    throw validation_error("density: support radius must be positive finite");
  }
  RadialDensity d;
  d.kind_ = DensityKind::gaussian;
  d.a_ = amplitude;
  d.b_ = length_scale;
  d.support_ = support_radius;
  d.head_coeff_ = amplitude;
  d.head_exp_ = 0.0;
  d.breakpoints_ = {support_radius};
  return d;
}

RadialDensity RadialDensity::modulated(const RadialDensity& base,
                                       RadialProfile factor) {
  RadialDensity d;
  d.kind_ = DensityKind::modulated;
  d.support_ = base.support_;
  // Below its first node the factor clamps to its leftmost value, so the
  // small-r behavior stays a clean power.
  d.head_coeff_ = base.head_coeff_ * factor.values().front();
  d.head_exp_ = base.head_exp_;
  d.breakpoints_ = base.breakpoints_;
  d.base_ = std::make_shared<RadialDensity>(base);
  d.factor_ = std::make_shared<RadialProfile>(std::move(factor));
  return d;
}

double RadialDensity::operator()(double r) const {
  if (!(r > 0.0)) throw validation_error("density: radius must be > 0");
  if (r > support_) return 0.0;
  switch (kind_) {
    case DensityKind::constant:
      return a_;
    case DensityKind::power:
      return a_ * std::pow(r, -b_);
    case DensityKind::gaussian: {
      const double z = r / b_;
      return a_ * std::exp(-z * z);
    }
    case DensityKind::modulated:
      return (*base_)(r) * (*factor_)(r);
  }
  return 0.0;
}

std::vector<double> RadialDensity::interior_nodes() const {
  std::vector<double> out = breakpoints_;
  if (kind_ == DensityKind::modulated) {
    const std::vector<double> inner = base_->interior_nodes();
    out.insert(out.end(), inner.begin(), inner.end());
    for (double r : factor_->radii()) {
      if (r > 0.0 && r < support_) out.push_back(r);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RadialDensity RadialDensity::truncated(double R) const {
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw validation_error("density truncation radius must be positive finite");
  }
  if (R >= support_) return *this;
  RadialDensity d = *this;
  d.support_ = R;
  d.breakpoints_.clear();
  for (double b : breakpoints_) {
    if (b < R) d.breakpoints_.push_back(b);
  }
  d.breakpoints_.push_back(R);
  return d;
}

// ---------------------------------------------------------------------------
// MomentTables

bool MomentTables::usable(int k) const {
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] == k) return !divergent[i];
  }
  return false;
}

double MomentTables::eval(int k, double r) const {
  std::size_t idx = orders.size();
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] == k) idx = i;
  }
  if (idx == orders.size() || divergent[idx]) {
    throw validation_error("moment order unavailable");
  }
  if (!(r > 0.0)) return 0.0;
  if (r >= support) return total[idx];
  const double e = k + 1 + head_exp;
  if (r <= r0) return head_coeff * std::pow(r, e) / e;
  const double lr = std::log(r);
  const auto it =
      std::upper_bound(log_nodes.begin(), log_nodes.end(), lr);
  const std::size_t seg = static_cast<std::size_t>(
      std::max<std::ptrdiff_t>(0, it - log_nodes.begin() - 1));
  const double piece =
      gauss15([this, k](double x) {
        const double s = std::exp(x);
        return density(s) * std::pow(s, k + 1);
      },
      log_nodes[seg], lr);
  return at_node[idx][seg] + std::max(0.0, piece);
}

namespace {

std::shared_ptr<const MomentTables> build_tables(const RadialDensity& w,
                                                 int n) {
  const double Rs = w.support_radius();
  const std::vector<double> dense = w.interior_nodes();
  double r0 = Rs * 1e-7;
  for (double v : dense) {
    if (v > 0.0) r0 = std::min(r0, 0.5 * v);
  }

  std::vector<double> grid;
  grid.reserve(2100 + dense.size());
  const int base_nodes = 2048;
  const double la = std::log(r0), lb = std::log(Rs);
  for (int i = 0; i < base_nodes; ++i) {
    grid.push_back(std::exp(la + (lb - la) * i / (base_nodes - 1)));
  }
  for (double v : dense) {
    if (v > r0 && v < Rs) grid.push_back(v);
  }
  grid.front() = r0;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double b) {
                           return std::abs(a - b) <= 1e-14 * std::max(a, b);
                         }),
             grid.end());
  grid.back() = Rs;

  auto tab = std::make_shared<MomentTables>(w);
  tab->r0 = r0;
  tab->support = Rs;
  tab->head_coeff = w.head_coeff();
  tab->head_exp = w.head_exponent();
  tab->orders = (n == 3) ? std::vector<int>{1, 2, 3} : std::vector<int>{n - 1};

  std::vector<double> logr(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    logr[i] = std::log(grid[i]);
    const double wr = w(grid[i]);
    if (!(wr >= 0.0) || !std::isfinite(wr)) {
      throw validation_error("density must be finite and >= 0 on its support");
    }
  }
  tab->log_nodes = logr;

  for (int k : tab->orders) {
    const double e = k + 1 + tab->head_exp;
    const bool div = e <= 1e-12 && tab->head_coeff > 0.0;
    tab->divergent.push_back(div ? 1 : 0);
    if (div) {
      tab->at_node.emplace_back(grid.size(), 0.0);
      tab->total.push_back(kInf);
      continue;
    }
    // Node values on the log grid: one fixed GL15 panel per interval,
    // positive weights, so the table is exactly monotone in the integrand.
    std::vector<double> y(grid.size());
    double acc = tab->head_coeff * std::pow(r0, e) / e;
    y[0] = acc;
    const auto f = [&w, k](double x) {
      const double r = std::exp(x);
      return w(r) * std::pow(r, k + 1);
    };
    for (std::size_t i = 1; i < grid.size(); ++i) {
      acc += gauss15(f, logr[i - 1], logr[i]);
      y[i] = acc;
    }
    tab->total.push_back(acc);
    tab->at_node.push_back(std::move(y));
  }
  // Total mass must be finite: the shell moment k = n - 1 has to converge.
  if (!tab->usable(n - 1)) {
    throw validation_error("density has divergent total mass (power too steep)");
  }
  return tab;
}

}  // namespace

// ---------------------------------------------------------------------------
// Measure

Measure::Measure(int n) : n_(n) { check_dim(n); }

Measure Measure::atom_at_origin(int n, double mass) {
  Measure m(n);
  m.add_atom(std::vector<double>(static_cast<std::size_t>(n), 0.0), mass);
  return m;
}

Measure Measure::single_atom(int n, std::vector<double> position,
                             double mass) {
  Measure m(n);
  m.add_atom(std::move(position), mass);
  return m;
}

Measure Measure::with_radial_density(int n, const RadialDensity& w) {
  Measure m(n);
  m.add_component(w, 1.0);
  return m;
}

void Measure::add_atom(std::vector<double> position, double mass) {
  if (position.size() != static_cast<std::size_t>(n_)) {
    throw validation_error("atom position has wrong dimension");
  }
  for (double c : position) {
    if (!std::isfinite(c)) throw validation_error("atom position not finite");
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw validation_error("atom mass must be positive finite");
  }
  atoms_.push_back(Atom{std::move(position), mass});
}

void Measure::add_component(const RadialDensity& w, double scale) {
  components_.push_back(DensityComponent{w, scale, build_tables(w, n_)});
}

bool Measure::radial() const {
  for (const auto& a : atoms_) {
    if (norm2(a.position) != 0.0) return false;
  }
  return true;
}

double Measure::atom_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.mass;
  return s;
}

double Measure::density_mass() const {
  const double san = sphere_area_constant(n_);
  double s = 0.0;
  for (const auto& c : components_) {
    s += c.scale * san * c.tables->eval(n_ - 1, c.tables->support);
  }
  return s;
}

double Measure::total_mass() const { return atom_mass() + density_mass(); }

double Measure::support_radius() const {
  double r = 0.0;
  for (const auto& a : atoms_) r = std::max(r, norm2(a.position));
  for (const auto& c : components_) r = std::max(r, c.density.support_radius());
  return r;
}

namespace {

// Lens over the chord [a, b], integrated directly against the density via
// the substitution r = rho - t sin(phi).  The Jacobian t cos(phi) absorbs
// the (n-1)/2-power edges of the cap fraction, so the integrand is smooth in
// phi across the whole chord, and 1 - cos(theta0) = (t cos phi)^2 / (2 rho r)
// is exact where the acos and moment-difference forms cancel to roundoff.
// Fixed positive-weight Gauss panels on cuts determined by (rho, t) and the
// density breakpoints alone, which preserves pointwise ordering across
// densities.
double lens_direct(int n, const DensityComponent& c, double rho, double t,
                   double a, double b) {
  const double inv_total = n == 3 ? 0.0 : 1.0 / colatitude_total(n);
  const auto f = [&](double phi) {
    const double tc = t * std::cos(phi);
    const double r = rho - t * std::sin(phi);
    if (!(r > 0.0)) return 0.0;
    const double u = std::min(2.0, tc * tc / (2.0 * rho * r));
    double frac;
    if (n == 3) {
      frac = 0.5 * u;  // cap fraction (t^2 - d^2)/(4 rho r)
    } else {
      const double theta0 = 2.0 * std::asin(std::sqrt(0.5 * u));
      frac = gauss15([n](double v) { return std::pow(std::sin(v), n - 2); },
                     0.0, theta0) *
             inv_total;
    }
    return c.density(r) * std::pow(r, n - 1) * frac * tc;
  };
  const auto to_phi = [&](double r) {
    return std::asin(std::clamp((rho - r) / t, -1.0, 1.0));
  };
  std::vector<double> cuts;
  cuts.push_back(to_phi(b));
  std::size_t kinks = 0;
  for (double bp : c.density.breakpoints()) {
    if (bp > a * (1.0 + 1e-14) && bp < b * (1.0 - 1e-14)) {
      cuts.push_back(to_phi(bp));
      ++kinks;
    }
  }
  if (kinks > 8) {
    // Many mild kinks (a modulated density): equal panels are as good and
    // keep the cost flat.
    cuts.resize(1);
  }
  cuts.push_back(to_phi(a));
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    if (!(hi > lo)) continue;
    const int panels =
        std::max(kinks > 8 ? 8 : 2, static_cast<int>((hi - lo) / 0.4) + 1);
    for (int j = 0; j < panels; ++j) {
      acc += gauss15(f, lo + (hi - lo) * j / panels,
                     lo + (hi - lo) * (j + 1) / panels);
    }
  }
  return std::max(0.0, acc) * sphere_area_constant(n);
}

}  // namespace

double Measure::component_ball_mass(const DensityComponent& c, double rho,
                                    double t) const {
  const double san = sphere_area_constant(n_);
  const MomentTables& T = *c.tables;
  const double Rs = T.support;
  if (rho == 0.0) return c.scale * san * T.eval(n_ - 1, std::min(t, Rs));
  if (t >= rho + Rs) return c.scale * san * T.eval(n_ - 1, Rs);
  if (rho - Rs >= t) return 0.0;

  // Shells with r < t - rho lie entirely inside the ball.
  double full = 0.0;
  if (t > rho) full = san * T.eval(n_ - 1, std::min(t - rho, Rs));

  const double a = std::abs(t - rho);
  const double b = std::min(rho + t, Rs);
  if (b <= a) return c.scale * full;

  double lens = 0.0;
  if (b - a <= 0.3 * a || (n_ != 3 && a > 0.0)) {
    lens = lens_direct(n_, c, rho, t, a, b);
  } else if (n_ == 3 && T.usable(1) && T.usable(3)) {
    // Partial shells, n = 3: the cap fraction (t^2 - (rho-r)^2)/(4 rho r) is
    // exact on (a, b), so the lens reduces to moment differences.
    const double m1 = T.eval(1, b) - T.eval(1, a);
    const double m2 = T.eval(2, b) - T.eval(2, a);
    const double m3 = T.eval(3, b) - T.eval(3, a);
    lens = (M_PI / rho) *
           ((t * t - rho * rho) * m1 + 2.0 * rho * m2 - m3);
    lens = std::max(0.0, lens);
  } else {
    // Direct lens quadrature in log r; needed for n != 3 and for power heads
    // too steep for the first moment.  The integrand carries r^{n-1} plus an
    // r from the substitution; the area constant is applied at the end.
    const auto f = [&](double x) {
      const double r = std::exp(x);
      return c.density(r) * std::pow(r, n_) *
             shell_cap_fraction(rho, r, t, n_);
    };
    double lo = a;
    if (lo <= 0.0) {
      lo = std::min(T.r0, 0.5 * b);
      // Head below lo: cap fraction is continuous there, treat it constant.
      const double e = n_ + T.head_exp;
      lens += T.head_coeff * shell_cap_fraction(rho, 0.5 * lo, t, n_) *
              std::pow(lo, e) / e;
    }
    std::vector<double> cuts{lo};
    for (double bp : c.density.breakpoints()) {
      if (bp > lo * (1.0 + 1e-14) && bp < b * (1.0 - 1e-14)) {
        cuts.push_back(bp);
      }
    }
    cuts.push_back(b);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      lens += adaptive_simpson(f, std::log(cuts[i]), std::log(cuts[i + 1]),
                               1e-10, 40);
    }
    lens = std::max(0.0, lens) * san;
  }
  return c.scale * (full + lens);
}

double Measure::ball_mass(const std::vector<double>& x, double t) const {
  if (x.size() != static_cast<std::size_t>(n_)) {
    throw validation_error("ball_mass: point has wrong dimension");
  }
  if (!(t > 0.0)) throw validation_error("ball_mass: radius must be > 0");
  double s = 0.0;
  for (const auto& a : atoms_) {
    if (dist(a.position, x) < t) s += a.mass;
  }
  const double rho = norm2(x);
  for (const auto& c : components_) s += component_ball_mass(c, rho, t);
  return s;
}

double Measure::ball_mass_radial(double rho, double t) const {
  if (!(rho >= 0.0) || !(t > 0.0)) {
    throw validation_error("ball_mass: need rho >= 0, t > 0");
  }
  double s = 0.0;
  for (const auto& a : atoms_) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.position.size(); ++i) {
      const double d = (i == 0 ? a.position[i] - rho : a.position[i]);
      d2 += d * d;
    }
    if (std::sqrt(d2) < t) s += a.mass;
  }
  for (const auto& c : components_) s += component_ball_mass(c, rho, t);
  return s;
}

double Measure::center_ball_mass(double t) const {
  return ball_mass_radial(0.0, t);
}

std::vector<double> Measure::ball_mass_kink_radii_radial(double rho) const {
  std::vector<double> out;
  for (const auto& a : atoms_) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.position.size(); ++i) {
      const double d = (i == 0 ? a.position[i] - rho : a.position[i]);
      d2 += d * d;
    }
    const double d = std::sqrt(d2);
    if (d > 0.0) out.push_back(d);
  }
  for (const auto& c : components_) {
    if (rho > 0.0) out.push_back(rho);
    for (double bp : c.density.breakpoints()) {
      if (std::abs(rho - bp) > 0.0) out.push_back(std::abs(rho - bp));
      out.push_back(rho + bp);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) {
                          return b - a <= 1e-12 * std::max(std::abs(a), b);
                        }),
            out.end());
  return out;
}

std::vector<double> Measure::ball_mass_kink_radii(
    const std::vector<double>& x) const {
  if (x.size() != static_cast<std::size_t>(n_)) {
    throw validation_error("kink radii: point has wrong dimension");
  }
  std::vector<double> out;
  for (const auto& a : atoms_) {
    const double d = dist(a.position, x);
    if (d > 0.0) out.push_back(d);
  }
  const double rho = norm2(x);
  for (const auto& c : components_) {
    if (rho > 0.0) out.push_back(rho);
    for (double bp : c.density.breakpoints()) {
      if (std::abs(rho - bp) > 0.0) out.push_back(std::abs(rho - bp));
      out.push_back(rho + bp);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) {
                          return b - a <= 1e-12 * std::max(std::abs(a), b);
                        }),
            out.end());
  return out;
}

double Measure::radial_integral(const std::function<double(double)>& h,
                                bool include_atoms) const {
  double s = 0.0;
  if (include_atoms) {
    for (const auto& a : atoms_) s += h(norm2(a.position)) * a.mass;
  }
  const double san = sphere_area_constant(n_);
  for (const auto& c : components_) {
    const MomentTables& T = *c.tables;
    const double Rs = T.support;
    const double lo = T.r0;
    // Head: h is treated as constant below the first table node; the mass
    // there is a vanishing fraction of the total.
    const double e = n_ + T.head_exp;
    double part = T.head_coeff * h(0.5 * lo) * std::pow(lo, e) / e;
    const auto f = [&](double x) {
      const double r = std::exp(x);
      return h(r) * c.density(r) * std::pow(r, n_);
    };
    std::vector<double> cuts{lo};
    for (double bp : c.density.breakpoints()) {
      if (bp > lo * (1.0 + 1e-14) && bp < Rs * (1.0 - 1e-14)) {
        cuts.push_back(bp);
      }
    }
    cuts.push_back(Rs);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      part += adaptive_simpson(f, std::log(cuts[i]), std::log(cuts[i + 1]),
                               1e-10, 40);
    }
    s += c.scale * san * part;
  }
  return s;
}

Measure Measure::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw validation_error("scale factor must be positive finite");
  }
  Measure m(n_);
  m.atoms_ = atoms_;
  for (auto& a : m.atoms_) a.mass *= factor;
  m.components_ = components_;
  for (auto& c : m.components_) c.scale *= factor;
  return m;
}

Measure Measure::plus(const Measure& other) const {
  if (other.n_ != n_) throw validation_error("dimension mismatch in plus");
  Measure m(n_);
  m.atoms_ = atoms_;
  m.atoms_.insert(m.atoms_.end(), other.atoms_.begin(), other.atoms_.end());
  m.components_ = components_;
  m.components_.insert(m.components_.end(), other.components_.begin(),
                       other.components_.end());
  return m;
}

Measure Measure::restricted_to_ball(double R) const {
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw validation_error("restriction radius must be positive finite");
  }
  Measure m(n_);
  for (const auto& a : atoms_) {
    if (norm2(a.position) < R) m.atoms_.push_back(a);
  }
  for (const auto& c : components_) {
    if (c.density.support_radius() <= R) {
      m.components_.push_back(c);  // untouched, tables shared
    } else {
      m.add_component(c.density.truncated(R), c.scale);
    }
  }
  return m;
}

Measure with_density_scaled(const Measure& m, double factor) {
  return m.scaled(factor);
}

Measure plus_measure(const Measure& a, const Measure& b) { return a.plus(b); }

Measure pointwise_scaled(const Measure& m, const RadialProfile& factor) {
  Measure out(m.dimension());
  for (const auto& c : m.density_components()) {
    out.add_component(RadialDensity::modulated(c.density, factor), c.scale);
  }
  for (const auto& a : m.atoms()) {
    const double f = factor(norm2(a.position));
    if (f > 0.0) out.add_atom(a.position, a.mass * f);
  }
  return out;
}

Measure restrict_to_ball(const Measure& m, double R) {
  return m.restricted_to_ball(R);
}

}  // namespace wolff
