#include "wolfflab/conditions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "wolfflab/errors.hpp"
#include "wolfflab/parallel.hpp"
#include "wolfflab/quadrature.hpp"

namespace wolff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* kind_name(PotentialKind k) {
  switch (k) {
    case PotentialKind::Wp:
      return "Wp";
    case PotentialKind::Wq:
      return "Wq";
    default:
      return "WG";
  }
}

// Potential of the full measure sampled on six decades below the support
// edge, plus its value at the origin when atoms sit there.
struct PotProfile {
  std::vector<double> radii;
  std::vector<double> vals;
  double center = 0.0;
  bool infinite_everywhere = false;
};

using RadialEval = std::function<double(double)>;

RadialEval kernel_eval(const SublinearLaw& law, PotentialKind kind,
                       const Measure& sigma, const WolffConfig& cfg) {
  const NFunction& nf = law.nf();
  switch (kind) {
    case PotentialKind::Wp:
      return [&nf, &sigma, cfg](double rho) {
        return wolff_p_point_radial(nf.p(), nf.n(), sigma, rho, cfg);
      };
    case PotentialKind::Wq:
      return [&nf, &sigma, cfg](double rho) {
        return wolff_p_point_radial(nf.q(), nf.n(), sigma, rho, cfg);
      };
    default:
      return [&nf, &sigma, cfg](double rho) {
        return wolff_point_radial(nf, sigma, rho, cfg);
      };
  }
}

PotProfile build_profile(const RadialEval& W, const Measure& sigma,
                         int points) {
  PotProfile out;
  const double Rs = sigma.support_radius();
  try {
    if (sigma.has_atoms()) out.center = W(0.0);
    if (Rs > 0.0) {
      const double r_lo = Rs * 1e-6;
      const double la = std::log(r_lo), lb = std::log(Rs);
      out.radii.resize(points);
      out.vals.resize(points);
      for (int i = 0; i < points; ++i) {
        out.radii[i] = std::exp(la + (lb - la) * i / (points - 1));
      }
      out.radii.front() = r_lo;
      out.radii.back() = Rs;
      parallel_for(static_cast<std::size_t>(points), [&](std::size_t i) {
        out.vals[i] = W(out.radii[i]);
      });
    }
  } catch (const regime_error&) {
    // Infinite-range potential with growth exponent at or above the
    // dimension: identically infinite for this measure.
    out.infinite_everywhere = true;
  }
  return out;
}

// Least-squares slope of log I against log r over [i0, i1), skipping
// degenerate samples.  NaN when fewer than two usable points remain.
double fit_slope(const std::vector<double>& r, const std::vector<double>& I,
                 std::size_t i0, std::size_t i1) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = i0; i < i1; ++i) {
    if (!(I[i] > 0.0) || !std::isfinite(I[i])) continue;
    const double x = std::log(r[i]), y = std::log(I[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  const double det = m * sxx - sx * sx;
  if (det == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / det;
}

// One modular integral against sigma, with the potential supplied as a
// precomputed profile and the composition h applied to it.
Verdict modular_with_profile(const std::string& label,
                             const std::function<double(double)>& h,
                             const Measure& sigma, const PotProfile& prof,
                             const ModularOptions& opts) {
  Verdict out;
  out.integral = label;
  if (sigma.zero()) return out;

  if (prof.infinite_everywhere) {
    out.value_estimate = kInf;
    out.tail_exponent = 0.0;
    out.status = FiniteStatus::divergent;
    out.witness = "potential_infinite_at_every_point";
    return out;
  }

  double atom_part = 0.0;
  if (sigma.has_atoms()) {
    const double hc = std::isinf(prof.center) ? kInf : h(prof.center);
    if (!std::isfinite(hc)) {
      out.value_estimate = kInf;
      out.tail_exponent = 0.0;
      out.status = FiniteStatus::divergent;
      out.witness = "atom_with_infinite_potential";
      return out;
    }
    atom_part = hc * sigma.atom_mass();
  }

  if (sigma.density_components().empty() || prof.radii.empty()) {
    out.value_estimate = atom_part;
    return out;
  }

  const int n = sigma.dimension();
  const double Rs = prof.radii.back();
  const double r_lo = prof.radii.front();
  const RadialProfile W(prof.radii, prof.vals);
  const auto wsum = [&sigma](double r) {
    double s = 0.0;
    for (const auto& c : sigma.density_components()) {
      s += c.scale * c.density(r);
    }
    return s;
  };
  const auto integrand = [&](double r) {
    return h(W(r)) * wsum(r) * std::pow(r, n - 1);
  };

  // Fitted small-r power of the integrand decides integrability across the
  // unsampled head; the same exponent in the outgoing variable is reported.
  std::vector<double> I(prof.radii.size());
  for (std::size_t i = 0; i < I.size(); ++i) I[i] = integrand(prof.radii[i]);
  std::size_t head_end = 0;
  while (head_end < prof.radii.size() && prof.radii[head_end] <= 10.0 * r_lo) {
    ++head_end;
  }
  std::size_t edge_begin = prof.radii.size();
  while (edge_begin > 0 && prof.radii[edge_begin - 1] >= 0.1 * Rs) {
    --edge_begin;
  }
  const double e0_raw = fit_slope(prof.radii, I, 0, head_end);
  const double e0 = std::isnan(e0_raw) ? 0.0 : e0_raw;
  const double edge_raw =
      fit_slope(prof.radii, I, edge_begin, prof.radii.size());
  out.edge_exponent = std::isnan(edge_raw) ? 0.0 : edge_raw;
  out.tail_exponent = -e0 - 2.0;

  if (e0 < -1.1) {
    out.value_estimate = kInf;
    out.status = FiniteStatus::divergent;
    out.witness = "integrand_head_steeper_than_1_over_r";
    return out;
  }

  std::vector<double> pts{r_lo};
  for (const auto& c : sigma.density_components()) {
    for (double b : c.density.breakpoints()) {
      if (b > r_lo && b < Rs) pts.push_back(b);
    }
  }
  pts.push_back(Rs);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const double quad_tol =
      std::clamp(1e-9 * opts.tol_scale, 1e-13, 1e-3);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    acc += adaptive_simpson(
        [&](double x) {
          const double r = std::exp(x);
          return integrand(r) * r;
        },
        std::log(pts[i]), std::log(pts[i + 1]), quad_tol, 40);
  }

  if (std::abs(e0 + 1.0) <= 0.1) {
    out.status = FiniteStatus::inconclusive;
    out.value_estimate =
        atom_part + sphere_area_constant(sigma.dimension()) * acc;
    return out;
  }
  // Analytic continuation of the fitted power below the sampled range.
  const double head = (e0 > -0.9) ? I.front() * r_lo / (e0 + 1.0) : 0.0;
  out.value_estimate =
      atom_part + sphere_area_constant(sigma.dimension()) * (acc + head);
  if (!std::isfinite(out.value_estimate)) {
    out.value_estimate = kInf;
    out.status = FiniteStatus::divergent;
    out.witness = "nonfinite_numeric_value";
  }
  return out;
}

void check_common(const SublinearLaw& law, const Measure& sigma,
                  const WolffConfig& cfg) {
  cfg.validate();
  if (sigma.dimension() != law.nf().n()) {
    throw validation_error("conditions: dimension mismatch");
  }
  if (!sigma.radial()) {
    throw validation_error(
        "conditions: measure must be radial (atoms at the origin)");
  }
}

std::array<double, 3> exponent_set(const SublinearLaw& law) {
  const double p = law.nf().p(), q = law.nf().q(), g = law.gamma();
  return {1.0 / (1.0 - g), (p - 1.0) / (p - 1.0 - g * (q - 1.0)),
          (q - 1.0) / (q - 1.0 - g * (p - 1.0))};
}

FiniteStatus combine(const std::vector<Verdict>& entries) {
  FiniteStatus overall = FiniteStatus::finite;
  for (const auto& v : entries) {
    if (v.status == FiniteStatus::divergent) return FiniteStatus::divergent;
    if (v.status == FiniteStatus::inconclusive) {
      overall = FiniteStatus::inconclusive;
    }
  }
  return overall;
}

}  // namespace

const char* to_string(FiniteStatus s) {
  switch (s) {
    case FiniteStatus::finite:
      return "finite";
    case FiniteStatus::divergent:
      return "divergent";
    default:
      return "inconclusive";
  }
}

Verdict modular_of_power(const SublinearLaw& law, const Measure& sigma,
                         PotentialKind kind, double e, const WolffConfig& cfg,
                         const ModularOptions& opts) {
  check_common(law, sigma, cfg);
  if (!(e > 0.0) || !std::isfinite(e)) {
    throw validation_error("modular_of_power: exponent must be positive");
  }
  if (opts.profile_points < 16 || opts.profile_points > 2000000) {
    throw validation_error("modular_of_power: profile_points out of range");
  }
  const PotProfile prof =
      build_profile(kernel_eval(law, kind, sigma, cfg), sigma,
                    opts.profile_points);
  const std::string label =
      std::string(kind_name(kind)) + "^" + fmt_double(e);
  return modular_with_profile(
      label, [&law, e](double W) { return law.F(std::pow(W, e)); }, sigma,
      prof, opts);
}

VerdictBundle check_sufficient(const SublinearLaw& law, const Measure& sigma,
                               const WolffConfig& cfg,
                               const ModularOptions& opts) {
  check_common(law, sigma, cfg);
  VerdictBundle b;
  for (PotentialKind kind : {PotentialKind::Wp, PotentialKind::Wq}) {
    const PotProfile prof =
        build_profile(kernel_eval(law, kind, sigma, cfg), sigma,
                      opts.profile_points);
    for (double e : exponent_set(law)) {
      const std::string label =
          std::string(kind_name(kind)) + "^" + fmt_double(e);
      b.entries.push_back(modular_with_profile(
          label, [&law, e](double W) { return law.F(std::pow(W, e)); },
          sigma, prof, opts));
    }
  }
  b.overall = combine(b.entries);
  return b;
}

Verdict check_necessary(const SublinearLaw& law, const Measure& sigma,
                        const WolffConfig& cfg, const ModularOptions& opts) {
  return modular_of_power(law, sigma, PotentialKind::WG,
                          1.0 / (1.0 - law.gamma()), cfg, opts);
}

VerdictBundle consolidated_condition(const SublinearLaw& law,
                                     const Measure& sigma,
                                     const WolffConfig& cfg,
                                     const ModularOptions& opts) {
  check_common(law, sigma, cfg);
  VerdictBundle b;
  const PotProfile prof =
      build_profile(kernel_eval(law, PotentialKind::WG, sigma, cfg), sigma,
                    opts.profile_points);
  for (double e : exponent_set(law)) {
    const std::string label = std::string("WG^") + fmt_double(e);
    b.entries.push_back(modular_with_profile(
        label, [&law, e](double W) { return law.F(std::pow(W, e)); }, sigma,
        prof, opts));
  }
  b.overall = combine(b.entries);
  return b;
}

Claim2Report claim2_inequality_check(const Measure& sigma,
                                     const RadialProfile& u, double r_exp,
                                     double s_exp, double alpha,
                                     const WolffConfig& cfg,
                                     const ModularOptions& opts) {
  cfg.validate();
  if (!sigma.radial()) {
    throw validation_error("claim2: measure must be radial");
  }
  if (!(s_exp > 1.0) || !std::isfinite(s_exp)) {
    throw validation_error("claim2: need s > 1");
  }
  if (!(r_exp > 0.0) || !(r_exp < s_exp - 1.0)) {
    throw validation_error("claim2: need 0 < r < s - 1");
  }
  if (!(alpha > r_exp - 1.0) || !std::isfinite(alpha)) {
    throw validation_error("claim2: need alpha > r - 1");
  }
  const int n = sigma.dimension();
  Claim2Report rep;

  // Membership of (W_s sigma)^{(s-1)/(s-1-r)} in L^{1+alpha}(dsigma) first.
  const double b_exp = (s_exp - 1.0) / (s_exp - 1.0 - r_exp);
  const auto Ws_sigma = [&](double rho) {
    return wolff_p_point_radial(s_exp, n, sigma, rho, cfg);
  };
  const double prereq_pow = b_exp * (1.0 + alpha);
  const auto prereq_at = [&](const ModularOptions& o) {
    const PotProfile prof = build_profile(Ws_sigma, sigma, o.profile_points);
    return modular_with_profile(
        "prereq:(Ws_sigma)^" + fmt_double(b_exp) + "_in_L^" +
            fmt_double(1.0 + alpha),
        [prereq_pow](double W) { return std::pow(W, prereq_pow); }, sigma,
        prof, o);
  };
  rep.prerequisite = prereq_at(opts);
  if (rep.prerequisite.status != FiniteStatus::finite) {
    rep.status = FiniteStatus::inconclusive;
    rep.pass = false;
    return rep;
  }

  bool u_zero = true;
  for (double v : u.values()) u_zero = u_zero && v == 0.0;
  if (u_zero || sigma.zero()) {
    rep.status = FiniteStatus::finite;
    rep.pass = true;
    return rep;
  }

  std::vector<double> ur(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    ur[i] = std::pow(u.values()[i], r_exp);
  }
  const Measure nu = pointwise_scaled(sigma, RadialProfile(u.radii(), ur));
  const auto Ws_nu = [&](double rho) {
    return wolff_p_point_radial(s_exp, n, nu, rho, cfg);
  };
  const auto lhs_at = [&](const ModularOptions& o) {
    const PotProfile prof = build_profile(Ws_nu, sigma, o.profile_points);
    const Verdict v = modular_with_profile(
        "lhs", [alpha](double W) { return std::pow(W, 1.0 + alpha); }, sigma,
        prof, o);
    return v;
  };
  const Verdict lhs_v = lhs_at(opts);
  const double rhs_int = sigma.radial_integral(
      [&](double r) { return std::pow(u(r), 1.0 + alpha); }, true);
  rep.lhs = lhs_v.value_estimate;
  rep.rhs_base = std::pow(rhs_int, r_exp / (s_exp - 1.0));
  if (lhs_v.status != FiniteStatus::finite || !(rep.rhs_base > 0.0) ||
      !std::isfinite(rep.rhs_base)) {
    rep.status = lhs_v.status == FiniteStatus::finite
                     ? FiniteStatus::inconclusive
                     : lhs_v.status;
    rep.pass = false;
    return rep;
  }
  rep.implied_constant = rep.lhs / rep.rhs_base;

  ModularOptions fine = opts;
  fine.profile_points = opts.profile_points * 2;
  fine.tol_scale = opts.tol_scale * 0.5;
  const Verdict lhs_f = lhs_at(fine);
  rep.refined_constant = lhs_f.value_estimate / rep.rhs_base;
  rep.stability =
      std::abs(rep.refined_constant / rep.implied_constant - 1.0);
  rep.status = FiniteStatus::finite;
  rep.pass = std::isfinite(rep.implied_constant) && rep.stability <= 0.2;
  return rep;
}

}  // namespace wolff
