#include "wolfflab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wolfflab/errors.hpp"

namespace wolff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlack = 1e-6;  // relative slack on every inequality check

void check_pq(int n, double p, double q) {
  // Same domain as the kernel itself.
  NFunction probe(p, q, n);
  (void)probe;
}

double c_recursion_factor(int n, double p, double q, double gamma) {
  const double lam = lambda_const(n, p, q, gamma / (1.0 - gamma));
  return lam * std::pow(p / q, 2.0 / (p - 1.0));
}

}  // namespace

double lambda_const(int n, double p, double q, double alpha) {
  check_pq(n, p, q);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw validation_error("lambda_const: alpha must be positive finite");
  }
  const double base = p / (std::pow(2.0, n - 1) * q);
  const double expo = alpha * (q - 1.0) / ((p - 1.0) * (p - 1.0));
  return (1.0 / (1.0 + alpha)) * std::pow(p / q, 2.0 / (p - 1.0)) *
         std::pow(base, expo);
}

double epsilon0(int n, double p, double q, double gamma) {
  check_pq(n, p, q);
  if (!gamma_admissible(p, q, gamma)) {
    throw validation_error(
        "epsilon0: gamma outside (0, min((p-1)/(q-1), 1/(q-p)))");
  }
  const double e = (p - 1.0) / (p - 1.0 - gamma * (q - 1.0));
  return std::pow(c_recursion_factor(n, p, q, gamma), e);
}

RecursionAudit recursion_limits(int n, double p, double q, double gamma,
                                int j_max, double c1) {
  check_pq(n, p, q);
  if (!gamma_admissible(p, q, gamma)) {
    throw validation_error(
        "recursion_limits: gamma outside the admissible interval");
  }
  if (j_max < 1 || j_max > 100000) {
    throw validation_error("recursion_limits: j_max must be in [1, 1e5]");
  }
  if (!(c1 > 0.0) || !std::isfinite(c1)) {
    throw validation_error("recursion_limits: c1 must be positive finite");
  }

  RecursionAudit a;
  a.delta_limit = 1.0 / (1.0 - gamma);
  const double kappa = c_recursion_factor(n, p, q, gamma);
  const double theta = gamma * (q - 1.0) / (p - 1.0);  // contraction rate < 1
  const double e = (p - 1.0) / (p - 1.0 - gamma * (q - 1.0));
  a.c_star = std::pow(kappa, e);
  const double lam = lambda_const(n, p, q, gamma / (1.0 - gamma));
  a.c_alt_closed =
      std::pow(lam, e) *
      std::pow(p / q, 2.0 * (p - 1.0) /
                          ((p - 1.0) * (q - 1.0) -
                           gamma * (q - 1.0) * (q - 1.0)));
  a.alt_ratio = a.c_alt_closed / a.c_star;

  a.delta_seq.reserve(j_max);
  a.c_seq.reserve(j_max);
  double delta = 1.0, c = c1;
  a.steps_to_delta_limit = j_max;
  for (int j = 1; j <= j_max; ++j) {
    a.delta_seq.push_back(delta);
    a.c_seq.push_back(c);
    if (a.steps_to_delta_limit == j_max &&
        std::abs(delta - a.delta_limit) <= 1e-12 * a.delta_limit) {
      a.steps_to_delta_limit = j;
    }
    delta = 1.0 + gamma * delta;
    c = kappa * std::pow(c, theta);
  }
  return a;
}

std::pair<double, double> envelope_ratio_bounds(const NFunction& nf,
                                                double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw validation_error("envelope_ratio_bounds: alpha must be positive");
  }
  const double p = nf.p(), q = nf.q();
  const double ap = std::pow(alpha, 1.0 / (p - 1.0));
  const double aq = std::pow(alpha, 1.0 / (q - 1.0));
  const double lo = std::pow(p / q, 1.0 / (p - 1.0)) * std::min(ap, aq);
  const double hi = std::pow(q / p, 1.0 / (p - 1.0)) * std::max(ap, aq);
  return {lo, hi};
}

VerifyReport verify_lower_bound(const SublinearLaw& law, const Measure& sigma,
                                const RadialProfile& u, double C,
                                const WolffConfig& cfg) {
  cfg.validate();
  if (!(C > 0.0) || !std::isfinite(C)) {
    throw validation_error("verify_lower_bound: C must be positive finite");
  }
  if (sigma.dimension() != law.nf().n()) {
    throw validation_error("verify_lower_bound: dimension mismatch");
  }
  if (!sigma.radial()) {
    throw validation_error("verify_lower_bound: measure must be radial");
  }
  VerifyReport rep;
  rep.check = "lower_bound";
  if (sigma.zero()) {
    rep.margin = 0.0;
    rep.pass = true;
    rep.details.push_back({"vacuous", 1.0});
    return rep;
  }
  const double e = 1.0 / (1.0 - law.gamma());
  const RadialProfile W =
      wolff_radial_profile(law.nf(), sigma, u.radii(), cfg);
  double min_ratio = kInf, min_radius = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double w = W.values()[i];
    if (!(w > 0.0)) continue;
    const double ratio = u.values()[i] / std::pow(w, e);
    if (ratio < min_ratio) {
      min_ratio = ratio;
      min_radius = u.radii()[i];
    }
  }
  if (!std::isfinite(min_ratio)) {
    rep.margin = 0.0;
    rep.pass = true;
    rep.details.push_back({"vacuous", 1.0});
    return rep;
  }
  rep.margin = min_ratio / C - 1.0 + kSlack;
  rep.pass = rep.margin >= 0.0;
  rep.details.push_back({"min_ratio", min_ratio});
  rep.details.push_back({"C", C});
  rep.details.push_back({"radius_at_min", min_radius});
  return rep;
}

VerifyReport verify_lambda_inequality(const NFunction& nf,
                                      const Measure& sigma, double alpha,
                                      const std::vector<double>& grid,
                                      const WolffConfig& cfg) {
  cfg.validate();
  if (sigma.dimension() != nf.n()) {
    throw validation_error("verify_lambda_inequality: dimension mismatch");
  }
  if (!sigma.radial()) {
    throw validation_error("verify_lambda_inequality: measure must be radial");
  }
  if (sigma.has_atoms()) {
    throw validation_error(
        "verify_lambda_inequality: atomic measures are unsupported, the "
        "modulating factor lives on the density part only");
  }
  if (grid.size() < 2) {
    throw validation_error("verify_lambda_inequality: need >= 2 grid radii");
  }
  const double lam = lambda_const(nf.n(), nf.p(), nf.q(), alpha);
  VerifyReport rep;
  rep.check = "lambda_inequality";
  if (sigma.zero()) {
    rep.margin = 0.0;
    rep.pass = true;
    rep.details.push_back({"vacuous", 1.0});
    rep.details.push_back({"lambda", lam});
    return rep;
  }
  const RadialProfile W = wolff_radial_profile(nf, sigma, grid, cfg);
  std::vector<double> phi(W.size());
  for (std::size_t i = 0; i < W.size(); ++i) {
    phi[i] = nf.g(std::pow(W.values()[i], alpha));
  }
  const Measure mod = pointwise_scaled(sigma, RadialProfile(grid, phi));
  const RadialProfile lhs = wolff_radial_profile(nf, mod, grid, cfg);
  double min_ratio = kInf, min_radius = 0.0;
  for (std::size_t i = 0; i < W.size(); ++i) {
    const double w = W.values()[i];
    if (!(w > 0.0)) continue;
    const double ratio = lhs.values()[i] / std::pow(w, 1.0 + alpha);
    if (ratio < min_ratio) {
      min_ratio = ratio;
      min_radius = grid[i];
    }
  }
  if (!std::isfinite(min_ratio)) {
    rep.margin = 0.0;
    rep.pass = true;
    rep.details.push_back({"vacuous", 1.0});
    rep.details.push_back({"lambda", lam});
    return rep;
  }
  rep.margin = min_ratio / lam - 1.0 + kSlack;
  rep.pass = rep.margin >= 0.0;
  rep.details.push_back({"min_ratio", min_ratio});
  rep.details.push_back({"lambda", lam});
  rep.details.push_back({"alpha", alpha});
  rep.details.push_back({"radius_at_min", min_radius});
  return rep;
}

VerifyReport verify_sandwich(const NFunction& nf, const Measure& mu,
                             const std::vector<double>& grid,
                             const WolffConfig& cfg) {
  cfg.validate();
  if (mu.dimension() != nf.n()) {
    throw validation_error("verify_sandwich: dimension mismatch");
  }
  if (!mu.radial()) {
    throw validation_error("verify_sandwich: measure must be radial");
  }
  if (grid.size() < 2) {
    throw validation_error("verify_sandwich: need >= 2 grid radii");
  }
  const auto [k_lo, k_hi] =
      envelope_ratio_bounds(nf, 1.0 / sphere_area_constant(nf.n()));
  VerifyReport rep;
  rep.check = "sandwich";
  if (mu.zero()) {
    rep.margin = 0.0;
    rep.pass = true;
    rep.details.push_back({"vacuous", 1.0});
    return rep;
  }
  WolffConfig cfg_u = cfg;
  cfg_u.A = sphere_area_constant(nf.n());
  WolffConfig cfg_w = cfg;
  cfg_w.A = 1.0;
  double min_ratio = kInf, max_ratio = 0.0;
  for (double r : grid) {
    const double u = wolff_point_radial(nf, mu, r, cfg_u);
    const double w = wolff_point_radial(nf, mu, r, cfg_w);
    if (!(w > 0.0)) continue;
    const double ratio = u / w;
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
  }
  if (!std::isfinite(min_ratio)) {
    rep.margin = 0.0;
    rep.pass = true;
    rep.details.push_back({"vacuous", 1.0});
    return rep;
  }
  const double m_lo = min_ratio / k_lo - 1.0 + kSlack;
  const double m_hi = 1.0 - max_ratio / k_hi + kSlack;
  rep.margin = std::min(m_lo, m_hi);
  rep.pass = rep.margin >= 0.0;
  rep.details.push_back({"k_lo", k_lo});
  rep.details.push_back({"k_hi", k_hi});
  rep.details.push_back({"min_ratio", min_ratio});
  rep.details.push_back({"max_ratio", max_ratio});
  return rep;
}

VerifyReport verify_truncated_center_bound(const NFunction& nf,
                                           const Measure& mu,
                                           const std::vector<double>& R_list,
                                           const WolffConfig& cfg) {
  cfg.validate();
  if (mu.dimension() != nf.n()) {
    throw validation_error("verify_truncated_center_bound: dimension mismatch");
  }
  if (!mu.radial()) {
    throw validation_error("verify_truncated_center_bound: measure not radial");
  }
  if (R_list.size() < 2) {
    throw validation_error("verify_truncated_center_bound: need >= 2 radii");
  }
  for (std::size_t i = 0; i < R_list.size(); ++i) {
    if (!(R_list[i] > 0.0) || !std::isfinite(R_list[i]) ||
        (i > 0 && !(R_list[i] > R_list[i - 1]))) {
      throw validation_error(
          "verify_truncated_center_bound: radii must be positive increasing");
    }
  }
  VerifyReport rep;
  rep.check = "truncated_center_bound";
  if (mu.zero()) {
    rep.margin = 0.0;
    rep.pass = true;
    rep.details.push_back({"vacuous", 1.0});
    return rep;
  }

  // Probe the center once; if either quantity is infinite there, step off to
  // delta and compare the ratios at that nearby point instead.
  WolffConfig cfg_R = cfg;
  cfg_R.R = R_list.front();
  double x0 = 0.0;
  const double u_center = radial_solution_point(nf, mu, 0.0, cfg);
  const double w_center = wolff_point_radial(nf, mu, 0.0, cfg_R);
  if (!std::isfinite(u_center) || !std::isfinite(w_center)) {
    x0 = 1e-6 * R_list.front();
  }

  double min1 = kInf, max1 = 0.0, min2 = kInf, max2 = 0.0;
  const double u0 = radial_solution_point(nf, mu, x0, cfg);
  for (double R : R_list) {
    cfg_R.R = R;
    const double wR = wolff_point_radial(nf, mu, x0, cfg_R);
    const double u_inf = radial_solution_point(nf, mu, x0 + R, cfg);
    if (!(wR > 0.0)) continue;
    const double r1 = u0 / wR;
    const double r2 = u0 / (u_inf + wR);
    min1 = std::min(min1, r1);
    max1 = std::max(max1, r1);
    min2 = std::min(min2, r2);
    max2 = std::max(max2, r2);
    rep.details.push_back({"ratio_u_over_WR_at_R=" + std::to_string(R), r1});
    rep.details.push_back(
        {"ratio_u_over_infu_plus_WR_at_R=" + std::to_string(R), r2});
  }
  if (!std::isfinite(min1)) {
    rep.margin = 0.0;
    rep.pass = true;
    rep.details.push_back({"vacuous", 1.0});
    return rep;
  }
  const double spread1 = max1 / min1;
  const double spread2 = max2 / min2;
  const double cap = 1e3;
  rep.margin = 1.0 - std::max(spread1, spread2) / cap;
  rep.pass = rep.margin >= 0.0;
  rep.details.push_back({"spread_u_over_WR", spread1});
  rep.details.push_back({"spread_u_over_infu_plus_WR", spread2});
  rep.details.push_back({"delta_used", x0});
  return rep;
}

ConstantsBundle constants_bundle(int n, double p, double q, double gamma) {
  const RecursionAudit a = recursion_limits(n, p, q, gamma);
  ConstantsBundle b;
  b.n = n;
  b.p = p;
  b.q = q;
  b.gamma = gamma;
  b.alpha_auto = gamma / (1.0 - gamma);
  b.lambda_auto = lambda_const(n, p, q, b.alpha_auto);
  b.eps0 = epsilon0(n, p, q, gamma);
  b.delta_limit = a.delta_limit;
  b.c_star = a.c_star;
  b.c_alt_closed = a.c_alt_closed;
  b.alt_ratio = a.alt_ratio;
  return b;
}

}  // namespace wolff
