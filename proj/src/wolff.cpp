#include "wolfflab/wolff.hpp"

#include <algorithm>
#include <cmath>

#include "wolfflab/errors.hpp"
#include "wolfflab/parallel.hpp"

namespace wolff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CoreInput {
  std::function<double(double)> ball;  // t -> sigma(B(x,t))
  std::vector<double> kinks;           // ascending positive
  double tail_start = 1.0;             // ball == total_mass beyond this
  double total_mass = 0.0;
  double t_lo = 0.0;                   // lower limit; 0 integrates from 0
};

// int_T^inf (M/(A t^{n-1}))^{1/(p-1)} dt; finite exactly when p < n.
double tail_power_integral(const KernelView& k, double A, double M, double T) {
  const double e = (k.n - k.p_eff) / (k.p_eff - 1.0);
  return std::pow(M / A, 1.0 / (k.p_eff - 1.0)) * std::pow(T, -e) / e;
}

// Analytic closure of the far field from T.  ginv(s) = v(s) s^{1/(p-1)} with
// (1+eps)^{-1/(p-1)} <= v <= 1 and eps = s^{(q-p)/(p-1)}, evaluated at the
// largest tail argument, so the midpoint is within half the bracket width.
double tail_close_term(const KernelView& k, double A, double M, double T) {
  const double P = tail_power_integral(k, A, M, T);
  if (k.pure_power) return P;
  if (k.p_eff == k.q_eff) return std::pow(2.0, -1.0 / (k.p_eff - 1.0)) * P;
  const double arg = M / (A * std::pow(T, k.n - 1));
  const double eps = std::pow(arg, (k.q_eff - k.p_eff) / (k.p_eff - 1.0));
  const double v_lo = std::pow(1.0 + eps, -1.0 / (k.p_eff - 1.0));
  return 0.5 * (1.0 + v_lo) * P;
}

double integrate_core(const KernelView& k, const CoreInput& in,
                      const WolffConfig& cfg, FrozenWolffRule* rule) {
  const double A = cfg.A;
  const int n = k.n;
  const auto F = [&](double s) {
    const double t = std::exp(s);
    return t * k.ginv(in.ball(t) / (A * std::pow(t, n - 1)));
  };
  std::vector<QuadNode>* rec = rule ? &rule->nodes : nullptr;

  const bool infinite = !std::isfinite(cfg.R);
  const double hi =
      infinite ? std::max(in.tail_start, 2.0 * in.t_lo) : cfg.R;
  if (!(hi > in.t_lo)) return 0.0;

  std::vector<double> pts;
  if (in.t_lo > 0.0) pts.push_back(in.t_lo);
  // Kinks far below every other scale (an evaluation point sitting on a
  // breakpoint up to roundoff) would open absurdly wide segments; the
  // downward octave sweep covers that range with measured remainders.
  const double kink_floor = 1e-10 * hi;
  for (double kk : in.kinks) {
    if (kk > std::max(in.t_lo * (1.0 + 1e-14), kink_floor) &&
        kk < hi * (1.0 - 1e-14)) {
      pts.push_back(kk);
    }
  }
  pts.push_back(hi);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) {
                          return b - a <= 1e-14 * std::max(std::abs(a), b);
                        }),
            pts.end());

  double acc = 0.0;
  // Segment endpoints are nudged inward so a ball-mass jump exactly at a cut
  // (an atom entering the ball) is seen one-sidedly on both neighbors.
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i] * (1.0 + 5e-14);
    const double b = pts[i + 1] * (1.0 - 5e-14);
    if (!(b > a)) continue;
    acc += adaptive_simpson(F, std::log(a), std::log(b), cfg.rel_tol,
                            cfg.max_refinement_depth, rec);
  }

  // Below the first cut the integrand decays (no mass concentrates at the
  // center of integration; divergent cases were filtered by the callers), so
  // extend downward by octaves until the measured geometric remainder is
  // inside the error budget.
  if (in.t_lo == 0.0 && !pts.empty()) {
    double hi_t = pts.front();
    double prev = -1.0;
    int small_streak = 0;
    for (int j = 0; j < 1100 && hi_t > 1e-300; ++j) {
      const double lo_t = 0.5 * hi_t;
      const double seg = adaptive_simpson(
          F, std::log(lo_t) + 5e-14, std::log(hi_t) - 5e-14, cfg.rel_tol,
          cfg.max_refinement_depth, rec);
      acc += seg;
      bool stop = false;
      if (seg <= 0.0) {
        stop = ++small_streak >= 2;
      } else if (prev > 0.0 && seg < prev) {
        const double ratio = seg / prev;
        const double rem = seg * ratio / (1.0 - ratio);
        if (rem <= 0.25 * cfg.rel_tol * std::max(acc, 1e-300)) {
          stop = ++small_streak >= 2;
        } else {
          small_streak = 0;
        }
      } else {
        small_streak = 0;
      }
      prev = seg;
      if (stop) break;
      hi_t = lo_t;
    }
  }

  if (infinite) {
    const double M = in.total_mass;
    double T = hi;
    // Freezing demands extra tail margin: the closing term is recomputed at
    // replay time for measures that may carry much more mass.
    const double eps_cap =
        (rule ? 1e-6 : 1.0) *
        std::min(0.5, 1.0 / std::max(k.q_eff - k.p_eff, 1e-12));
    const double drop_cap = (rule ? 1e-6 : 1.0) * cfg.rel_tol;
    const auto Ftail = [&](double s) {
      const double t = std::exp(s);
      return t * k.ginv(M / (A * std::pow(t, n - 1)));
    };
    for (;;) {
      if (cfg.tail_mode == TailMode::hard_cutoff) {
        const double P = tail_power_integral(k, A, M, T);
        if (P <= drop_cap * std::max(acc, 1e-300)) break;
      } else if (k.pure_power || k.p_eff == k.q_eff) {
        // The kernel is an exact power there; the closure has no bracket.
        acc += tail_close_term(k, A, M, T);
        if (rule) rule->tail_T = T;
        break;
      } else {
        const double P = tail_power_integral(k, A, M, T);
        const double arg = M / (A * std::pow(T, n - 1));
        const double eps =
            std::pow(arg, (k.q_eff - k.p_eff) / (k.p_eff - 1.0));
        const double v_lo = std::pow(1.0 + eps, -1.0 / (k.p_eff - 1.0));
        const double width = (1.0 - v_lo) * P;
        const double term = 0.5 * (1.0 + v_lo) * P;
        if (eps <= eps_cap && width <= 0.5 * cfg.rel_tol * (acc + term)) {
          acc += term;
          if (rule) rule->tail_T = T;
          break;
        }
      }
      acc += adaptive_simpson(Ftail, std::log(T), std::log(2.0 * T),
                              cfg.rel_tol, cfg.max_refinement_depth, rec);
      T *= 2.0;
      if (T > 1e300) break;  // unreachable for p_eff < n; safety only
    }
  }
  return acc;
}

double replay_core(const KernelView& k, const CoreInput& in,
                   const WolffConfig& cfg, const FrozenWolffRule& rule) {
  double acc = 0.0;
  for (const QuadNode& nd : rule.nodes) {
    const double t = std::exp(nd.x);
    acc += nd.w * t *
           k.ginv(in.ball(t) / (cfg.A * std::pow(t, k.n - 1)));
  }
  if (rule.tail_T > 0.0) {
    acc += tail_close_term(k, cfg.A, in.total_mass, rule.tail_T);
  }
  return acc;
}

bool atom_exactly_at_radial(const Measure& m, double rho) {
  for (const auto& a : m.atoms()) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.position.size(); ++i) {
      const double d = (i == 0 ? a.position[i] - rho : a.position[i]);
      d2 += d * d;
    }
    if (d2 == 0.0) return true;
  }
  return false;
}

bool atom_exactly_at(const Measure& m, const std::vector<double>& x) {
  for (const auto& a : m.atoms()) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = a.position[i] - x[i];
      d2 += d * d;
    }
    if (d2 == 0.0) return true;
  }
  return false;
}

// Divergence of the integral at the center from the density head alone:
// w ~ c r^{-s0} gives ball mass ~ t^{n-s0}, integrand ~ t^{-(s0-1)/(q-1)},
// which fails to integrate at 0 exactly when s0 >= q_eff.
bool center_head_infinite(const KernelView& k, const Measure& m) {
  for (const auto& c : m.density_components()) {
    const double s0 = -c.density.head_exponent();
    if (c.density.head_coeff() > 0.0 && s0 >= k.q_eff) return true;
  }
  return false;
}

CoreInput radial_input(const Measure& m, double rho, double t_lo) {
  CoreInput in;
  in.ball = [&m, rho](double t) { return m.ball_mass_radial(rho, t); };
  in.kinks = m.ball_mass_kink_radii_radial(rho);
  const double supp = m.support_radius();
  in.tail_start = std::max(2.0 * (2.0 * supp + rho), 1e-30);
  in.total_mass = m.total_mass();
  in.t_lo = t_lo;
  return in;
}

// Shared preamble: trivial and divergent cases, then the core integral.
// Returns true with *out set when no quadrature is needed.
bool pointwise_shortcuts(const KernelView& k, const Measure& m, bool at_atom,
                         double rho, const WolffConfig& cfg, double* out) {
  cfg.validate();
  if (m.dimension() != k.n) {
    throw validation_error("measure dimension does not match the kernel");
  }
  if (m.zero()) {
    *out = 0.0;
    return true;
  }
  if (!std::isfinite(cfg.R) && k.p_eff >= k.n) {
    throw regime_error(
        "infinite-range potential diverges: growth exponent reaches the "
        "dimension, only the trivial potential exists");
  }
  if (at_atom && k.q_eff <= k.n) {
    *out = kInf;
    return true;
  }
  if (rho == 0.0 && center_head_infinite(k, m)) {
    *out = kInf;
    return true;
  }
  return false;
}

double eval_radial(const KernelView& k, const Measure& m, double rho,
                   const WolffConfig& cfg, FrozenWolffRule* rule) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw validation_error("evaluation radius must be finite and >= 0");
  }
  double out = 0.0;
  if (pointwise_shortcuts(k, m, atom_exactly_at_radial(m, rho), rho, cfg,
                          &out)) {
    return out;
  }
  const CoreInput in = radial_input(m, rho, 0.0);
  return integrate_core(k, in, cfg, rule);
}

double eval_point(const KernelView& k, const Measure& m,
                  const std::vector<double>& x, const WolffConfig& cfg) {
  if (x.size() != static_cast<std::size_t>(m.dimension())) {
    throw validation_error("evaluation point has wrong dimension");
  }
  for (double c : x) {
    if (!std::isfinite(c)) {
      throw validation_error("evaluation point must be finite");
    }
  }
  double rho = 0.0;
  for (double c : x) rho += c * c;
  rho = std::sqrt(rho);
  double out = 0.0;
  if (pointwise_shortcuts(k, m, atom_exactly_at(m, x), rho, cfg, &out)) {
    return out;
  }
  CoreInput in;
  in.ball = [&m, &x](double t) { return m.ball_mass(x, t); };
  in.kinks = m.ball_mass_kink_radii(x);
  in.tail_start = std::max(2.0 * (2.0 * m.support_radius() + rho), 1e-30);
  in.total_mass = m.total_mass();
  in.t_lo = 0.0;
  return integrate_core(k, in, cfg, nullptr);
}

}  // namespace

void WolffConfig::validate() const {
  if (!(A > 0.0) || !std::isfinite(A)) {
    throw validation_error("normalization A must be positive finite");
  }
  if (!(R > 0.0)) {
    throw validation_error("truncation radius must be positive (or infinite)");
  }
  if (!(rel_tol > 0.0) || rel_tol > 1e-2) {
    throw validation_error("rel_tol must lie in (0, 1e-2]");
  }
  if (max_refinement_depth < 4 || max_refinement_depth > 60) {
    throw validation_error("max_refinement_depth must lie in [4, 60]");
  }
}

KernelView kernel_from_nfunction(const NFunction& nf) {
  KernelView k;
  k.ginv = [nf](double s) { return nf.g_inv(s); };
  k.n = nf.n();
  k.p_eff = nf.p();
  k.q_eff = nf.q();
  k.pure_power = false;
  return k;
}

KernelView power_kernel(double p_only, int n) {
  if (!(p_only > 1.0) || !std::isfinite(p_only)) {
    throw validation_error("power kernel exponent must be > 1");
  }
  if (n < 2 || n > 64) throw validation_error("dimension must be in [2, 64]");
  KernelView k;
  const double e = 1.0 / (p_only - 1.0);
  k.ginv = [e](double s) { return std::pow(s, e); };
  k.n = n;
  k.p_eff = p_only;
  k.q_eff = p_only;
  k.pure_power = true;
  return k;
}

double wolff_point(const NFunction& nf, const Measure& m,
                   const std::vector<double>& x, const WolffConfig& cfg) {
  return eval_point(kernel_from_nfunction(nf), m, x, cfg);
}

double wolff_point_radial(const NFunction& nf, const Measure& m, double rho,
                          const WolffConfig& cfg) {
  return eval_radial(kernel_from_nfunction(nf), m, rho, cfg, nullptr);
}

double wolff_p_point(double p_only, int n, const Measure& m,
                     const std::vector<double>& x, const WolffConfig& cfg) {
  return eval_point(power_kernel(p_only, n), m, x, cfg);
}

double wolff_p_point_radial(double p_only, int n, const Measure& m,
                            double rho, const WolffConfig& cfg) {
  return eval_radial(power_kernel(p_only, n), m, rho, cfg, nullptr);
}

RadialProfile wolff_radial_profile(const NFunction& nf, const Measure& m,
                                   const std::vector<double>& grid,
                                   const WolffConfig& cfg) {
  cfg.validate();
  if (!m.radial()) {
    throw validation_error("profile evaluation needs a radial measure");
  }
  if (grid.size() < 2) {
    throw validation_error("profile grid needs at least two radii");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i]) ||
        (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw validation_error("profile grid must be positive and ascending");
    }
  }
  std::vector<double> values(grid.size(), 0.0);
  const KernelView k = kernel_from_nfunction(nf);
  parallel_for(grid.size(), [&](std::size_t i) {
    values[i] = eval_radial(k, m, grid[i], cfg, nullptr);
  });
  return RadialProfile(grid, values);
}

std::vector<double> truncated_series(const NFunction& nf, const Measure& m,
                                     const std::vector<double>& x,
                                     const std::vector<double>& R_list,
                                     const WolffConfig& cfg) {
  if (R_list.empty()) throw validation_error("R_list must not be empty");
  for (std::size_t i = 0; i < R_list.size(); ++i) {
    if (!(R_list[i] > 0.0) || (i > 0 && !(R_list[i] >= R_list[i - 1]))) {
      throw validation_error("R_list must be positive and ascending");
    }
  }
  std::vector<double> out;
  out.reserve(R_list.size());
  for (double R : R_list) {
    WolffConfig c = cfg;
    c.R = R;
    out.push_back(wolff_point(nf, m, x, c));
  }
  return out;
}

double radial_solution_point(const NFunction& nf, const Measure& m, double r,
                             const WolffConfig& cfg) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw validation_error("solution radius must be finite and >= 0");
  }
  if (!m.radial()) {
    throw validation_error("the flux identity needs a radial measure");
  }
  WolffConfig flux = cfg;
  flux.A = sphere_area_constant(m.dimension());
  const KernelView k = kernel_from_nfunction(nf);
  double out = 0.0;
  // r = 0 is the only point where the integral can diverge.
  if (pointwise_shortcuts(k, m, r == 0.0 && atom_exactly_at_radial(m, 0.0),
                          r == 0.0 ? 0.0 : 1.0, flux, &out)) {
    return out;
  }
  if (std::isfinite(flux.R) && r >= flux.R) return 0.0;
  CoreInput in = radial_input(m, 0.0, r);
  return integrate_core(k, in, flux, nullptr);
}

FrozenWolffRule freeze_wolff_radial(const NFunction& nf, const Measure& m,
                                    double rho, const WolffConfig& cfg) {
  FrozenWolffRule rule;
  eval_radial(kernel_from_nfunction(nf), m, rho, cfg, &rule);
  return rule;
}

double replay_wolff_radial(const NFunction& nf, const Measure& m, double rho,
                           const WolffConfig& cfg,
                           const FrozenWolffRule& rule) {
  cfg.validate();
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw validation_error("evaluation radius must be finite and >= 0");
  }
  const KernelView k = kernel_from_nfunction(nf);
  if (m.dimension() != k.n) {
    throw validation_error("measure dimension does not match the kernel");
  }
  const CoreInput in = radial_input(m, rho, 0.0);
  return replay_core(k, in, cfg, rule);
}

}  // namespace wolff
