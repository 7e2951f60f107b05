#pragma once

// Quadrature engine for generalized Wolff potentials
//   W(x) = int_0^R ginv( sigma(B(x,t)) / (A t^{n-1}) ) dt
// with ginv the inverse of the two-power growth function or a pure power.
// Covers truncated upper limits, the infinite-range analytic tail, and a
// frozen-rule replay mode that preserves pointwise ordering across measures.

#include <limits>
#include <vector>

#include "wolfflab/measure.hpp"
#include "wolfflab/orlicz.hpp"
#include "wolfflab/profile.hpp"
#include "wolfflab/quadrature.hpp"

namespace wolff {

inline constexpr double kInfiniteRadius =
    std::numeric_limits<double>::infinity();

enum class TailMode {
  // Close the far field with the power-law antiderivative once the kernel
  // bracket is tight enough; exact error control.
  analytic_power,
  // Integrate outward until the remaining analytic bound is below tolerance,
  // then drop it; emulates a plain large-cutoff truncation.
  hard_cutoff,
};

struct WolffConfig {
  double A = 1.0;
  double R = kInfiniteRadius;
  double rel_tol = 1e-8;
  int max_refinement_depth = 30;
  TailMode tail_mode = TailMode::analytic_power;

  void validate() const;
};

// Kernel seen by the integrator: ginv plus its two asymptotic exponents.
// Small arguments behave like s^{1/(p_eff-1)}, large like s^{1/(q_eff-1)}.
struct KernelView {
  std::function<double(double)> ginv;
  int n = 3;
  double p_eff = 2.0;
  double q_eff = 2.0;
  bool pure_power = false;  // ginv(s) = s^{1/(p_eff-1)} exactly
};

KernelView kernel_from_nfunction(const NFunction& nf);
KernelView power_kernel(double p_only, int n);

// Quadrature rule captured from one evaluation and replayed on other
// measures.  Node abscissae are log t.  tail_T > 0 means the analytic tail
// closes from there with the replayed measure's own total mass.
struct FrozenWolffRule {
  std::vector<QuadNode> nodes;
  double tail_T = 0.0;
};

// Potential at a point.  Returns INFINITY when the integral genuinely
// diverges at x (atom at x, or a density head at the center too steep for
// the kernel); throws regime_error when R is infinite and the far field
// cannot converge (p_eff >= n).
double wolff_point(const NFunction& nf, const Measure& m,
                   const std::vector<double>& x, const WolffConfig& cfg);
double wolff_point_radial(const NFunction& nf, const Measure& m, double rho,
                          const WolffConfig& cfg);

// Classical p-potential: kernel s^{1/(p_only-1)}.
double wolff_p_point(double p_only, int n, const Measure& m,
                     const std::vector<double>& x, const WolffConfig& cfg);
double wolff_p_point_radial(double p_only, int n, const Measure& m,
                            double rho, const WolffConfig& cfg);

// Potential profile over an ascending radius grid; the measure must be
// radial (atoms only at the origin).  Parallel across grid points with
// scheduling-independent values.
RadialProfile wolff_radial_profile(const NFunction& nf, const Measure& m,
                                   const std::vector<double>& grid,
                                   const WolffConfig& cfg);

// Truncated potentials for each upper limit in ascending R_list (entries may
// be INFINITY).  Nondecreasing in the limit.
std::vector<double> truncated_series(const NFunction& nf, const Measure& m,
                                     const std::vector<double>& x,
                                     const std::vector<double>& R_list,
                                     const WolffConfig& cfg);

// Exact radial solution operator: u(r) = int_r^R ginv( mu(B(0,s)) /
// (n omega_n s^{n-1}) ) ds for radial mu.  The flux normalization n omega_n
// is built in; cfg.A is ignored.  r = 0 gives the full integral.
double radial_solution_point(const NFunction& nf, const Measure& m, double r,
                             const WolffConfig& cfg);

// Frozen-rule path used by the fixed-point solver: freeze records the
// adaptive rule for (m, rho); replay evaluates any other measure on exactly
// those nodes.  If the replayed measures are pointwise ordered in ball mass,
// the replayed values are ordered too.
FrozenWolffRule freeze_wolff_radial(const NFunction& nf, const Measure& m,
                                    double rho, const WolffConfig& cfg);
double replay_wolff_radial(const NFunction& nf, const Measure& m, double rho,
                           const WolffConfig& cfg,
                           const FrozenWolffRule& rule);

}  // namespace wolff
