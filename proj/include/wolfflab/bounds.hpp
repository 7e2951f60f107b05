#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wolfflab/measure.hpp"
#include "wolfflab/orlicz.hpp"
#include "wolfflab/profile.hpp"
#include "wolfflab/wolff.hpp"

namespace wolff {

// lambda(n, p, q, alpha) =
//   (1/(1+alpha)) (p/q)^{2/(p-1)} (p / (2^{n-1} q))^{alpha (q-1)/(p-1)^2}.
// Always in (0, 1) for alpha > 0; validation_error when alpha <= 0.
double lambda_const(int n, double p, double q, double alpha);

// Largest certified scale for the starting subsolution: epsilon0 =
// ((p/q)^{2/(p-1)} lambda)^{(p-1)/(p-1-gamma(q-1))} with lambda taken at
// alpha = gamma/(1-gamma).  Coincides with the recursion fixed point below.
double epsilon0(int n, double p, double q, double gamma);

// Sequences delta_{j+1} = 1 + gamma delta_j (delta_1 = 1) and
// c_{j+1} = lambda (p/q)^{2/(p-1)} c_j^{gamma(q-1)/(p-1)} (c_1 given),
// with lambda at alpha = gamma/(1-gamma), plus both closed-form candidates
// for the c-limit.  The recursion limit c_star is the ground truth; the
// alternative closed form replaces the last exponent by
// 2(p-1)/((p-1)(q-1) - gamma (q-1)^2) and generally disagrees, so the audit
// reports both and their ratio.
struct RecursionAudit {
  std::vector<double> delta_seq;
  std::vector<double> c_seq;
  double delta_limit = 0.0;        // 1/(1-gamma)
  int steps_to_delta_limit = 0;    // first j with rel. error <= 1e-12
  double c_star = 0.0;             // fixed point of the c-recursion
  double c_alt_closed = 0.0;       // alternative displayed closed form
  double alt_ratio = 1.0;          // c_alt_closed / c_star
};
RecursionAudit recursion_limits(int n, double p, double q, double gamma,
                                int j_max = 200, double c1 = 0.5);

// Pointwise envelope for g^{-1}(alpha s)/g^{-1}(s): returns (k_lo, k_hi) with
// k_lo = (p/q)^{1/(p-1)} min(alpha^{1/(p-1)}, alpha^{1/(q-1)}) and
// k_hi = (q/p)^{1/(p-1)} max(alpha^{1/(p-1)}, alpha^{1/(q-1)}).
std::pair<double, double> envelope_ratio_bounds(const NFunction& nf,
                                                double alpha);

struct VerifyDetail {
  std::string name;
  double value = 0.0;
};

struct VerifyReport {
  std::string check;
  double margin = 0.0;  // signed slack; >= 0 is a pass
  bool pass = false;
  std::vector<VerifyDetail> details;
};

// min_r u(r) / (W_{G,A} sigma(r))^{1/(1-gamma)} >= C, with 1e-6 relative
// slack.  Radii with vanishing potential are skipped; a measure the grid
// never sees passes vacuously.
VerifyReport verify_lower_bound(const SublinearLaw& law, const Measure& sigma,
                                const RadialProfile& u, double C,
                                const WolffConfig& cfg);

// W_{G,A}(g((W_{G,A} sigma)^alpha) dsigma) >= lambda (W_{G,A} sigma)^{1+alpha}
// on the grid, with 1e-6 relative slack.  Atomic sigma is unsupported: the
// modulating factor is evaluated along the density only.
VerifyReport verify_lambda_inequality(const NFunction& nf,
                                      const Measure& sigma, double alpha,
                                      const std::vector<double>& grid,
                                      const WolffConfig& cfg);

// Ratio of the flux-normalized potential (A = n omega_n) to the unit-A one
// stays inside [k_lo, k_hi] = envelope_ratio_bounds(nf, 1/(n omega_n)).
VerifyReport verify_sandwich(const NFunction& nf, const Measure& mu,
                             const std::vector<double>& grid,
                             const WolffConfig& cfg);

// For the exact radial solution u: both center ratios
//   u(0) / W^R mu(0)   and   u(0) / (inf_{B_R} u + W^R mu(0))
// must stay within a 10^3 spread across the R sweep.  When the center values
// blow up the ratios are taken at radius delta = 1e-6 min(R_list) instead.
VerifyReport verify_truncated_center_bound(const NFunction& nf,
                                           const Measure& mu,
                                           const std::vector<double>& R_list,
                                           const WolffConfig& cfg);

// Every explicit constant for one parameter set, in one struct.
struct ConstantsBundle {
  int n = 3;
  double p = 0.0, q = 0.0, gamma = 0.0;
  double alpha_auto = 0.0;       // gamma/(1-gamma)
  double lambda_auto = 0.0;      // lambda at alpha_auto
  double eps0 = 0.0;
  double delta_limit = 0.0;
  double c_star = 0.0;
  double c_alt_closed = 0.0;
  double alt_ratio = 1.0;
};
ConstantsBundle constants_bundle(int n, double p, double q, double gamma);

}  // namespace wolff
