#pragma once

#include <utility>
#include <vector>

#include "wolfflab/measure.hpp"
#include "wolfflab/orlicz.hpp"
#include "wolfflab/profile.hpp"
#include "wolfflab/wolff.hpp"

namespace wolff {

struct IterationConfig {
  // Starting scale for u_0 = epsilon (W_G sigma)^{1/(1-gamma)}.  Any value
  // that is not a positive number selects the certified bound epsilon0.
  double epsilon = 0.0;
  int max_iters = 200;
  double tol = 1e-8;  // stop when the sup relative change drops below this
  RadialGrid grid;
  WolffConfig wolff;
  void validate() const;
};

struct IterationStep {
  int iter = 0;
  double sup_rel_change = 0.0;
  double f_modular = 0.0;
  // min over the grid of u_j - u_{j-1}, in absolute units; the monotonicity
  // witness.  Nonnegative up to quadrature noise once u_0 is a subsolution.
  double min_increment = 0.0;
};

struct SubsolutionResult {
  RadialProfile u0;
  RadialProfile u1;
  double epsilon_used = 0.0;
  bool certificate = false;  // u1 >= u0 on the grid (1e-12 relative slack)
  double margin = 0.0;       // min (u1 - u0) / sup u0
};

struct IterationReport {
  std::vector<IterationStep> steps;
  double residual = 0.0;
  bool converged = false;
  bool trivial = false;  // zero measure: the zero profile is exact
  int iterations = 0;
  double epsilon_used = 0.0;
  bool subsolution_certificate = false;
  double certificate_margin = 0.0;
};

// u_0 = epsilon (W_{G,A} sigma)^{1/(1-gamma)} on the grid, one trial
// iteration as the subsolution certificate.  With the automatic epsilon the
// scale is halved (at most 12 times) until the certificate holds; an explicit
// epsilon is used as given and the certificate simply reported.
SubsolutionResult initial_subsolution_checked(const SublinearLaw& law,
                                              const Measure& sigma,
                                              const IterationConfig& cfg);
RadialProfile initial_subsolution(const SublinearLaw& law,
                                  const Measure& sigma,
                                  const IterationConfig& cfg);

// One monotone step: u -> W_{G,A}(f(u) dsigma) sampled on cfg.grid.
// Atomic sigma is rejected: f(u) would have to be evaluated at the atom
// where the potential, hence u, is infinite.
RadialProfile iterate_once(const SublinearLaw& law, const Measure& sigma,
                           const RadialProfile& u_prev,
                           const IterationConfig& cfg);

// Monotone fixed-point loop for u = W_{G,A}(f(u) dsigma).  All iterates are
// evaluated through one frozen quadrature rule per grid point (recorded on
// the first iterate's measure at a tightened tolerance), so the pointwise
// ordering of the integrands carries to the computed values exactly.
std::pair<RadialProfile, IterationReport> solve(const SublinearLaw& law,
                                                const Measure& sigma,
                                                const IterationConfig& cfg);

// sup |u - W(f(u) dsigma)| / max(sup u, tiny) over cfg.grid, evaluated with
// the ordinary adaptive rule.
double residual(const SublinearLaw& law, const Measure& sigma,
                const RadialProfile& u, const IterationConfig& cfg);

// int F(u) dsigma, atoms included.
double f_modular(const SublinearLaw& law, const Measure& sigma,
                 const RadialProfile& u);

// h(t) = t - c (t^{(p-1)gamma/(q-1)} + t^gamma + t^{(q-1)gamma/(p-1)}).
// h(t) <= 0 confines t to a bounded interval since every exponent is < 1.
double h_bound_check(const SublinearLaw& law, double t, double c);

// The unique T > 0 with h(T) = 0 and h > 0 beyond it; h(t)/t is strictly
// increasing so a doubling bracket plus bisection is exact enough.
double h_positive_threshold(const SublinearLaw& law, double c);

}  // namespace wolff
