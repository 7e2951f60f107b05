#pragma once

#include <string>
#include <vector>

#include "wolfflab/measure.hpp"
#include "wolfflab/orlicz.hpp"
#include "wolfflab/profile.hpp"
#include "wolfflab/wolff.hpp"

namespace wolff {

enum class FiniteStatus { finite, divergent, inconclusive };

// One modular integral with its integrability diagnostics.  tail_exponent is
// the fitted decay rate in the outgoing variable (the r -> 0 behavior mapped
// through rho = 1/r), so finite verdicts have tail_exponent < -1.1 and
// divergent ones have tail_exponent >= -1 unless an atom is the witness.
// edge_exponent is the log-log slope over the last decade before the support
// edge, reported as a diagnostic only.
struct Verdict {
  std::string integral;
  double value_estimate = 0.0;  // +inf when divergent
  double tail_exponent = -2.0;
  double edge_exponent = 0.0;
  FiniteStatus status = FiniteStatus::finite;
  std::string witness;  // nonempty when divergence has a structural cause
};

struct VerdictBundle {
  std::vector<Verdict> entries;
  FiniteStatus overall = FiniteStatus::finite;
};

enum class PotentialKind { Wp, Wq, WG };

struct ModularOptions {
  int profile_points = 400;  // internal potential profile resolution
  double tol_scale = 1.0;    // multiplies the fixed quadrature tolerances
};

// int F((W sigma)^e) dsigma as atom terms plus the weighted radial integral.
// The potential is sampled once on a log grid spanning six decades below the
// support radius; below that the integrand is extended by its fitted power.
Verdict modular_of_power(const SublinearLaw& law, const Measure& sigma,
                         PotentialKind kind, double e, const WolffConfig& cfg,
                         const ModularOptions& opts = {});

// The six-integral membership test: exponents 1/(1-gamma),
// (p-1)/(p-1-gamma(q-1)), (q-1)/(q-1-gamma(p-1)) against both the p-kernel
// and the q-kernel potential.  Overall finite iff all six are.
VerdictBundle check_sufficient(const SublinearLaw& law, const Measure& sigma,
                               const WolffConfig& cfg,
                               const ModularOptions& opts = {});

// The single necessary integral: the G-kernel potential at e = 1/(1-gamma).
Verdict check_necessary(const SublinearLaw& law, const Measure& sigma,
                        const WolffConfig& cfg,
                        const ModularOptions& opts = {});

// The three-integral variant with the G-kernel potential at all three
// exponents.  Whether it suffices for existence is open; computed and
// reported, never adjudicated.
VerdictBundle consolidated_condition(const SublinearLaw& law,
                                     const Measure& sigma,
                                     const WolffConfig& cfg,
                                     const ModularOptions& opts = {});

// Audit of the bound int (W_s(u^r dsigma))^{1+alpha} dsigma <=
// c0 (int u^{1+alpha} dsigma)^{r/(s-1)}.  The prerequisite membership
// (W_s sigma)^{(s-1)/(s-1-r)} in L^{1+alpha}(dsigma) is verified first; if it
// fails the check is skipped as inconclusive.  Passes when the implied
// constant is finite and moves less than 20% under doubled resolution.
struct Claim2Report {
  Verdict prerequisite;
  double lhs = 0.0;
  double rhs_base = 0.0;          // (int u^{1+alpha} dsigma)^{r/(s-1)}
  double implied_constant = 0.0;  // lhs / rhs_base
  double refined_constant = 0.0;
  double stability = 0.0;  // |refined/first - 1|
  FiniteStatus status = FiniteStatus::finite;
  bool pass = false;
};
Claim2Report claim2_inequality_check(const Measure& sigma,
                                     const RadialProfile& u, double r_exp,
                                     double s_exp, double alpha,
                                     const WolffConfig& cfg,
                                     const ModularOptions& opts = {});

const char* to_string(FiniteStatus s);

}  // namespace wolff
