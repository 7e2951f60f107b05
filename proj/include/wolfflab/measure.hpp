#pragma once

// Nonnegative Radon measures on R^n: finitely many point atoms plus radial
// densities centered at the origin.  The central operation is the exact
// open-ball mass sigma(B(x,t)); everything downstream (Wolff integrals,
// modulars) reduces to it or to radial integrals against the density.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wolfflab/interp.hpp"
#include "wolfflab/profile.hpp"

namespace wolff {

// Volume of the unit ball and the (n-1)-sphere area constant n*omega_n.
double unit_ball_volume(int n);
double sphere_area_constant(int n);

// Fraction of the sphere {|y| = r} lying strictly inside B(x, t) with
// |x| = rho.  1 when rho + r <= t, 0 when |rho - r| >= t; closed form for
// n = 3, cached colatitude table otherwise.  Continuous in all arguments.
double shell_cap_fraction(double rho, double r, double t, int n);

// Same quantity through direct quadrature of the colatitude integral.
// Slow; retained as an independent cross-check for the table path.
double shell_cap_fraction_by_quadrature(double rho, double r, double t, int n);

struct Atom {
  std::vector<double> position;
  double mass = 0.0;
};

enum class DensityKind { constant, power, gaussian, modulated };

// Radial density profile w(r) supported on [0, support_radius].  Near r = 0
// it behaves like head_coeff * r^{head_exponent}; breakpoints() lists the
// radii (support radius included) where w is not smooth.
class RadialDensity {
 public:
  static RadialDensity constant(double level, double support_radius);
  // w(r) = coeff * r^{-exponent_s}.  Mass finiteness (exponent_s < n) is
  // checked when the density joins a Measure, since n lives there.
  static RadialDensity power(double coeff, double exponent_s,
                             double support_radius);
  static RadialDensity gaussian(double amplitude, double length_scale,
                                double support_radius);
  // w(r) * factor(r); the factor profile is evaluated with its own
  // clamp/extrapolation policy.  Used to realize f(u) dsigma.
  static RadialDensity modulated(const RadialDensity& base,
                                 RadialProfile factor);

  double operator()(double r) const;  // 0 beyond the support radius
  double support_radius() const { return support_; }
  double head_coeff() const { return head_coeff_; }
  double head_exponent() const { return head_exp_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  // Breakpoints plus, for modulated densities, the factor profile's node
  // radii.  Dense; meant for table grids, not for integration splits.
  std::vector<double> interior_nodes() const;
  DensityKind kind() const { return kind_; }

  // Copy with the support truncated to min(support, R).
  RadialDensity truncated(double R) const;

 private:
  RadialDensity() = default;
  DensityKind kind_ = DensityKind::constant;
  double a_ = 0.0, b_ = 0.0;  // kind parameters
  double support_ = 0.0;
  double head_coeff_ = 0.0, head_exp_ = 0.0;
  std::vector<double> breakpoints_;
  std::shared_ptr<const RadialDensity> base_;  // modulated only
  std::shared_ptr<const RadialProfile> factor_;
};

// Cumulative moments M_k(r) = int_0^r w(s) s^k ds: node values on a shared
// log grid with an analytic power head below the first node.  Off-node
// queries integrate the partial segment directly instead of interpolating,
// so eval carries quadrature accuracy everywhere.  n = 3 ball masses need
// k = 1, 2, 3; other n only k = n - 1.
struct MomentTables {
  explicit MomentTables(RadialDensity w) : density(std::move(w)) {}

  double r0 = 0.0;
  double support = 0.0;
  double head_coeff = 0.0, head_exp = 0.0;
  RadialDensity density;         // for the on-demand segment piece
  std::vector<double> log_nodes;
  std::vector<int> orders;
  std::vector<std::vector<double>> at_node;  // per order, head included
  std::vector<double> total;
  std::vector<char> divergent;  // head integral infinite for this order

  bool usable(int k) const;
  // Divergent orders throw; r is clamped to [0, support].
  double eval(int k, double r) const;
};

struct DensityComponent {
  RadialDensity density;
  double scale = 1.0;  // multiplies the component's mass everywhere
  std::shared_ptr<const MomentTables> tables;
};

class Measure {
 public:
  // Zero measure in dimension n >= 2.
  explicit Measure(int n);

  static Measure atom_at_origin(int n, double mass);
  static Measure single_atom(int n, std::vector<double> position, double mass);
  static Measure with_radial_density(int n, const RadialDensity& w);

  int dimension() const { return n_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensityComponent>& density_components() const {
    return components_;
  }
  bool zero() const { return atoms_.empty() && components_.empty(); }
  bool has_atoms() const { return !atoms_.empty(); }
  // True when every atom sits at the origin; such measures are rotation
  // invariant and admit the radial fast paths.
  bool radial() const;

  double total_mass() const;
  double atom_mass() const;
  double density_mass() const;
  // Radius of the smallest origin-centered closed ball carrying the measure.
  double support_radius() const;

  // Exact open-ball mass sigma(B(x, t)); atoms at distance exactly t are
  // excluded.  Requires t > 0 and x of length n.
  double ball_mass(const std::vector<double>& x, double t) const;
  // Same with x = (rho, 0, ..., 0).
  double ball_mass_radial(double rho, double t) const;
  double center_ball_mass(double t) const;

  // Radii t at which t -> ball_mass(x, t) loses smoothness (atom distances,
  // shell tangency radii, density breakpoint images).  Sorted, positive.
  std::vector<double> ball_mass_kink_radii(const std::vector<double>& x) const;
  std::vector<double> ball_mass_kink_radii_radial(double rho) const;

  // int h(|y|) dsigma(y) over the density part, atoms added as h(|pos|)*mass
  // when include_atoms.  h must be finite on (0, support_radius].
  double radial_integral(const std::function<double(double)>& h,
                         bool include_atoms) const;

  Measure scaled(double factor) const;
  Measure plus(const Measure& other) const;
  Measure restricted_to_ball(double R) const;

 private:
  int n_ = 3;
  std::vector<Atom> atoms_;
  std::vector<DensityComponent> components_;

  void add_atom(std::vector<double> position, double mass);
  void add_component(const RadialDensity& w, double scale);
  double component_ball_mass(const DensityComponent& c, double rho,
                             double t) const;

  friend Measure pointwise_scaled(const Measure& m,
                                  const RadialProfile& factor);
};

Measure with_density_scaled(const Measure& m, double factor);
Measure plus_measure(const Measure& a, const Measure& b);
Measure restrict_to_ball(const Measure& m, double R);

// Measure with every density multiplied pointwise by factor(r) and every
// atom mass by factor(|position|).  Atoms whose factor vanishes are dropped.
// Realizes f(u) dsigma and u^r dsigma.
Measure pointwise_scaled(const Measure& m, const RadialProfile& factor);

}  // namespace wolff
