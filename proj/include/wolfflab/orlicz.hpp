#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace wolff {

// Two-power growth function
//   g(t) = t^(p-1) + t^(q-1),   G(t) = t^p/p + t^q/q,
// with 1 < p <= q, living on an n-dimensional ambient space (n >= 3).
// g is a strictly increasing bijection of [0, inf); G and its conjugate
// G*(s) = s*g_inv(s) - G(g_inv(s)) satisfy p <= t g(t)/G(t) <= q.
class NFunction {
 public:
  NFunction(double p, double q, int n);

  double p() const { return p_; }
  double q() const { return q_; }
  int n() const { return n_; }
  bool homogeneous() const { return p_ == q_; }

  double g(double t) const;
  double g_prime(double t) const;
  double G(double t) const;
  // Inverse of g, accurate to a few ulp; g_inv(0) = 0, g_inv(inf) = inf.
  double g_inv(double s) const;
  double G_star(double s) const;

  // n * omega_n, the surface area of the unit sphere in R^n.
  double sphere_constant() const { return sphere_const_; }
  // omega_n, the volume of the unit ball in R^n.
  double ball_volume() const { return ball_vol_; }

 private:
  double p_, q_;
  int n_;
  double ball_vol_, sphere_const_;
};

// Admissibility window for the sublinear exponent:
//   0 < gamma < min{(p-1)/(q-1), 1/(q-p)}   (second bound void when p == q).
bool gamma_admissible(double p, double q, double gamma);

// Sublinear coupling f(t) = g(t^gamma) = t^((p-1)gamma) + t^((q-1)gamma)
// with primitive F. Requires an admissible gamma.
class SublinearLaw {
 public:
  SublinearLaw(NFunction nf, double gamma);

  const NFunction& nf() const { return nf_; }
  double gamma() const { return gamma_; }
  double f(double t) const;
  double F(double t) const;

 private:
  NFunction nf_;
  double gamma_;
};

struct EnvelopeFamilyResult {
  std::string name;
  double worst_slack;  // signed relative slack, negative means violated
};

struct EnvelopeReport {
  std::array<EnvelopeFamilyResult, 7> families;
  double worst_slack;
  bool pass;  // worst_slack >= -1e-9
};

// Checks the seven comparison families over the supplied (t, alpha) samples:
//  1. min{a^(p-1), a^(q-1)} g(t) <= g(a t) <= max{...} g(t)
//  2. min{a^p, a^q} G(t) <= G(a t) <= max{...} G(t)
//  3. (p/q)^(1/(p-1)) min{a^(1/(p-1)), a^(1/(q-1))} g_inv(t)
//        <= g_inv(a t) <= (q/p)^(1/(p-1)) max{...} g_inv(t)
//  4. min{a^(p/(p-1)), a^(q/(q-1))} G*(t) <= G*(a t) <= max{...} G*(t)
//  5. g_inv(t) <= g_inv(1) (q/p)^(1/(p-1)) (t^(1/(p-1)) + t^(1/(q-1)))
//  6. (p-1) G(t) <= G*(g(t)) <= (q-1) G(t)
//  7. g(t a) <= g(t) g(a)  and  g_inv(t a) >= g_inv(t) g_inv(a)
EnvelopeReport check_growth_envelopes(
    const NFunction& nf, const std::vector<std::pair<double, double>>& samples);

}  // namespace wolff
