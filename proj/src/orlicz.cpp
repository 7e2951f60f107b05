#include "wolfflab/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wolfflab/errors.hpp"

namespace wolff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ball_volume_of(int n) {
  // omega_n = pi^(n/2) / Gamma(n/2 + 1)
  return std::pow(std::acos(-1.0), 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace

NFunction::NFunction(double p, double q, int n) : p_(p), q_(q), n_(n) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw validation_error("NFunction: p must be finite and > 1");
  }
  if (!(q >= p) || !std::isfinite(q)) {
    throw validation_error("NFunction: q must be finite and >= p");
  }
  if (n < 3) {
    throw validation_error("NFunction: dimension n must be >= 3");
  }
  ball_vol_ = ball_volume_of(n_);
  sphere_const_ = n_ * ball_vol_;
}

double NFunction::g(double t) const {
  if (!(t >= 0.0)) throw validation_error("g: argument must be >= 0");
  if (t == 0.0) return 0.0;
  return std::pow(t, p_ - 1.0) + std::pow(t, q_ - 1.0);
}

double NFunction::g_prime(double t) const {
  if (!(t > 0.0)) throw validation_error("g_prime: argument must be > 0");
  return (p_ - 1.0) * std::pow(t, p_ - 2.0) + (q_ - 1.0) * std::pow(t, q_ - 2.0);
}

double NFunction::G(double t) const {
  if (!(t >= 0.0)) throw validation_error("G: argument must be >= 0");
  if (t == 0.0) return 0.0;
  return std::pow(t, p_) / p_ + std::pow(t, q_) / q_;
}

double NFunction::g_inv(double s) const {
  if (!(s >= 0.0)) throw validation_error("g_inv: argument must be >= 0");
  if (s == 0.0) return 0.0;
  if (std::isinf(s)) return kInf;
  if (p_ == q_) return std::pow(0.5 * s, 1.0 / (p_ - 1.0));

  // Bracket from the two-power structure: each power alone under-estimates g,
  // their doubled max over-estimates it.
  const double ip = 1.0 / (p_ - 1.0);
  const double iq = 1.0 / (q_ - 1.0);
  double lo = std::min(std::pow(0.5 * s, ip), std::pow(0.5 * s, iq));
  double hi = std::min(std::pow(s, ip), std::pow(s, iq));
  if (!(lo < hi)) {
    lo = std::nextafter(hi, 0.0);
  }
  double t = std::sqrt(lo * hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double gt = g(t);
    const double diff = gt - s;
    if (std::fabs(diff) <= 2.0 * std::numeric_limits<double>::epsilon() * s) {
      break;
    }
    if (diff > 0.0) {
      hi = t;
    } else {
      lo = t;
    }
    double next = t - diff / g_prime(t);
    if (!(next > lo && next < hi)) {
      next = std::sqrt(lo * hi);
    }
    if (next == t || !(hi - lo > 1e-16 * t)) {
      t = next;
      break;
    }
    t = next;
  }
  return t;
}

double NFunction::G_star(double s) const {
  if (!(s >= 0.0)) throw validation_error("G_star: argument must be >= 0");
  if (s == 0.0) return 0.0;
  const double t = g_inv(s);
  return s * t - G(t);
}

bool gamma_admissible(double p, double q, double gamma) {
  if (!(p > 1.0) || !(q >= p)) {
    throw validation_error("gamma_admissible: need 1 < p <= q");
  }
  if (!(gamma > 0.0)) return false;
  double bound = (p - 1.0) / (q - 1.0);
  if (q > p) bound = std::min(bound, 1.0 / (q - p));
  return gamma < bound;
}

SublinearLaw::SublinearLaw(NFunction nf, double gamma)
    : nf_(std::move(nf)), gamma_(gamma) {
  if (!gamma_admissible(nf_.p(), nf_.q(), gamma)) {
    throw validation_error(
        "SublinearLaw: gamma outside (0, min{(p-1)/(q-1), 1/(q-p)})");
  }
}

double SublinearLaw::f(double t) const {
  if (!(t >= 0.0)) throw validation_error("f: argument must be >= 0");
  if (t == 0.0) return 0.0;
  const double e1 = (nf_.p() - 1.0) * gamma_;
  const double e2 = (nf_.q() - 1.0) * gamma_;
  return std::pow(t, e1) + std::pow(t, e2);
}

double SublinearLaw::F(double t) const {
  if (!(t >= 0.0)) throw validation_error("F: argument must be >= 0");
  if (t == 0.0) return 0.0;
  const double e1 = (nf_.p() - 1.0) * gamma_ + 1.0;
  const double e2 = (nf_.q() - 1.0) * gamma_ + 1.0;
  return std::pow(t, e1) / e1 + std::pow(t, e2) / e2;
}

namespace {

// Signed relative slack of "lhs <= rhs"; zero when both sides vanish.
double slack_le(double lhs, double rhs) {
  const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
  return (rhs - lhs) / scale;
}

}  // namespace

EnvelopeReport check_growth_envelopes(
    const NFunction& nf, const std::vector<std::pair<double, double>>& samples) {
  const double p = nf.p();
  const double q = nf.q();
  const double ip = 1.0 / (p - 1.0);
  const double iq = 1.0 / (q - 1.0);
  const double c_inv_low = std::pow(p / q, ip);
  const double c_inv_high = std::pow(q / p, ip);
  const double c_sum = nf.g_inv(1.0) * c_inv_high;

  EnvelopeReport rep;
  rep.families = {{{"g-scaling", kInf},
                   {"G-scaling", kInf},
                   {"g_inv-scaling", kInf},
                   {"G_star-scaling", kInf},
                   {"g_inv-two-power-sum", kInf},
                   {"conjugate-composition", kInf},
                   {"submultiplicativity", kInf}}};

  auto note = [&rep](int fam, double slack) {
    rep.families[static_cast<std::size_t>(fam)].worst_slack =
        std::min(rep.families[static_cast<std::size_t>(fam)].worst_slack, slack);
  };

  for (const auto& [t, a] : samples) {
    if (!(t > 0.0) || !(a >= 0.0)) {
      throw validation_error("check_growth_envelopes: need t > 0, alpha >= 0");
    }
    const double gt = nf.g(t);
    const double gat = nf.g(a * t);
    const double ga = nf.g(a);
    const double Gt = nf.G(t);
    const double Gat = nf.G(a * t);
    const double git = nf.g_inv(t);
    const double giat = nf.g_inv(a * t);
    const double gia = nf.g_inv(a);
    const double Gst = nf.G_star(t);
    const double Gsat = nf.G_star(a * t);

    const double ap1 = std::pow(a, p - 1.0), aq1 = std::pow(a, q - 1.0);
    note(0, slack_le(std::min(ap1, aq1) * gt, gat));
    note(0, slack_le(gat, std::max(ap1, aq1) * gt));

    const double ap = std::pow(a, p), aq = std::pow(a, q);
    note(1, slack_le(std::min(ap, aq) * Gt, Gat));
    note(1, slack_le(Gat, std::max(ap, aq) * Gt));

    const double aip = std::pow(a, ip), aiq = std::pow(a, iq);
    note(2, slack_le(c_inv_low * std::min(aip, aiq) * git, giat));
    note(2, slack_le(giat, c_inv_high * std::max(aip, aiq) * git));

    const double apc = std::pow(a, p * ip), aqc = std::pow(a, q * iq);
    note(3, slack_le(std::min(apc, aqc) * Gst, Gsat));
    note(3, slack_le(Gsat, std::max(apc, aqc) * Gst));

    note(4, slack_le(git, c_sum * (std::pow(t, ip) + std::pow(t, iq))));

    const double Gsg = nf.G_star(gt);
    note(5, slack_le((p - 1.0) * Gt, Gsg));
    note(5, slack_le(Gsg, (q - 1.0) * Gt));

    note(6, slack_le(gat, gt * ga));
    note(6, slack_le(git * gia, giat));
  }

  rep.worst_slack = kInf;
  for (const auto& fam : rep.families) {
    rep.worst_slack = std::min(rep.worst_slack, fam.worst_slack);
  }
  rep.pass = rep.worst_slack >= -1e-9;
  return rep;
}

}  // namespace wolff
