// Acceptance gate: one line per criterion, [PASS]/[FAIL], nonzero exit when
// any criterion fails.  Tolerances are pinned here, next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wolfflab/bounds.hpp"
#include "wolfflab/conditions.hpp"
#include "wolfflab/measure.hpp"
#include "wolfflab/orlicz.hpp"
#include "wolfflab/profile.hpp"
#include "wolfflab/runconfig.hpp"
#include "wolfflab/solver.hpp"
#include "wolfflab/wolff.hpp"

using namespace wolff;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, bool ok, const std::string& label,
            const std::string& detail) {
  if (!ok) ++g_failures;
  std::printf("[%s] %2d  %s%s%s\n", ok ? "PASS" : "FAIL", idx, label.c_str(),
              detail.empty() ? "" : ": ", detail.c_str());
  std::fflush(stdout);
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- 1: atom golden test ---------------------------------------------------

void criterion_atom() {
  const double t0 = now_seconds();
  const NFunction nf(2.0, 2.0, 3);
  const Measure m = Measure::atom_at_origin(3, 1.0);
  WolffConfig cfg;
  cfg.rel_tol = 1e-8;
  const auto grid = RadialGrid{1e-3, 1e3, 400}.radii();
  double worst = 0.0;
  for (double r : grid) {
    const double wg = wolff_point_radial(nf, m, r, cfg);
    const double wp = wolff_p_point_radial(2.0, 3, m, r, cfg);
    worst = std::max(worst, std::fabs(wg - 0.5 / r) / (0.5 / r));
    worst = std::max(worst, std::fabs(wp - 1.0 / r) / (1.0 / r));
  }
  const double dt = now_seconds() - t0;
  report(1, worst <= 1e-6 && dt < 1.0, "atom potential golden test",
         "max rel err " + fmt(worst) + ", " + fmt(dt) + " s");
}

// ---- 2: uniform ball golden test -------------------------------------------

void criterion_ball() {
  const NFunction nf(2.0, 2.0, 3);
  const Measure m =
      Measure::with_radial_density(3, RadialDensity::constant(1.0, 1.0));
  WolffConfig cfg;
  cfg.rel_tol = 1e-8;
  const double v = wolff_point_radial(nf, m, 0.0, cfg);
  const double err = std::fabs(v - M_PI) / M_PI;
  report(2, err <= 1e-4, "uniform ball center potential",
         "rel err " + fmt(err));
}

// ---- 3: envelope suite ------------------------------------------------------

void criterion_envelopes() {
  const NFunction nf(2.0, 3.0, 3);
  std::mt19937_64 rng(20240816);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  std::uniform_real_distribution<double> ua(-3.0, 3.0);
  std::vector<std::pair<double, double>> samples;
  samples.reserve(10000);
  for (int i = 0; i < 10000; ++i) {
    samples.emplace_back(std::pow(10.0, u(rng)), std::pow(10.0, ua(rng)));
  }
  const EnvelopeReport rep = check_growth_envelopes(nf, samples);

  double worst_rt = 0.0;
  std::uniform_real_distribution<double> us(-12.0, 12.0);
  for (int i = 0; i < 10000; ++i) {
    const double s = std::pow(10.0, us(rng));
    worst_rt = std::max(worst_rt, std::fabs(nf.g(nf.g_inv(s)) - s) / s);
  }
  worst_rt = std::max(
      worst_rt, std::fabs(nf.g(nf.g_inv(1e12)) - 1e12) / 1e12);
  const bool rt_zero = nf.g(nf.g_inv(0.0)) == 0.0;

  report(3, rep.pass && worst_rt <= 1e-10 && rt_zero,
         "growth envelope suite",
         "worst slack " + fmt(rep.worst_slack) + ", round trip " +
             fmt(worst_rt));
}

// ---- 4 and 5: fixed point run ----------------------------------------------

struct SolveOutcome {
  RadialProfile u;
  IterationReport rep;
  IterationConfig cfg;
  bool ok = false;
};

SolveOutcome criterion_fixed_point() {
  const SublinearLaw law(NFunction(2.0, 3.0, 3), 0.25);
  const Measure sigma =
      Measure::with_radial_density(3, RadialDensity::constant(0.01, 1.0));
  IterationConfig cfg;
  cfg.grid = RadialGrid{0.05, 20.0, 401};
  cfg.wolff.rel_tol = 3e-6;
  cfg.tol = 1e-8;

  const double t0 = now_seconds();
  auto [u, rep] = solve(law, sigma, cfg);
  const double dt = now_seconds() - t0;

  const double sup = u.sup();
  const bool conv = rep.converged && rep.iterations <= 200;
  double worst_inc = 0.0;
  for (const auto& s : rep.steps) {
    worst_inc = std::min(worst_inc, s.min_increment);
  }
  const bool monotone = worst_inc >= -1e-12 * sup;
  const bool small_residual = rep.residual <= 1e-6;

  // Doubled grid resolution, same span: shared nodes are the even indices.
  // Stability is measured in the same normalization as the residual, sup of
  // the profile change over sup of the profile.
  IterationConfig fine_cfg = cfg;
  fine_cfg.grid.points = 2 * cfg.grid.points - 1;
  auto [u2, rep2] = solve(law, sigma, fine_cfg);
  double sup_diff = 0.0;
  for (int i = 0; i < cfg.grid.points; ++i) {
    sup_diff = std::max(
        sup_diff, std::fabs(u.values()[i] - u2.values()[2 * i]));
  }
  const double bound = 5.0 * cfg.wolff.rel_tol;
  const bool stable = sup_diff / sup <= bound;
  const bool fast = dt < 60.0;

  const bool ok = conv && monotone && small_residual && stable && fast;
  const std::string detail =
      std::string("converged=") + (conv ? "yes" : "no") + " in " +
      std::to_string(rep.iterations) + ", min increment " + fmt(worst_inc) +
      ", residual " + fmt(rep.residual) + " (cap 1e-6), doubling rel diff " +
      fmt(sup_diff / sup) + " vs cap " + fmt(bound) + ", " + fmt(dt) + " s";
  report(4, ok, "fixed point run", detail);
  return SolveOutcome{std::move(u), std::move(rep), cfg, rep.converged};
}

void criterion_lower_bound(const SolveOutcome& run) {
  if (!run.ok) {
    report(5, false, "pointwise lower bound",
           "skipped, the fixed point run did not converge");
    return;
  }
  const NFunction nf(2.0, 3.0, 3);
  const Measure sigma =
      Measure::with_radial_density(3, RadialDensity::constant(0.01, 1.0));
  const auto radii = run.cfg.grid.radii();
  const RadialProfile w =
      wolff_radial_profile(nf, sigma, radii, run.cfg.wolff);
  const double c_star = recursion_limits(3, 2.0, 3.0, 0.25).c_star;
  double min_ratio = INFINITY;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    min_ratio = std::min(
        min_ratio,
        run.u.values()[i] / std::pow(w.values()[i], 1.0 / 0.75));
  }
  const bool ok = min_ratio >= c_star * (1.0 - 1e-6);
  report(5, ok, "pointwise lower bound",
         "min ratio " + fmt(min_ratio) + " vs C* " + fmt(c_star));
}

// ---- 6: comparison inequality instances ------------------------------------

void criterion_lambda() {
  const Measure ball =
      Measure::with_radial_density(3, RadialDensity::constant(1.0, 1.0));
  WolffConfig cfg;
  cfg.rel_tol = 1e-8;
  const auto grid = RadialGrid{1e-2, 1e2, 60}.radii();
  const VerifyReport a =
      verify_lambda_inequality(NFunction(2.0, 2.0, 3), ball, 1.0, grid, cfg);
  const VerifyReport b = verify_lambda_inequality(NFunction(2.0, 3.0, 3), ball,
                                                  1.0 / 3.0, grid, cfg);
  report(6, a.pass && b.pass, "comparison inequality instances",
         "margins " + fmt(a.margin) + " and " + fmt(b.margin));
}

// ---- 7: normalization sandwich ----------------------------------------------

void criterion_sandwich() {
  bool ok = true;
  std::string detail;
  {
    const NFunction nf(2.0, 3.0, 4);
    const Measure ball =
        Measure::with_radial_density(4, RadialDensity::constant(1.0, 1.0));
    WolffConfig unit;
    unit.rel_tol = 1e-8;
    WolffConfig flux = unit;
    flux.A = nf.sphere_constant();
    const auto [k_lo, k_hi] =
        envelope_ratio_bounds(nf, 1.0 / nf.sphere_constant());
    const auto grid = RadialGrid{1e-2, 1e2, 40}.radii();
    double lo_seen = INFINITY, hi_seen = 0.0;
    bool inside = true;
    for (double r : grid) {
      const double ratio = wolff_point_radial(nf, ball, r, flux) /
                           wolff_point_radial(nf, ball, r, unit);
      lo_seen = std::min(lo_seen, ratio);
      hi_seen = std::max(hi_seen, ratio);
      inside = inside && ratio >= k_lo * (1.0 - 1e-9) &&
               ratio <= k_hi * (1.0 + 1e-9);
    }
    ok = ok && inside;
    detail += "ratios [" + fmt(lo_seen) + ", " + fmt(hi_seen) +
              "] inside [" + fmt(k_lo) + ", " + fmt(k_hi) + "]";
  }
  {
    const NFunction nf(2.0, 2.0, 3);
    const Measure atom = Measure::atom_at_origin(3, 1.0);
    WolffConfig unit;
    unit.rel_tol = 1e-9;
    WolffConfig flux = unit;
    flux.A = 4.0 * M_PI;
    double worst = 0.0;
    for (double r : RadialGrid{1e-2, 1e2, 10}.radii()) {
      const double ratio = wolff_point_radial(nf, atom, r, flux) /
                           wolff_point_radial(nf, atom, r, unit);
      worst = std::max(worst,
                       std::fabs(ratio - 1.0 / (4.0 * M_PI)) * 4.0 * M_PI);
    }
    ok = ok && worst <= 1e-9;
    detail += "; atom ratio err " + fmt(worst);
  }
  report(7, ok, "normalization sandwich", detail);
}

// ---- 8: recursion audit ------------------------------------------------------

void criterion_recursion() {
  bool ok = true;
  for (double gamma : {0.1, 0.25, 0.4}) {
    const RecursionAudit audit = recursion_limits(3, 2.0, 3.0, gamma);
    const double limit = 1.0 / (1.0 - gamma);
    ok = ok && audit.steps_to_delta_limit > 0 &&
         audit.steps_to_delta_limit <= 200 &&
         std::fabs(audit.delta_seq.back() - limit) <= 1e-12 * limit;
  }
  const double a = recursion_limits(3, 2.0, 3.0, 0.25, 200, 1e-6).c_star;
  const double b = recursion_limits(3, 2.0, 3.0, 0.25, 200, 0.9).c_star;
  ok = ok && std::fabs(a - b) <= 1e-10 * a;
  const RecursionAudit audit = recursion_limits(3, 2.0, 3.0, 0.25);
  report(8, ok, "exponent recursion audit",
         "C* " + fmt(audit.c_star) + ", closed-form candidate " +
             fmt(audit.c_alt_closed) + ", ratio " + fmt(audit.alt_ratio) +
             " (disagreement reported, not scored)");
}

// ---- 9: membership checker ---------------------------------------------------

void criterion_conditions() {
  bool ok = true;
  std::string detail;
  WolffConfig cfg;
  cfg.rel_tol = 1e-8;
  {
    const SublinearLaw law(NFunction(2.0, 2.5, 3), 0.25);
    const Measure sigma =
        Measure::with_radial_density(3, RadialDensity::constant(0.01, 1.0));
    const VerdictBundle base = check_sufficient(law, sigma, cfg);
    ModularOptions fine;
    fine.profile_points = 800;
    fine.tol_scale = 0.5;
    const VerdictBundle ref = check_sufficient(law, sigma, cfg, fine);
    double worst = 0.0;
    bool finite = base.overall == FiniteStatus::finite;
    for (std::size_t i = 0; i < base.entries.size(); ++i) {
      finite = finite && base.entries[i].status == FiniteStatus::finite;
      worst = std::max(worst,
                       std::fabs(ref.entries[i].value_estimate -
                                 base.entries[i].value_estimate) /
                           base.entries[i].value_estimate);
    }
    ok = ok && finite && worst <= 1e-3;
    detail += "density stable to " + fmt(worst);
  }
  {
    const std::string atom_cfg = R"({
      "command": "check",
      "nfunction": {"p": 2.0, "q": 2.5, "n": 3},
      "gamma": 0.25,
      "measure": {"atoms": [{"position": [0.0, 0.0, 0.0], "mass": 1.0}]},
      "wolff": {"A": 1.0, "R": "inf", "rel_tol": 1e-8}
    })";
    const fs::path dir =
        fs::temp_directory_path() / "wolfflab_acceptance_check_atom";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ostringstream out, err;
    const int code =
        run_config_command("check", atom_cfg, dir.string(), true, out, err);
    ok = ok && code == 3;
    detail += "; atom exit code " + std::to_string(code);
  }
  {
    const SublinearLaw law(NFunction(2.0, 2.0, 3), 0.25);
    const Measure sigma =
        Measure::with_radial_density(3, RadialDensity::constant(0.01, 1.0));
    const VerdictBundle bundle = check_sufficient(law, sigma, cfg);
    double worst = 0.0;
    for (const auto& v : bundle.entries) {
      worst = std::max(worst,
                       std::fabs(v.value_estimate -
                                 bundle.entries.front().value_estimate) /
                           bundle.entries.front().value_estimate);
    }
    ok = ok && worst <= 1e-9;
    detail += "; collapse spread " + fmt(worst);
  }
  report(9, ok, "membership checker", detail);
}

// ---- 10: determinism ----------------------------------------------------------

void criterion_determinism() {
  const std::pair<const char*, const char*> runs[] = {
      {"wolff", R"({
        "nfunction": {"p": 2.0, "q": 2.0, "n": 3},
        "measure": {"densities": [{"kind": "constant", "level": 1.0, "support_radius": 1.0}]},
        "wolff": {"A": 1.0, "R": "inf", "rel_tol": 1e-8},
        "grid": {"r_min": 1e-4, "r_max": 1e4, "points": 12}
      })"},
      {"check", R"({
        "command": "check",
        "nfunction": {"p": 2.0, "q": 2.5, "n": 3},
        "gamma": 0.25,
        "measure": {"densities": [{"kind": "constant", "level": 1.0, "support_radius": 1.0, "scale": 0.01}]},
        "wolff": {"A": 1.0, "R": "inf", "rel_tol": 1e-8}
      })"},
      {"solve", R"({
        "command": "solve",
        "nfunction": {"p": 2.0, "q": 3.0, "n": 3},
        "gamma": 0.25,
        "measure": {"densities": [{"kind": "constant", "level": 1.0, "support_radius": 1.0, "scale": 0.01}]},
        "wolff": {"A": 1.0, "R": "inf", "rel_tol": 1e-6},
        "grid": {"r_min": 0.05, "r_max": 20.0, "points": 12},
        "iteration": {"epsilon": "auto", "max_iters": 200, "tol": 1e-5}
      })"},
      {"constants", R"({
        "command": "constants",
        "nfunction": {"p": 2.0, "q": 3.0, "n": 3},
        "gamma": 0.25
      })"},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [sub, cfg] : runs) {
    const fs::path a = fs::temp_directory_path() /
                       (std::string("wolfflab_acceptance_det_a_") + sub);
    const fs::path b = fs::temp_directory_path() /
                       (std::string("wolfflab_acceptance_det_b_") + sub);
    for (const fs::path& d : {a, b}) {
      fs::remove_all(d);
      fs::create_directories(d);
    }
    std::ostringstream out_a, out_b, err;
    const int ca = run_config_command(sub, cfg, a.string(), false, out_a, err);
    const int cb = run_config_command(sub, cfg, b.string(), false, out_b, err);
    bool same = ca == cb && out_a.str() == out_b.str();
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      same = same && fs::exists(b / entry.path().filename()) &&
             slurp(entry.path()) == slurp(b / entry.path().filename());
    }
    same = same && files > 0;
    ok = ok && same;
    detail += std::string(detail.empty() ? "" : ", ") + sub +
              (same ? " identical" : " DIFFERS");
  }
  report(10, ok, "byte-identical reruns", detail);
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion_atom();
  criterion_ball();
  criterion_envelopes();
  const SolveOutcome run = criterion_fixed_point();
  criterion_lower_bound(run);
  criterion_lambda();
  criterion_sandwich();
  criterion_recursion();
  criterion_conditions();
  criterion_determinism();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criterion(s) failed\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
