#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "testutil.hpp"
#include "wolfflab/errors.hpp"
#include "wolfflab/measure.hpp"
#include "wolfflab/orlicz.hpp"
#include "wolfflab/profile.hpp"
#include "wolfflab/wolff.hpp"

using namespace wolff;
using testutil::rel_err;

namespace {

WolffConfig tight() {
  WolffConfig cfg;
  cfg.rel_tol = 1e-10;
  return cfg;
}

}  // namespace

TEST_CASE("atom potential matches the inverse-distance law") {
  const NFunction nf(2.0, 2.0, 3);
  const Measure m = Measure::atom_at_origin(3, 2.0);
  const WolffConfig cfg = tight();
  for (double r : {1e-3, 0.1, 1.0, 7.5, 1e3}) {
    CHECK(rel_err(wolff_point_radial(nf, m, r, cfg), 1.0 / r) <= 1e-9);
    CHECK(rel_err(wolff_p_point_radial(2.0, 3, m, r, cfg), 2.0 / r) <= 1e-9);
  }
  // Same answers through the vector entry point, off axis.
  CHECK(rel_err(wolff_point(nf, m, {0.0, 2.0, 0.0}, cfg), 0.5) <= 1e-9);
}

TEST_CASE("fractional p-kernel atom potential has a power closed form") {
  // W_p of a unit atom: int_r^inf t^{-2/(p-1)} dt.
  const Measure m = Measure::atom_at_origin(3, 1.0);
  const WolffConfig cfg = tight();
  const double p = 2.5;
  for (double r : {0.5, 1.0, 4.0}) {
    const double expo = 2.0 / (p - 1.0);
    const double want = std::pow(r, 1.0 - expo) / (expo - 1.0);
    CHECK(rel_err(wolff_p_point_radial(p, 3, m, r, cfg), want) <= 1e-9);
  }
}

TEST_CASE("uniform ball potential at the center and inside") {
  const NFunction nf(2.0, 2.0, 3);
  const Measure m =
      Measure::with_radial_density(3, RadialDensity::constant(1.0, 1.0));
  const WolffConfig cfg = tight();
  CHECK(rel_err(wolff_point_radial(nf, m, 0.0, cfg), M_PI) <= 1e-6);
  // Interior point: the lens window [t - rho, t + rho] integrates to
  // 11/24 of the diameter-normalized mass at rho = 1/2.
  CHECK(rel_err(wolff_point_radial(nf, m, 0.5, cfg),
                2.0 * M_PI * 11.0 / 24.0) <= 1e-8);
}

TEST_CASE("truncation turns the atom tail into an exact difference") {
  const NFunction nf(2.0, 2.0, 3);
  const Measure m = Measure::atom_at_origin(3, 3.0);
  WolffConfig cfg = tight();
  cfg.R = 5.0;
  for (double r : {0.25, 1.0, 4.0}) {
    const double want = 1.5 * (1.0 / r - 1.0 / 5.0);
    CHECK(rel_err(wolff_point_radial(nf, m, r, cfg), want) <= 1e-9);
  }
  // Evaluation beyond the truncation radius sees nothing.
  CHECK(wolff_point_radial(nf, m, 6.0, cfg) == 0.0);
}

TEST_CASE("critical growth without truncation is a regime error") {
  const NFunction nf(3.0, 3.0, 3);
  const Measure m = Measure::atom_at_origin(3, 1.0);
  WolffConfig cfg = tight();
  CHECK_THROWS_AS(wolff_point_radial(nf, m, 1.0, cfg), regime_error);
  CHECK_THROWS_AS(wolff_p_point_radial(3.0, 3, m, 1.0, cfg), regime_error);
  // The truncated integral exists and equals its log closed form.
  cfg.R = 10.0;
  const double got = wolff_point_radial(nf, m, 1.0, cfg);
  CHECK(rel_err(got, std::sqrt(0.5) * std::log(10.0)) <= 1e-9);
}

TEST_CASE("quadratic kernels scale linearly in the normalization") {
  const NFunction nf(2.0, 2.0, 3);
  const Measure m = plus_measure(
      Measure::atom_at_origin(3, 0.5),
      Measure::with_radial_density(3, RadialDensity::constant(1.0, 1.0)));
  WolffConfig unit = tight();
  WolffConfig flux = tight();
  flux.A = 4.0 * M_PI;
  for (double r : {0.3, 1.0, 2.5}) {
    const double a = wolff_point_radial(nf, m, r, unit);
    const double b = wolff_point_radial(nf, m, r, flux);
    CHECK(rel_err(b, a / (4.0 * M_PI)) <= 1e-11);
  }
}

TEST_CASE("collapsed exponents reduce the generalized kernel to the p-kernel") {
  // g(t) = 2 t^{p-1}, so g_inv(s) = (s/2)^{1/(p-1)} and the potential is the
  // classical one shrunk by 2^{-1/(p-1)}.
  const double p = 2.5;
  const NFunction nf(p, p, 3);
  const Measure m =
      Measure::with_radial_density(3, RadialDensity::gaussian(1.0, 0.4, 1.0));
  const WolffConfig cfg = tight();
  const double shrink = std::pow(0.5, 1.0 / (p - 1.0));
  for (double r : {0.1, 0.8, 3.0}) {
    const double wg = wolff_point_radial(nf, m, r, cfg);
    const double wp = wolff_p_point_radial(p, 3, m, r, cfg);
    CHECK(rel_err(wg, shrink * wp) <= 1e-9);
  }
}

TEST_CASE("truncated potentials increase with the truncation radius") {
  const NFunction nf(2.0, 3.0, 3);
  const Measure m =
      Measure::with_radial_density(3, RadialDensity::constant(0.3, 1.0));
  const WolffConfig cfg = tight();
  const std::vector<double> Rs = {1.0, 2.0, 4.0, kInfiniteRadius};
  const auto vals = truncated_series(nf, m, {0.5, 0.0, 0.0}, Rs, cfg);
  REQUIRE(vals.size() == 4);
  for (std::size_t i = 1; i < vals.size(); ++i) {
    CHECK(vals[i] >= vals[i - 1] * (1.0 - 1e-12));
  }
  CHECK(rel_err(vals.back(), wolff_point_radial(nf, m, 0.5, cfg)) <= 1e-10);
  // A huge finite cutoff is already indistinguishable at 1e-5.
  WolffConfig big = cfg;
  big.R = 1e6;
  CHECK(rel_err(wolff_point_radial(nf, m, 0.5, big), vals.back()) <= 1e-5);
}

TEST_CASE("hard cutoff tail mode reproduces the analytic closure") {
  const NFunction nf(2.0, 3.0, 3);
  const Measure m = Measure::atom_at_origin(3, 1.0);
  WolffConfig ana = tight();
  WolffConfig hard = tight();
  hard.tail_mode = TailMode::hard_cutoff;
  for (double r : {0.2, 1.0, 10.0}) {
    const double a = wolff_point_radial(nf, m, r, ana);
    const double b = wolff_point_radial(nf, m, r, hard);
    CHECK(rel_err(b, a) <= 1e-8);
  }
}

TEST_CASE("profile evaluation equals pointwise evaluation") {
  const NFunction nf(2.0, 3.0, 3);
  const Measure m =
      Measure::with_radial_density(3, RadialDensity::power(0.2, 0.5, 1.0));
  WolffConfig cfg;
  cfg.rel_tol = 1e-8;
  const auto grid = RadialGrid{1e-2, 1e2, 17}.radii();
  const RadialProfile prof = wolff_radial_profile(nf, m, grid, cfg);
  REQUIRE(prof.radii().size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(prof.values()[i] == wolff_point_radial(nf, m, grid[i], cfg));
  }
}

TEST_CASE("profile values are independent of the thread count") {
  const NFunction nf(2.0, 3.0, 3);
  const Measure m =
      Measure::with_radial_density(3, RadialDensity::constant(1.0, 1.0));
  WolffConfig cfg;
  cfg.rel_tol = 1e-8;
  const auto grid = RadialGrid{1e-2, 1e2, 13}.radii();
  setenv("WOLFFLAB_THREADS", "3", 1);
  const RadialProfile a = wolff_radial_profile(nf, m, grid, cfg);
  setenv("WOLFFLAB_THREADS", "1", 1);
  const RadialProfile b = wolff_radial_profile(nf, m, grid, cfg);
  unsetenv("WOLFFLAB_THREADS");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a.values()[i] == b.values()[i]);
  }
}

TEST_CASE("repeated evaluation is bitwise deterministic") {
  const NFunction nf(2.0, 3.0, 4);
  const Measure m =
      Measure::with_radial_density(4, RadialDensity::gaussian(2.0, 0.7, 2.0));
  WolffConfig cfg;
  cfg.rel_tol = 1e-8;
  for (double r : {0.4, 1.9}) {
    CHECK(wolff_point_radial(nf, m, r, cfg) ==
          wolff_point_radial(nf, m, r, cfg));
  }
}

TEST_CASE("flux-normalized radial solution closed forms") {
  const NFunction nf(2.0, 2.0, 3);
  const WolffConfig cfg = tight();
  const Measure ball =
      Measure::with_radial_density(3, RadialDensity::constant(1.0, 1.0));
  CHECK(rel_err(radial_solution_point(nf, ball, 0.0, cfg), 0.25) <= 1e-8);
  const Measure atom = Measure::atom_at_origin(3, 2.0);
  for (double r : {0.5, 2.0}) {
    CHECK(rel_err(radial_solution_point(nf, atom, r, cfg),
                  2.0 / (8.0 * M_PI * r)) <= 1e-9);
  }
  // Truncated solution vanishes at and beyond the boundary.
  WolffConfig trunc = cfg;
  trunc.R = 2.0;
  CHECK(radial_solution_point(nf, atom, 2.0, trunc) == 0.0);
  CHECK(radial_solution_point(nf, atom, 3.0, trunc) == 0.0);
}

TEST_CASE("frozen rules replay the measure they were built from") {
  const NFunction nf(2.0, 3.0, 3);
  const Measure m =
      Measure::with_radial_density(3, RadialDensity::constant(0.01, 1.0));
  WolffConfig cfg;
  cfg.rel_tol = 1e-9;
  for (double rho : {0.05, 0.7, 1.0, 12.0}) {
    const FrozenWolffRule rule = freeze_wolff_radial(nf, m, rho, cfg);
    CHECK_FALSE(rule.nodes.empty());
    const double replayed = replay_wolff_radial(nf, m, rho, cfg, rule);
    const double adaptive = wolff_point_radial(nf, m, rho, cfg);
    CHECK(rel_err(replayed, adaptive) <= 1e-7);
  }
}

TEST_CASE("replay preserves pointwise ordering of modulated measures") {
  const NFunction nf(2.0, 3.0, 3);
  const Measure base =
      Measure::with_radial_density(3, RadialDensity::constant(0.01, 1.0));
  const auto nodes = RadialGrid{1e-3, 1.0, 12}.radii();
  std::vector<double> lo_v, hi_v;
  for (double r : nodes) {
    lo_v.push_back(0.5 + 0.2 * std::sin(3.0 * r));
    hi_v.push_back((0.5 + 0.2 * std::sin(3.0 * r)) * (1.0 + 0.3 * r));
  }
  const Measure lo = pointwise_scaled(base, RadialProfile(nodes, lo_v));
  const Measure hi = pointwise_scaled(base, RadialProfile(nodes, hi_v));
  WolffConfig cfg;
  cfg.rel_tol = 1e-8;
  for (double rho : {0.02, 0.4, 0.95, 3.0}) {
    const FrozenWolffRule rule = freeze_wolff_radial(nf, base, rho, cfg);
    const double a = replay_wolff_radial(nf, lo, rho, cfg, rule);
    const double b = replay_wolff_radial(nf, hi, rho, cfg, rule);
    CHECK(b >= a * (1.0 - 1e-14));
  }
}

TEST_CASE("configuration guards reject meaningless parameters") {
  const NFunction nf(2.0, 3.0, 3);
  const Measure m = Measure::atom_at_origin(3, 1.0);
  WolffConfig cfg;
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(wolff_point_radial(nf, m, 1.0, cfg), validation_error);
  cfg = WolffConfig{};
  cfg.A = -2.0;
  CHECK_THROWS_AS(wolff_point_radial(nf, m, 1.0, cfg), validation_error);
  cfg = WolffConfig{};
  CHECK_THROWS_AS(wolff_point(nf, m, {1.0, 0.0}, cfg), validation_error);
  const Measure off = Measure::single_atom(3, {1.0, 0.0, 0.0}, 1.0);
  CHECK_THROWS_AS(
      wolff_radial_profile(nf, off, RadialGrid{0.1, 1.0, 4}.radii(), cfg),
      validation_error);
}
