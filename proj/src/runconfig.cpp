#include "wolfflab/runconfig.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <vector>

#include "json.hpp"
#include "wolfflab/bounds.hpp"
#include "wolfflab/conditions.hpp"
#include "wolfflab/errors.hpp"
#include "wolfflab/measure.hpp"
#include "wolfflab/orlicz.hpp"
#include "wolfflab/profile.hpp"
#include "wolfflab/solver.hpp"
#include "wolfflab/wolff.hpp"

namespace wolff {

namespace {

using nlohmann::json;

void expect_keys(const json& j, const std::string& ctx,
                 const std::set<std::string>& allowed) {
  if (!j.is_object()) {
    throw validation_error("config: " + ctx + " must be an object");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (allowed.count(it.key()) == 0) {
      throw validation_error("config: unknown key \"" + it.key() + "\" in " +
                             ctx);
    }
  }
}

double need_num(const json& j, const std::string& ctx, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw validation_error("config: " + ctx + "." + key +
                           " must be a number");
  }
  return j.at(key).get<double>();
}

double opt_num(const json& j, const std::string& ctx, const char* key,
               double def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number()) {
    throw validation_error("config: " + ctx + "." + key +
                           " must be a number");
  }
  return j.at(key).get<double>();
}

int opt_int(const json& j, const std::string& ctx, const char* key, int def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number_integer()) {
    throw validation_error("config: " + ctx + "." + key +
                           " must be an integer");
  }
  return j.at(key).get<int>();
}

std::string opt_str(const json& j, const std::string& ctx, const char* key,
                    const std::string& def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_string()) {
    throw validation_error("config: " + ctx + "." + key +
                           " must be a string");
  }
  return j.at(key).get<std::string>();
}

struct NfSpec {
  double p = 2.0, q = 2.0;
  int n = 3;
};

NfSpec parse_nfunction(const json& root) {
  if (!root.contains("nfunction")) {
    throw validation_error("config: missing \"nfunction\"");
  }
  const json& j = root.at("nfunction");
  expect_keys(j, "nfunction", {"p", "q", "n"});
  NfSpec s;
  s.p = need_num(j, "nfunction", "p");
  s.q = need_num(j, "nfunction", "q");
  if (!j.contains("n") || !j.at("n").is_number_integer()) {
    throw validation_error("config: nfunction.n must be an integer");
  }
  s.n = j.at("n").get<int>();
  return s;
}

Measure parse_measure(const json& root, int n) {
  if (!root.contains("measure")) {
    throw validation_error("config: missing \"measure\"");
  }
  const json& j = root.at("measure");
  expect_keys(j, "measure", {"atoms", "densities"});
  Measure m(n);
  if (j.contains("atoms")) {
    if (!j.at("atoms").is_array()) {
      throw validation_error("config: measure.atoms must be an array");
    }
    for (const json& a : j.at("atoms")) {
      expect_keys(a, "measure.atoms[]", {"position", "mass"});
      if (!a.contains("position") || !a.at("position").is_array()) {
        throw validation_error(
            "config: atom position must be an array of n numbers");
      }
      std::vector<double> pos;
      for (const json& c : a.at("position")) {
        if (!c.is_number()) {
          throw validation_error("config: atom position entries are numbers");
        }
        pos.push_back(c.get<double>());
      }
      m = m.plus(Measure::single_atom(n, pos,
                                      need_num(a, "measure.atoms[]", "mass")));
    }
  }
  if (j.contains("densities")) {
    if (!j.at("densities").is_array()) {
      throw validation_error("config: measure.densities must be an array");
    }
    for (const json& d : j.at("densities")) {
      const std::string kind = opt_str(d, "measure.densities[]", "kind", "");
      RadialDensity w = RadialDensity::constant(1.0, 1.0);
      if (kind == "constant") {
        expect_keys(d, "measure.densities[]",
                    {"kind", "level", "support_radius", "scale"});
        w = RadialDensity::constant(
            need_num(d, "density", "level"),
            need_num(d, "density", "support_radius"));
      } else if (kind == "power") {
        expect_keys(d, "measure.densities[]",
                    {"kind", "coeff", "exponent", "support_radius", "scale"});
        w = RadialDensity::power(need_num(d, "density", "coeff"),
                                 need_num(d, "density", "exponent"),
                                 need_num(d, "density", "support_radius"));
      } else if (kind == "gaussian") {
        expect_keys(
            d, "measure.densities[]",
            {"kind", "amplitude", "length_scale", "support_radius", "scale"});
        w = RadialDensity::gaussian(
            need_num(d, "density", "amplitude"),
            need_num(d, "density", "length_scale"),
            need_num(d, "density", "support_radius"));
      } else {
        throw validation_error(
            "config: density kind must be constant | power | gaussian");
      }
      const double scale = opt_num(d, "density", "scale", 1.0);
      m = m.plus(with_density_scaled(Measure::with_radial_density(n, w),
                                     scale));
    }
  }
  return m;
}

WolffConfig parse_wolff(const json& root, int n) {
  WolffConfig cfg;
  if (!root.contains("wolff")) return cfg;
  const json& j = root.at("wolff");
  expect_keys(j, "wolff", {"A", "R", "rel_tol", "tail_mode", "max_depth"});
  if (j.contains("A")) {
    if (j.at("A").is_string()) {
      if (j.at("A").get<std::string>() != "n_omega_n") {
        throw validation_error(
            "config: wolff.A must be a number or \"n_omega_n\"");
      }
      cfg.A = sphere_area_constant(n);
    } else {
      cfg.A = need_num(j, "wolff", "A");
    }
  }
  if (j.contains("R")) {
    if (j.at("R").is_string()) {
      if (j.at("R").get<std::string>() != "inf") {
        throw validation_error("config: wolff.R must be a number or \"inf\"");
      }
      cfg.R = kInfiniteRadius;
    } else {
      cfg.R = need_num(j, "wolff", "R");
    }
  }
  cfg.rel_tol = opt_num(j, "wolff", "rel_tol", cfg.rel_tol);
  cfg.max_refinement_depth =
      opt_int(j, "wolff", "max_depth", cfg.max_refinement_depth);
  const std::string tm = opt_str(j, "wolff", "tail_mode", "analytic");
  if (tm == "analytic") {
    cfg.tail_mode = TailMode::analytic_power;
  } else if (tm == "hard_cutoff") {
    cfg.tail_mode = TailMode::hard_cutoff;
  } else {
    throw validation_error(
        "config: wolff.tail_mode must be analytic | hard_cutoff");
  }
  return cfg;
}

RadialGrid parse_grid(const json& root) {
  RadialGrid g;
  if (!root.contains("grid")) return g;
  const json& j = root.at("grid");
  expect_keys(j, "grid", {"r_min", "r_max", "points"});
  g.r_min = opt_num(j, "grid", "r_min", g.r_min);
  g.r_max = opt_num(j, "grid", "r_max", g.r_max);
  g.points = opt_int(j, "grid", "points", g.points);
  return g;
}

IterationConfig parse_iteration(const json& root, const RadialGrid& grid,
                                const WolffConfig& wcfg) {
  IterationConfig cfg;
  cfg.grid = grid;
  cfg.wolff = wcfg;
  if (!root.contains("iteration")) return cfg;
  const json& j = root.at("iteration");
  expect_keys(j, "iteration", {"epsilon", "max_iters", "tol"});
  if (j.contains("epsilon")) {
    if (j.at("epsilon").is_string()) {
      if (j.at("epsilon").get<std::string>() != "auto") {
        throw validation_error(
            "config: iteration.epsilon must be a number or \"auto\"");
      }
      cfg.epsilon = 0.0;
    } else {
      cfg.epsilon = need_num(j, "iteration", "epsilon");
      if (!(cfg.epsilon > 0.0)) {
        throw validation_error(
            "config: explicit iteration.epsilon must be positive");
      }
    }
  }
  cfg.max_iters = opt_int(j, "iteration", "max_iters", cfg.max_iters);
  cfg.tol = opt_num(j, "iteration", "tol", cfg.tol);
  return cfg;
}

double parse_gamma(const json& root) {
  if (!root.contains("gamma") || !root.at("gamma").is_number()) {
    throw validation_error("config: missing numeric \"gamma\"");
  }
  return root.at("gamma").get<double>();
}

json number_or_infinite(double v) {
  if (std::isinf(v)) return json("INFINITE");
  return json(v);
}

json verdict_to_json(const Verdict& v) {
  json j;
  j["integral"] = v.integral;
  j["value_estimate"] = number_or_infinite(v.value_estimate);
  j["tail_exponent"] = v.tail_exponent;
  j["edge_exponent"] = v.edge_exponent;
  j["status"] = to_string(v.status);
  if (!v.witness.empty()) j["witness"] = v.witness;
  return j;
}

json report_to_json(const VerifyReport& r) {
  json j;
  j["check"] = r.check;
  j["margin"] = r.margin;
  j["pass"] = r.pass;
  json det;
  for (const auto& d : r.details) det[d.name] = d.value;
  j["details"] = det;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw validation_error("cannot open output file " + path.string());
  }
  f << text;
  if (!f.good()) {
    throw validation_error("failed writing output file " + path.string());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

struct CommonInputs {
  NfSpec nfs;
  WolffConfig wcfg;
  RadialGrid grid;
};

json echo_common(const CommonInputs& in) {
  json j;
  j["p"] = in.nfs.p;
  j["q"] = in.nfs.q;
  j["n"] = in.nfs.n;
  j["A"] = in.wcfg.A;
  j["R"] = number_or_infinite(in.wcfg.R);
  j["rel_tol"] = in.wcfg.rel_tol;
  j["grid"] = {{"r_min", in.grid.r_min},
               {"r_max", in.grid.r_max},
               {"points", in.grid.points}};
  return j;
}

int cmd_wolff(const json& root, const std::filesystem::path& out_dir,
              bool quiet, std::ostream& out) {
  CommonInputs in{parse_nfunction(root), {}, {}};
  in.wcfg = parse_wolff(root, in.nfs.n);
  in.grid = parse_grid(root);
  const NFunction nf(in.nfs.p, in.nfs.q, in.nfs.n);
  const Measure m = parse_measure(root, in.nfs.n);
  const RadialProfile prof =
      wolff_radial_profile(nf, m, in.grid.radii(), in.wcfg);
  write_text(out_dir / "profile.csv", prof.to_csv());
  json meta = echo_common(in);
  meta["command"] = "wolff";
  meta["total_mass"] = m.total_mass();
  meta["support_radius"] = m.support_radius();
  meta["outputs"] = {{"profile", "profile.csv"}};
  write_json(out_dir / "meta.json", meta);
  if (!quiet) {
    out << "wolff: wrote profile.csv (" << prof.size() << " radii)\n";
  }
  return 0;
}

int cmd_solve(const json& root, const std::filesystem::path& out_dir,
              bool quiet, std::ostream& out) {
  CommonInputs in{parse_nfunction(root), {}, {}};
  in.wcfg = parse_wolff(root, in.nfs.n);
  in.grid = parse_grid(root);
  const NFunction nf(in.nfs.p, in.nfs.q, in.nfs.n);
  const SublinearLaw law(nf, parse_gamma(root));
  const Measure sigma = parse_measure(root, in.nfs.n);
  const IterationConfig icfg = parse_iteration(root, in.grid, in.wcfg);

  const auto [u, rep] = solve(law, sigma, icfg);
  write_text(out_dir / "profile.csv", u.to_csv());
  std::string lines;
  for (const auto& s : rep.steps) {
    json j;
    j["iter"] = s.iter;
    j["sup_rel_change"] = s.sup_rel_change;
    j["f_modular"] = s.f_modular;
    j["min_increment"] = s.min_increment;
    lines += j.dump() + "\n";
  }
  write_text(out_dir / "iterations.jsonl", lines);
  json meta = echo_common(in);
  meta["command"] = "solve";
  meta["gamma"] = law.gamma();
  meta["converged"] = rep.converged;
  meta["trivial"] = rep.trivial;
  meta["iterations"] = rep.iterations;
  meta["residual"] = rep.residual;
  meta["epsilon_used"] = rep.epsilon_used;
  meta["subsolution_certificate"] = rep.subsolution_certificate;
  meta["certificate_margin"] = rep.certificate_margin;
  meta["outputs"] = {{"profile", "profile.csv"},
                     {"iterations", "iterations.jsonl"}};
  write_json(out_dir / "meta.json", meta);
  if (!quiet) {
    out << "solve: " << (rep.converged ? "converged" : "not converged")
        << " after " << rep.iterations << " iterations, residual "
        << rep.residual << "\n";
  }
  return rep.converged ? 0 : 4;
}

int cmd_check(const json& root, const std::filesystem::path& out_dir,
              bool quiet, std::ostream& out) {
  CommonInputs in{parse_nfunction(root), {}, {}};
  in.wcfg = parse_wolff(root, in.nfs.n);
  in.grid = parse_grid(root);
  const NFunction nf(in.nfs.p, in.nfs.q, in.nfs.n);
  const SublinearLaw law(nf, parse_gamma(root));
  const Measure sigma = parse_measure(root, in.nfs.n);
  ModularOptions opts;
  std::string mode = "all";
  if (root.contains("check")) {
    const json& j = root.at("check");
    expect_keys(j, "check", {"mode", "profile_points", "tol_scale"});
    mode = opt_str(j, "check", "mode", "all");
    opts.profile_points =
        opt_int(j, "check", "profile_points", opts.profile_points);
    opts.tol_scale = opt_num(j, "check", "tol_scale", opts.tol_scale);
  }
  if (mode != "all" && mode != "sufficient" && mode != "necessary" &&
      mode != "consolidated") {
    throw validation_error(
        "config: check.mode must be all | sufficient | necessary | "
        "consolidated");
  }

  json doc = echo_common(in);
  doc["command"] = "check";
  doc["gamma"] = law.gamma();
  FiniteStatus overall = FiniteStatus::finite;
  if (mode == "all" || mode == "sufficient") {
    const VerdictBundle b = check_sufficient(law, sigma, in.wcfg, opts);
    json arr = json::array();
    for (const auto& v : b.entries) arr.push_back(verdict_to_json(v));
    doc["sufficient"] = {{"entries", arr},
                         {"overall", to_string(b.overall)}};
    overall = b.overall;
  }
  if (mode == "all" || mode == "necessary") {
    const Verdict v = check_necessary(law, sigma, in.wcfg, opts);
    doc["necessary"] = verdict_to_json(v);
    if (mode == "necessary") overall = v.status;
  }
  if (mode == "all" || mode == "consolidated") {
    const VerdictBundle b = consolidated_condition(law, sigma, in.wcfg, opts);
    json arr = json::array();
    for (const auto& v : b.entries) arr.push_back(verdict_to_json(v));
    doc["consolidated"] = {{"entries", arr},
                           {"overall", to_string(b.overall)}};
    if (mode == "consolidated") overall = b.overall;
  }
  doc["overall"] = to_string(overall);
  write_json(out_dir / "verdicts.json", doc);
  if (!quiet) out << "check: overall " << to_string(overall) << "\n";
  if (overall == FiniteStatus::finite) return 0;
  return overall == FiniteStatus::divergent ? 3 : 4;
}

int cmd_verify(const json& root, const std::filesystem::path& out_dir,
               bool quiet, std::ostream& out) {
  CommonInputs in{parse_nfunction(root), {}, {}};
  in.wcfg = parse_wolff(root, in.nfs.n);
  in.grid = parse_grid(root);
  const NFunction nf(in.nfs.p, in.nfs.q, in.nfs.n);
  const Measure m = parse_measure(root, in.nfs.n);
  if (!root.contains("verify")) {
    throw validation_error("config: missing \"verify\"");
  }
  const json& j = root.at("verify");
  expect_keys(j, "verify", {"suite", "alpha", "C", "R_list"});
  const std::string suite = opt_str(j, "verify", "suite", "");

  VerifyReport rep;
  if (suite == "lambda_inequality") {
    rep = verify_lambda_inequality(nf, m, need_num(j, "verify", "alpha"),
                                   in.grid.radii(), in.wcfg);
  } else if (suite == "sandwich") {
    rep = verify_sandwich(nf, m, in.grid.radii(), in.wcfg);
  } else if (suite == "truncated_center") {
    if (!j.contains("R_list") || !j.at("R_list").is_array()) {
      throw validation_error("config: verify.R_list must be an array");
    }
    std::vector<double> Rs;
    for (const json& v : j.at("R_list")) {
      if (!v.is_number()) {
        throw validation_error("config: verify.R_list entries are numbers");
      }
      Rs.push_back(v.get<double>());
    }
    rep = verify_truncated_center_bound(nf, m, Rs, in.wcfg);
  } else if (suite == "lower_bound") {
    const SublinearLaw law(nf, parse_gamma(root));
    const IterationConfig icfg = parse_iteration(root, in.grid, in.wcfg);
    const auto [u, srep] = solve(law, m, icfg);
    double C;
    if (j.contains("C") && j.at("C").is_number()) {
      C = j.at("C").get<double>();
    } else {
      const std::string cs = opt_str(j, "verify", "C", "c_star");
      if (cs != "c_star") {
        throw validation_error(
            "config: verify.C must be a number or \"c_star\"");
      }
      C = epsilon0(in.nfs.n, in.nfs.p, in.nfs.q, law.gamma());
    }
    rep = verify_lower_bound(law, m, u, C, in.wcfg);
    rep.details.push_back({"solver_converged", srep.converged ? 1.0 : 0.0});
    if (!srep.converged) rep.pass = false;
  } else {
    throw validation_error(
        "config: verify.suite must be lambda_inequality | sandwich | "
        "truncated_center | lower_bound");
  }

  json doc = echo_common(in);
  doc["command"] = "verify";
  doc["report"] = report_to_json(rep);
  write_json(out_dir / "verify.json", doc);
  if (!quiet) {
    out << "verify: " << rep.check << " " << (rep.pass ? "pass" : "fail")
        << " (margin " << rep.margin << ")\n";
  }
  return rep.pass ? 0 : 4;
}

int cmd_constants(const json& root, const std::filesystem::path& out_dir,
                  bool quiet, std::ostream& out) {
  const NfSpec nfs = parse_nfunction(root);
  const double gamma = parse_gamma(root);
  double alpha = -1.0;
  int j_max = 200;
  double c1 = 0.5;
  if (root.contains("constants")) {
    const json& j = root.at("constants");
    expect_keys(j, "constants", {"alpha", "j_max", "c1"});
    alpha = opt_num(j, "constants", "alpha", -1.0);
    j_max = opt_int(j, "constants", "j_max", 200);
    c1 = opt_num(j, "constants", "c1", 0.5);
  }
  const ConstantsBundle b = constants_bundle(nfs.n, nfs.p, nfs.q, gamma);
  const RecursionAudit a = recursion_limits(nfs.n, nfs.p, nfs.q, gamma,
                                            j_max, c1);
  json doc;
  doc["command"] = "constants";
  doc["n"] = b.n;
  doc["p"] = b.p;
  doc["q"] = b.q;
  doc["gamma"] = b.gamma;
  doc["alpha_auto"] = b.alpha_auto;
  doc["lambda_auto"] = b.lambda_auto;
  if (alpha > 0.0) {
    doc["alpha"] = alpha;
    doc["lambda_at_alpha"] = lambda_const(nfs.n, nfs.p, nfs.q, alpha);
  }
  doc["epsilon0"] = b.eps0;
  doc["delta_limit"] = b.delta_limit;
  doc["steps_to_delta_limit"] = a.steps_to_delta_limit;
  doc["c_star"] = b.c_star;
  doc["c_alt_closed"] = b.c_alt_closed;
  doc["alt_ratio"] = b.alt_ratio;
  doc["c1"] = c1;
  doc["c_seq_last"] = a.c_seq.back();
  const std::string text = doc.dump(2) + "\n";
  if (!quiet) out << text;
  write_text(out_dir / "constants.json", text);
  return 0;
}

}  // namespace

int run_config_command(const std::string& subcommand,
                       const std::string& config_text,
                       const std::string& out_dir, bool quiet,
                       std::ostream& out, std::ostream& err) {
  const auto fail = [&err](const char* type, const std::string& msg,
                           int code) {
    json e;
    e["error"] = {{"type", type}, {"message", msg}};
    err << e.dump() << "\n";
    return code;
  };
  try {
    json root = json::parse(config_text);
    static const std::set<std::string> top_keys{
        "command", "nfunction", "gamma",     "measure",  "wolff",
        "grid",    "iteration", "check",     "verify",   "constants"};
    expect_keys(root, "top level", top_keys);
    const std::string declared = opt_str(root, "config", "command", "");
    if (!declared.empty() && declared != subcommand) {
      throw validation_error("config: declared command \"" + declared +
                             "\" does not match subcommand \"" + subcommand +
                             "\"");
    }
    std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
    std::filesystem::create_directories(dir);
    if (subcommand == "wolff") return cmd_wolff(root, dir, quiet, out);
    if (subcommand == "solve") return cmd_solve(root, dir, quiet, out);
    if (subcommand == "check") return cmd_check(root, dir, quiet, out);
    if (subcommand == "verify") return cmd_verify(root, dir, quiet, out);
    if (subcommand == "constants") {
      return cmd_constants(root, dir, quiet, out);
    }
    return fail("validation", "unknown subcommand " + subcommand, 2);
  } catch (const json::parse_error& e) {
    return fail("validation", std::string("config is not valid JSON: ") +
                                  e.what(),
                2);
  } catch (const validation_error& e) {
    return fail("validation", e.what(), 2);
  } catch (const regime_error& e) {
    return fail("regime", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 2);
  }
}

}  // namespace wolff
