#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "wolfflab/runconfig.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Numerical laboratory for generalized Wolff potentials and the "
      "sublinear two-power integral equation"};
  app.require_subcommand(1);

  struct SubArgs {
    std::string config;
    std::string out = ".";
    bool quiet = false;
  };
  static const struct {
    const char* name;
    const char* help;
  } kSubs[] = {
      {"wolff", "Evaluate a potential profile on a radial grid"},
      {"solve", "Run the monotone fixed-point iteration"},
      {"check", "Evaluate the membership conditions for a measure"},
      {"verify", "Run one inequality verification suite"},
      {"constants", "Print the explicit constants for a parameter set"},
  };

  std::map<std::string, SubArgs> args;
  for (const auto& s : kSubs) {
    SubArgs& a = args[s.name];
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", a.config, "Path to the JSON run configuration")
        ->required();
    sub->add_option("--out", a.out, "Output directory (default: .)");
    sub->add_flag("--quiet", a.quiet, "Suppress the one-line summary");
  }

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  const SubArgs& a = args[name];
  std::ifstream f(a.config, std::ios::binary);
  if (!f) {
    std::cerr << "{\"error\":{\"type\":\"validation\",\"message\":\"cannot "
                 "read config file "
              << a.config << "\"}}\n";
    return 2;
  }
  std::ostringstream buf;
  buf << f.rdbuf();
  return wolff::run_config_command(name, buf.str(), a.out, a.quiet, std::cout,
                                   std::cerr);
}
