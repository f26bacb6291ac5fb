#include <clocale>
#include <cstdint>
#include <string>

#include <CLI11.hpp>

#include "thermo/cli_run.hpp"
#include "thermo/version.hpp"

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  CLI::App app{"thermolab: thermostat flows on the 2-torus"};
  app.set_version_flag("--version", thermo::kVersion);
  app.require_subcommand(1);

  thermo::CliOptions opt;
  std::uint64_t seed = 0;
  bool seed_set = false;

  const char* subcommands[] = {"orbit",      "cocycle",  "curvature-scan",
                               "conjugate-scan", "green-scan", "lyapunov",
                               "domination", "hopf",     "selftest"};
  for (const char* name : subcommands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "experiment configuration (JSON)");
    sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    sub->add_option("--workers", opt.workers,
                    "worker threads (default: THERMOLAB_WORKERS or hardware)");
    sub->add_option("--seed", seed, "override scan.seed")->each([&](const std::string&) {
      seed_set = true;
    });
    sub->callback([&opt, name]() { opt.subcommand = name; });
  }

  CLI11_PARSE(app, argc, argv);
  if (seed_set) opt.seed = seed;
  return thermo::run_cli(opt);
}
