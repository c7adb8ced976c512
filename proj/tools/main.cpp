#include <CLI11.hpp>
#include <iostream>

#include "config.hpp"
#include "experiments.hpp"

using namespace semirev::cli;

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for semiclassical trapping on surfaces "
               "of revolution"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 1;
  uint64_t seed = 0;
  app.add_option("--config", config_path, "configuration file");
  app.add_option("--out", out_dir, "output directory (default: [output] dir)");
  app.add_option("--threads", threads, "worker threads for scan points");
  app.add_option("--seed", seed, "seed for random initial data");

  auto* profile = app.add_subcommand("profile", "dump x,a,A2,V1,V as CSV");
  auto* rscan = app.add_subcommand("resolvent-scan",
                                   "cutoff resolvent norms over an energy window");
  auto* qcheck = app.add_subcommand("quasimode-check",
                                    "quasimode norm and residual scaling");
  auto* evolve = app.add_subcommand("evolve", "mode evolution with smoothing "
                                              "functionals");
  auto* saturate = app.add_subcommand("saturate",
                                      "quasimode saturation over the k ladder");
  auto* report = app.add_subcommand("report", "aggregate output JSON summaries");

  CLI11_PARSE(app, argc, argv);

  RunContext ctx;
  try {
    ctx.config = config_path.empty() ? Config::parse_string("")
                                     : Config::parse_file(config_path);
    ctx.out_dir = !out_dir.empty()
                      ? out_dir
                      : ctx.config.get_str("output", "dir", "out");
    ctx.threads = threads > 0 ? threads : 1;
    ctx.seed = seed;

    if (profile->parsed()) return cmd_profile(ctx);
    if (rscan->parsed()) return cmd_resolvent_scan(ctx);
    if (qcheck->parsed()) return cmd_quasimode_check(ctx);
    if (evolve->parsed()) return cmd_evolve(ctx);
    if (saturate->parsed()) return cmd_saturate(ctx);
    if (report->parsed()) return cmd_report(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
