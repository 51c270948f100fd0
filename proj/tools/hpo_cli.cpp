#include <CLI11.hpp>
#include <string>
#include <vector>

#include "hpo/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Hinge penalty optimization toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int workers = 0;
  std::uint64_t seed_override = 0;
  bool has_seed = false;
  long stride = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config)
      cmd->add_option("--config", config_path, "experiment config JSON")->required();
    cmd->add_option("--out", out_dir, "output directory override");
    cmd->add_option("--workers", workers, "parallel worker count override");
    cmd->add_option("--seed-override", seed_override, "replace the master seed")
        ->each([&](const std::string&) { has_seed = true; });
    cmd->add_option("--stride", stride, "snapshot stride override");
  };

  CLI::App* run = app.add_subcommand("run", "execute named solver runs");
  add_common(run, true);
  CLI::App* compare = app.add_subcommand("compare", "hinge vs squared-hinge beta grid");
  add_common(compare, true);
  CLI::App* sweep = app.add_subcommand("sweep", "schedule-derived parameter sweep");
  add_common(sweep, true);

  CLI::App* certify = app.add_subcommand("certify", "certify a finished run");
  std::string run_path, instance_path;
  double theta = 0;
  certify->add_option("run", run_path, "run.json path")->required();
  certify->add_option("instance", instance_path, "instance JSON (default: embedded)");
  certify->add_option("--theta", theta, "Moreau envelope parameter");
  add_common(certify, false);

  CLI::App* plot = app.add_subcommand("plot", "render trajectory CSVs as SVG");
  std::vector<std::string> csv_paths;
  plot->add_option("csv", csv_paths, "trajectory CSV paths")->required();
  add_common(plot, false);

  CLI11_PARSE(app, argc, argv);

  hpo::CliOverrides cli;
  if (!out_dir.empty()) cli.out = out_dir;
  if (workers > 0) cli.workers = workers;
  if (has_seed) cli.seed = seed_override;
  if (stride > 0) cli.stride = stride;

  if (run->parsed()) return hpo::cmd_run(config_path, cli);
  if (compare->parsed()) return hpo::cmd_compare(config_path, cli);
  if (sweep->parsed()) return hpo::cmd_sweep(config_path, cli);
  if (certify->parsed())
    return hpo::cmd_certify(run_path, instance_path, cli, theta);
  if (plot->parsed()) {
    std::vector<std::filesystem::path> paths(csv_paths.begin(), csv_paths.end());
    return hpo::cmd_plot(paths, out_dir.empty() ? "." : out_dir);
  }
  return 2;
}
