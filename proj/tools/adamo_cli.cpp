#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adamo/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitDiverged = 2;

int cmd_run(const std::string& config_path,
            const std::vector<std::string>& sets) {
  const auto cfg = adamo::ExperimentConfig::from_file(config_path, sets);
  const auto summary = adamo::run_experiment(cfg);
  std::cout << summary.to_json(cfg).dump(2) << "\n";
  return summary.diverged ? kExitDiverged : kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& grid,
              const std::vector<std::string>& sets) {
  std::ifstream in(config_path);
  if (!in) {
    throw adamo::ConfigError("cannot open config file '" + config_path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  const auto base = adamo::ExperimentConfig::from_text(text, sets);
  std::filesystem::create_directories(base.out_dir);
  const auto result = adamo::sensitivity_sweep(text, sets, grid);
  const auto csv =
      (std::filesystem::path(base.out_dir) / "sweep.csv").string();
  adamo::write_sweep_csv(result, csv);
  std::cout << "wrote " << csv << " (" << result.cells.size() << " cells)\n";
  return kExitOk;
}

int cmd_landscape(const std::string& checkpoint, int grid_n, double span,
                  const std::string& out) {
  std::filesystem::create_directories(
      std::filesystem::path(out).parent_path().empty()
          ? "."
          : std::filesystem::path(out).parent_path().string());
  adamo::landscape_from_checkpoint(checkpoint, grid_n, span, out);
  std::cout << "wrote " << out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adamo: decoupled radial/tangential optimizer experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  auto* run = app.add_subcommand("run", "train with a config file");
  run->add_option("--config", config_path, "config file path")->required();
  run->add_option("--set", sets, "key=value override (repeatable)");

  std::string sweep_config;
  std::string grid;
  std::vector<std::string> sweep_sets;
  auto* sweep = app.add_subcommand("sweep", "grid sweep over two keys");
  sweep->add_option("--config", sweep_config, "config file path")->required();
  sweep->add_option("--grid", grid, "grid spec: k1=v1,v2;k2=w1,w2")->required();
  sweep->add_option("--set", sweep_sets, "key=value override (repeatable)");

  std::string checkpoint;
  int grid_n = 41;
  double span = 1.0;
  std::string out_csv = "landscape.csv";
  auto* landscape =
      app.add_subcommand("landscape", "loss over a 2D parameter slice");
  landscape->add_option("--checkpoint", checkpoint, "checkpoint file")
      ->required();
  landscape->add_option("--grid-n", grid_n, "points per axis");
  landscape->add_option("--span", span, "half-width of the slice");
  landscape->add_option("--out", out_csv, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, sets);
    if (sweep->parsed()) return cmd_sweep(sweep_config, grid, sweep_sets);
    if (landscape->parsed())
      return cmd_landscape(checkpoint, grid_n, span, out_csv);
  } catch (const adamo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const adamo::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
