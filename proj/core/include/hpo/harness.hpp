#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "hpo/serialize.hpp"
#include "hpo/solver.hpp"

namespace hpo {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

// Resolved once from HPO_LOG_LEVEL (error|warn|info|debug; default warn).
LogLevel log_level();
void log(LogLevel level, const std::string& msg);

struct CertControls {
  double theta = 0;  // 0 -> 1/(2C)
  int prox_iters = 10000;
  double prox_tol = 1e-6;
  double activity_tol = 1e-5;
  int max_certified_snapshots = 50;
};

struct RunSpec {
  std::string name;
  nlohmann::json solver_json;
  bool certify = true;
  bool explicit_seed = false;
};

struct CompareSpec {
  std::vector<double> betas;
  std::vector<PenaltyKind> kinds;
  nlohmann::json base_solver;
  bool paired = true;  // share one stream family across all cells
};

struct SweepSpec {
  ScheduleSetting setting = ScheduleSetting::setting_one;
  std::vector<double> epsilon_targets;
  std::vector<ScheduleMultipliers> multipliers;
  nlohmann::json base_solver;
  long max_T = 0;  // 0 = unlimited; otherwise derived T is capped
};

struct ExperimentConfig {
  nlohmann::json instance_doc;
  std::string setting = "auto";  // auto | setting1 | setting2
  std::vector<RunSpec> runs;
  std::optional<CompareSpec> compare;
  std::optional<SweepSpec> sweep;
  CertControls cert;
  std::filesystem::path output_dir = "out";
  int workers = 1;
  long epoch_iterations = 400;
  std::uint64_t master_seed = 0;
};

// Strict parse: unknown keys anywhere in the document are rejected.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc,
                                         const std::filesystem::path& base_dir);

struct CliOverrides {
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::optional<long> stride;
};

int cmd_run(const std::filesystem::path& config_path, const CliOverrides& cli);
int cmd_compare(const std::filesystem::path& config_path, const CliOverrides& cli);
int cmd_sweep(const std::filesystem::path& config_path, const CliOverrides& cli);
int cmd_certify(const std::filesystem::path& run_json_path,
                const std::filesystem::path& instance_path, const CliOverrides& cli,
                double theta = 0);
int cmd_plot(const std::vector<std::filesystem::path>& csv_paths,
             const std::filesystem::path& out_dir);

// Dispatches on the experiment's setting string ("auto" picks setting2 when
// the instance has an FCCO objective).
RunResult run_cell(const ConstrainedProblem& problem, const SolverConfig& config,
                   const std::string& setting);

}  // namespace hpo
