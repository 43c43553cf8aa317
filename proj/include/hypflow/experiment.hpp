#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hypflow/flow.hpp"
#include "hypflow/io.hpp"

namespace hypflow {

/// Hyperbolicity constant used by the bound checks.
///   Default:  the space's documented constant (0, 1.0987, inf).
///   Fixed:    a value from the config.
///   Estimate: delta_hat over a sample. A sampled delta_hat only bounds the
///             true constant from below, so this is opt-in.
struct DeltaPolicy {
  enum class Kind { Default, Fixed, Estimate };
  Kind kind = Kind::Default;
  double value = 0.0;
  SampleSpec sample;
  DeltaMethod method;
};

std::string to_string(DeltaPolicy::Kind kind);

struct ExperimentConfig {
  std::string name;
  io::json space_doc;
  SpacePtr space;
  std::optional<ConvexFunction> function;
  FlowConfig flow;
  DeltaPolicy delta;
  std::string output_dir;
  double tol = 1e-6;
};

/// Document layout:
///   {"space": {...}, "function": {...},
///    "flow": {"tau": t, "K": k, "x0": point, "seed": s},
///    "delta": {"fixed": d} | {"estimate": {sample...}, "exhaustive": b} | "default",
///    "output_dir": "...",
///    "tolerances": {"bound": 1e-6, "prox_stop": 1e-9, "tree": 1e-10, "max_iterations": 100000}}
/// "space" and "function" may also be paths to JSON files relative to the config.
ExperimentConfig experiment_from_json(const io::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment(const std::filesystem::path& path);

struct ExperimentResult {
  Trajectory trajectory;
  SlopeReport slopes;
  Verification verification;
  std::optional<BoundaryLimit> limit;
  double delta_used = 0.0;
};

/// Resolves the delta policy for the config's space.
double resolve_delta(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Column order of trajectory.csv.
std::vector<std::string> trajectory_columns(const ExperimentConfig& cfg);

void write_trajectory_csv(const ExperimentConfig& cfg, const ExperimentResult& res, std::ostream& out);
io::json summary_json(const ExperimentConfig& cfg, const ExperimentResult& res);
void write_plot_script(std::ostream& out);

/// Writes trajectory.csv, summary.json and plot.gp into `dir`.
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& res, const std::filesystem::path& dir);

// Command entry points. Exit codes: 0 pass, 1 bound or convexity failure,
// 2 usage, configuration or solver error.
struct RunOptions {
  std::optional<std::string> out_dir;
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed_override;
};

int cmd_run(const std::vector<std::string>& config_paths, const RunOptions& options, std::ostream& out,
            std::ostream& err);
int cmd_delta(const std::string& space_path, bool exhaustive, const std::string& out_dir, std::ostream& out,
              std::ostream& err);
int cmd_slopes(const std::string& space_path, const std::string& function_path, std::ostream& out,
               std::ostream& err);

}  // namespace hypflow
