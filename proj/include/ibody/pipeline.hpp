#pragma once

// Batch pipelines behind the command line: configuration, the verify run,
// the epsilon scan, the scaling experiment and body export. Each pipeline
// writes its files into the configured output directory and returns the
// report text together with the process exit code.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ibody {

enum class ExitCode : int { Certified = 0, Usage = 1, Failed = 2, Inconclusive = 3 };

struct RunConfig {
  int n = 5;
  double eps = 0.1;                       // 0 selects the ball of radius C_n
  std::vector<double> x0;                 // empty = e1
  int grid_resolution = 0;                // nodes per graded panel; 0 = auto (8)
  int subsphere_resolution = 0;           // Funk row panel nodes; 0 = auto
  int num_planes = 200;
  int num_subspaces = 100;
  int m_angles = 0;                       // 0 = auto
  std::uint64_t seed = 42;
  std::filesystem::path output_dir = "ibody-out";
  std::optional<std::filesystem::path> cache_dir;
  std::vector<double> scan_ladder{0.8, 0.4, 0.2, 0.1};
  std::vector<double> asymptotics_ladder{0.4, 0.3, 0.2, 0.15, 0.1};
  int bisection_steps = 10;
  bool with_asymptotics = false;          // verify: also run the scaling experiment
  bool write_convexity_csv = true;

  int resolved_grid_resolution() const;
  int resolved_m_angles() const;
};

/// Applies a preset ("fast" or "full") to cfg.
void apply_preset(RunConfig& cfg, std::string_view preset);

/// Parses a JSON object onto cfg (unknown keys and bad values raise
/// ErrorKind::Config). A "preset" key is applied before the other keys.
void merge_config_json(RunConfig& cfg, std::string_view json_text);

/// Full validation (n >= 5, eps in [0, 1), resolutions, counts, ladders).
void validate(const RunConfig& cfg);

std::string config_to_json(const RunConfig& cfg);

struct RunResult {
  ExitCode exit_code = ExitCode::Failed;
  std::string report;   // report.json contents
  std::string summary;  // one line
};

RunResult run_verify(const RunConfig& cfg);
RunResult run_scan_epsilon(const RunConfig& cfg);
RunResult run_asymptotics(const RunConfig& cfg);
RunResult run_export_body(const RunConfig& cfg);

/// Dispatches on "verify", "scan-epsilon", "asymptotics", "export-body".
RunResult run_command(std::string_view command, const RunConfig& cfg);

}  // namespace ibody
