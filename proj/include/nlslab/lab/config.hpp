#pragma once

#include <filesystem>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace YAML {
class Node;
}

namespace nlslab::lab {

enum class Kind { Simulate, Sweep, Bisect, Galerkin, Manifold, Selfsim };
std::string_view to_string(Kind k);

struct SimulateBlock {
  double theta = std::numbers::pi / 2;
  double dt = 1e-4;
  double t_end = 1.0;
  int n_modes = 256;
  double period = 1.0;
  std::string initial = "cos:30+const:-5.3070235";
  double blowup_threshold = 1e8;
  int record_stride = 100;    // steps per series.csv row
  int snapshot_stride = 1;    // series rows per snapshot file (0 = none)
  int norm_stride = 1;        // steps per norms.csv row
  int energy_modes = 8;
  bool trapping_check = false;
  friend bool operator==(const SimulateBlock&, const SimulateBlock&) = default;
};

struct SweepBlock {
  std::string family = "cos:30";
  std::string A = "-150:150:1";  // lo:hi:step
  double theta = std::numbers::pi / 2;
  double dt = 1e-4;
  double t_end = 1.0;
  int n_modes = 256;
  int record_stride = 100;
  int threads = 0;
  friend bool operator==(const SweepBlock&, const SweepBlock&) = default;
};

struct BisectBlock {
  std::string family = "cos:30";
  std::string range = "-10:0";
  double tol = 1e-6;
  double dt = 1e-4;
  double t_max = 5.0;
  int n_modes = 256;
  double decay_threshold = 1e-3;
  friend bool operator==(const BisectBlock&, const BisectBlock&) = default;
};

struct GalerkinBlock {
  int N = 3;
  double theta = std::numbers::pi / 2;
  // "values:a0,a1,..." | "sigma:s1,s2,..." | "targets:v1,v2,..." (a_1..a_N fixed on the manifold)
  std::string init = "targets:0.5,0,0";
  int order = 20;  // manifold order for sigma/targets
  double dt = 1e-3;
  double t_end = 200.0;
  int record_stride = 100;
  friend bool operator==(const GalerkinBlock&, const GalerkinBlock&) = default;
};

struct ManifoldBlock {
  int N = 3;
  int order = 20;
  std::string sigma;    // optional "s1,s2,..." to evaluate
  std::string targets;  // optional "v1,v2,..." to solve for sigma
  friend bool operator==(const ManifoldBlock&, const ManifoldBlock&) = default;
};

struct SelfsimBlock {
  std::string run;               // directory of a simulate run
  std::string window = "0.070:0.074";
  double alpha = 0.0;            // 0: default for the run's initial data
  double beta = 0.0;
  std::string frame_window;      // "t0:t1", empty = fit window
  int max_frames = 60;
  double y_min = -10.0;
  double y_max = 10.0;
  int y_points = 512;
  friend bool operator==(const SelfsimBlock&, const SelfsimBlock&) = default;
};

struct ExperimentConfig {
  Kind kind = Kind::Simulate;
  std::string name;
  std::string output_dir;
  SimulateBlock simulate;
  SweepBlock sweep;
  BisectBlock bisect;
  GalerkinBlock galerkin;
  ManifoldBlock manifold;
  SelfsimBlock selfsim;

  /// Equality on the fields that serialization keeps (kind, name, output
  /// directory and the block matching kind).
  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// Accepts "pi/2", "-pi/4", "2*pi/3", "pi" or a plain number.
double parse_angle(const std::string& s);
/// "lo:hi" -> {lo, hi}; "lo:hi:step" -> inclusive grid.
std::pair<double, double> parse_range(const std::string& s);
std::vector<double> parse_grid(const std::string& s);
std::vector<double> parse_list(const std::string& s);

ExperimentConfig config_from_node(const YAML::Node& node);
/// YAML text, or a meta.json written by a previous run (its "config" entry).
ExperimentConfig config_from_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_yaml(const ExperimentConfig& cfg);
std::string config_to_json(const ExperimentConfig& cfg);

/// Applies "block.key=value" overrides to YAML text before parsing.
ExperimentConfig apply_overrides(const ExperimentConfig& cfg, const std::vector<std::string>& sets);

/// output_dir resolved against $NLSLAB_OUTPUT_ROOT (default "runs") when relative.
std::filesystem::path resolve_output(const ExperimentConfig& cfg);

/// Throws ConfigError listing every offending field.
void validate(const ExperimentConfig& cfg);

}  // namespace nlslab::lab
