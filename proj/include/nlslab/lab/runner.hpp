#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "nlslab/lab/config.hpp"

namespace nlslab::lab {

struct RunSummary {
  std::filesystem::path dir;
  std::string outcome;
  std::string details_json;  // kind-specific summary, also stored in meta.json
};

/// Validates cfg, runs the pipeline for cfg.kind into resolve_output(cfg) and
/// writes meta.json next to the data. Progress lines go to `log` if given.
RunSummary run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// A run directory given by name: used as is when it exists, otherwise
/// looked up under the output root.
std::filesystem::path locate_run(const std::string& run);

}  // namespace nlslab::lab
