#pragma once

#include <filesystem>
#include <string>

#include "nlslab/manifold.hpp"

namespace nlslab {

/// JSON with every exact coefficient as a pair of "p/q" strings.
std::string model_to_json(const TaylorModel& model);
TaylorModel model_from_json(const std::string& text);

void save_model(const std::filesystem::path& path, const TaylorModel& model);
TaylorModel load_model(const std::filesystem::path& path);

std::string resonances_to_json(const ResonanceSet& set);

}  // namespace nlslab
