#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nlslab/lab/config.hpp"

namespace nlslab::lab {

struct RecipeInfo {
  std::string name;
  std::string summary;
  bool slow = false;
};

std::vector<RecipeInfo> list_recipes();

class UnknownRecipe : public std::invalid_argument {
 public:
  explicit UnknownRecipe(const std::string& name);
};

ExperimentConfig recipe(const std::string& name);

/// Shrinks a configuration for smoke runs: mode counts multiplied by `factor`
/// (at least 16) and time steps divided by it. factor = 1 is the identity.
ExperimentConfig scaled(ExperimentConfig cfg, double factor);

}  // namespace nlslab::lab
