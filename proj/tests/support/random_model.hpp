#pragma once

#include <cstdint>
#include <random>

#include "ftr/model.hpp"

namespace ftr::testing {

struct RandomModelOptions {
  std::size_t max_faults = 4;
  std::size_t max_children = 3;
  std::size_t max_depth = 2;
  bool exotic_text = false;  // quotes, escapes and control bytes in free text
};

/// Generates a model that passes validate_model. Deterministic in `rng`.
SystemModel random_model(std::mt19937_64& rng, const RandomModelOptions& options = {});

}  // namespace ftr::testing
