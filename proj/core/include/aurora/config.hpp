#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aurora/dataset.hpp"
#include "aurora/training.hpp"

namespace aurora {

/// Grid of the (lambda_dep, lambda_mat) ablation.
struct AblationConfig {
  std::vector<double> lambda_dep{0.0, 0.5};
  std::vector<double> lambda_mat{0.0, 0.5};
  int runs = 3;
};

/// Everything the command-line tool reads from a configuration file.
struct AppConfig {
  DatasetConfig dataset;
  TrainConfig train;
  AblationConfig ablation;
};

/// Parses INI text with [dataset], [train], [model] and [ablate] sections.
/// Missing keys keep their defaults; unknown keys or unparsable values throw
/// ValidationError.
AppConfig parse_config(const std::string& text);
AppConfig load_config(const std::string& path);

/// Value of AG_SEED when set; throws ValidationError when it is not an
/// unsigned integer.
std::optional<std::uint64_t> seed_from_environment();

}  // namespace aurora
