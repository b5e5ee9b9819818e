#pragma once

// Experiment documents. A document is a JSON object:
//
//   {
//     "generator": {"d": 10, "K": 10, "L": 4, "w_max": 0, "env_seed": 1,
//                   "fixed_env": false, "link": "identity"},
//     "environment": { ... },          // explicit instance instead of a generator
//     "noise": {"gaussian_sd": 1, "laplace_scale": 0},
//     "agents": ["rank_ucb", {"kind": "win_rank_ucb", "window": {"S": 3}}],
//     "T": 10000, "runs": 20, "run_seed_base": 1, "threads": 1,
//     "record_timing": false,
//     "robust": {"eps": [0, 1e-5, 3]},
//     "bench": {"K": [10, 100], "T": 200, "runs": 1},
//     "output": {"dir": ".", "csv": "regret.csv", "svg": "regret.svg", "bounds": [1]}
//   }
//
// Every key is optional except "agents". Unknown keys are errors. Agent
// "bounds" override the environment's bounds field by field.

#include <filesystem>
#include <string>

#include "rankbandit/harness.hpp"

namespace rankbandit {

// Throws ConfigError with the offending field path.
ExperimentConfig parse_experiment(const std::string& text);

// Throws IoError when the file cannot be read.
ExperimentConfig load_experiment(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace rankbandit
