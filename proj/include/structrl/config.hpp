#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "structrl/distribution.hpp"
#include "structrl/dynamics.hpp"
#include "structrl/gridworld.hpp"
#include "structrl/seeds.hpp"

namespace structrl {

/// Every tunable in the pipeline, resolved from defaults, an optional config
/// file, and --set overrides, in that order. The key registry is total: each
/// field has exactly one documented key, and the resolved state can be echoed
/// back as sorted key=value pairs for the run manifest.
struct ExperimentConfig {
  int grid_width = 10;
  int grid_height = 10;
  int goal_x = 0;
  int goal_y = 0;
  double step_reward = -1.0;
  int max_steps = 100;

  double v_min = -100.0;
  double v_max = 0.0;
  int n_atoms = 51;
  double gamma = 1.0;
  double eta = 0.03;

  double epsilon_explore = 1.0;
  double epsilon_train = 0.1;
  int exploration_episodes = 30;
  int training_episodes = 300;
  int eval_every = 5;
  int eval_start_x = 9;
  int eval_start_y = 9;
  bool uniform_starts = true;
  int train_start_x = 9;
  int train_start_y = 9;

  std::string sigma_reduction = "mean";
  int smoothing_window = 3;
  int stability_window = 5;

  std::string seed_strategy = "hybrid";
  int seed_count = 5;
  int max_changes = 1;

  double lambda = 1.0;
  double alpha = 1.0;
  double weight_floor = 0.05;
  bool use_full_graph = false;
  int distance_refresh_every = 0;

  int replay_capacity = 50000;
  int batch_size = 32;
  int updates_per_step = 1;

  double tau_kernel = 5.0;
  double sampling_floor = 0.01;
  int demo_draws = 100000;
  int demo_query_episode = -1;
  int frontier_tau = 1;

  int n_random_seeds = 10;
  std::uint64_t rng_seed_base = 12345;

  GridSpec grid() const;
  Support support() const;
  SigmaReduction reduction() const;
  SeedStrategy strategy() const;
  int total_episodes() const { return exploration_episodes + training_episodes; }

  /// Throws std::invalid_argument on any out-of-range field.
  void validate() const;

  /// Sets one field by key; throws on unknown key or unparsable value.
  void set(const std::string& key, const std::string& value);

  /// All keys with their current values, sorted by key.
  std::vector<std::pair<std::string, std::string>> echo() const;

  /// One "key  default  description" line per key, for --help and docs.
  static std::string describe_keys();
};

/// Reads a flat key=value file. '#' starts a comment; blank lines are
/// skipped. Unknown keys or malformed lines throw.
ExperimentConfig load_config(const std::string& path);

/// Applies "key=value" override strings in order.
void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& overrides);

}  // namespace structrl
