#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "structrl/c51.hpp"
#include "structrl/config.hpp"
#include "structrl/control.hpp"
#include "structrl/dynamics.hpp"
#include "structrl/seeds.hpp"
#include "structrl/structure.hpp"

namespace structrl {

enum class Arm { Baseline, StructRL };

const char* arm_name(Arm a);

struct EvalPoint {
  int episode = 0;
  double ret = 0.0;
};

/// One distinct (state, action) observation with its occurrence count, in
/// first-observation order. The environment is deterministic, so the pair
/// fixes reward, successor, and terminal flag.
struct ObservedEdge {
  Transition t;
  std::int64_t count = 0;
};

struct RunResult {
  Arm arm = Arm::Baseline;
  int run_seed = 0;
  std::vector<double> episodic_returns;
  std::vector<std::uint8_t> reached_goal;
  std::vector<EvalPoint> eval_returns;

  SigmaTrace sigma_trace;
  StabilityTrace stability_trace;
  std::vector<ObservedEdge> observed;

  TStarField tstar_field;        // from the full trace
  std::vector<double> sigma_final;
  /// Recovered structural distances: the field phase 2 actually used for
  /// the structrl arm, or a post-run recovery for the baseline (all
  /// kUnreached if recovery failed).
  DistanceField distance_field;
  std::optional<SeedSet> seed_manifest;

  std::vector<std::int64_t> visit_counts;   // states occupied during training
  std::vector<std::int64_t> replay_counts;  // origin states of replayed draws

  /// Rank correlation between finite t*(s) and true_distance(s); NaN when
  /// fewer than three states activated.
  double rho = std::numeric_limits<double>::quiet_NaN();
  /// Measured run duration; console reporting only, never exported.
  double wall_seconds = 0.0;
};

/// C51 with epsilon-greedy actions and uniform replay for
/// exploration_episodes + training_episodes. Deterministic in (cfg, run_seed).
RunResult run_baseline(const ExperimentConfig& cfg, int run_seed);

/// Same phase 1 as the baseline (bit-identical trajectories under the same
/// run_seed), then seed selection, distance recovery, and structure-guided
/// phase 2. Propagates SeedSelectionError.
RunResult run_structrl(const ExperimentConfig& cfg, int run_seed);

/// Frozen state after phase 1 only; input to seed-selection analyses.
struct ExploreData {
  QTable table;
  SigmaTrace trace;
  StabilityTrace stability;
  std::vector<Transition> buffer;
  TransitionGraph graph;
};

ExploreData explore_phase(const ExperimentConfig& cfg, int run_seed);

/// Greedy rollout from start, no exploration, capped at max_steps. Returns
/// the summed reward, always in [max_steps * step_reward, 0].
double evaluate_greedy(const QTable& table, const GridSpec& spec, State start);

/// Spearman rank correlation with average ranks for ties. Requires at least
/// three pairs; returns NaN when either side is constant.
double spearman(std::span<const double> xs, std::span<const double> ys);

/// Normalized visitation frequencies for the three sampling strategies.
struct SamplingDemo {
  int query_episode = 0;
  std::vector<double> uniform_freq;
  std::vector<double> sigma_freq;
  std::vector<double> tstar_freq;
  std::vector<double> sigma_final;
  TStarField tstar;
};

/// Draws `draws` state samples per strategy from the weights implied by a
/// finished run's trace. The t*-kernel query episode comes from
/// cfg.demo_query_episode, or the earliest finite t* when negative.
SamplingDemo sampling_demo_from(const RunResult& result, const ExperimentConfig& cfg, int draws);

/// Convenience wrapper: trains a fresh baseline, then delegates.
SamplingDemo compare_sampling(const ExperimentConfig& cfg, int run_seed, int draws);

/// Across-run return statistics, one entry per episode.
struct ArmSummary {
  std::vector<int> episodes;
  std::vector<double> mean;
  std::vector<double> median;
  std::vector<double> q25;
  std::vector<double> q75;
  std::vector<double> success_rate;
};

ArmSummary aggregate(const std::vector<RunResult>& results);

/// Runs one arm over the given run seeds, at most `jobs` runs concurrently.
/// Results are in run-seed order and identical to a sequential execution.
std::vector<RunResult> run_many(const ExperimentConfig& cfg, Arm arm,
                                const std::vector<int>& run_seeds, int jobs);

}  // namespace structrl
