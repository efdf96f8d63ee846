#pragma once

#include "structrl/c51.hpp"
#include "structrl/structure.hpp"

#include <utility>
#include <vector>

namespace structrl {

/// Sentinel for states that never showed a strictly positive sigma increment.
inline constexpr int kNever = -1;

/// How the per-state sigma is reduced from the per-action distributions.
enum class SigmaReduction { Greedy, MeanOverActions };

struct SigmaSnapshot {
  int episode = 0;
  std::vector<double> sigma;  // row-major, one value per state
};

/// Per-state return-spread time series, one snapshot per completed episode.
struct SigmaTrace {
  std::vector<SigmaSnapshot> snapshots;
};

/// Appends sigma(s) for every state. The episode index must be strictly
/// increasing.
void record_snapshot(SigmaTrace& trace, int episode, const QTable& table,
                     SigmaReduction reduction = SigmaReduction::Greedy);

/// Episode index of the strongest positive sigma increment per state;
/// kNever where the series never strictly increases.
struct TStarField {
  std::vector<int> t_star;
};

/// Per state: optionally smooth the sigma series with a centered moving
/// average (window must be odd; 1 disables smoothing), then return the
/// episode of the earliest maximal positive increment. Requires at least two
/// snapshots.
TStarField t_star(const SigmaTrace& trace, int smoothing_window);

struct GreedySnapshot {
  int episode = 0;
  std::vector<Action> greedy;  // row-major
};

/// Greedy-action log used for the policy-stability filter.
struct StabilityTrace {
  std::vector<GreedySnapshot> greedy_log;
  int window = 5;
};

void record_greedy(StabilityTrace& trace, int episode, const QTable& table);

/// Per state, how many of the final `window` log entries differ from their
/// predecessor. Requires the log to span at least `window` entries.
std::vector<int> stability_counts(const StabilityTrace& trace);

/// Observed edges (s -> s') where both t* values are finite,
/// |t*(s) - t*(s')| <= tau, and the edge makes directional progress
/// d(s') < d(s). Sorted by (s, s') index for reproducibility.
std::vector<std::pair<State, State>> frontier_transitions(
    const TStarField& tstar, const DistanceField& field, int tau,
    const TransitionGraph& graph);

enum class SamplingStrategy { Uniform, Sigma, TStar };

/// Normalized per-state sampling weights for the visitation analysis.
/// Every weight is at least `floor` before normalization, so all states stay
/// reachable. The t*-strategy uses an exponential kernel
/// exp(-|t*(s) - current_episode| / tau_kernel); kNever states get the floor.
std::vector<double> sampling_weights(SamplingStrategy strategy,
                                     const std::vector<double>& sigma,
                                     const TStarField& tstar,
                                     int current_episode, double tau_kernel,
                                     double floor);

}  // namespace structrl
