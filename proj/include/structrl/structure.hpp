#pragma once

#include "structrl/gridworld.hpp"

#include <utility>
#include <vector>

namespace structrl {

/// Sentinel for states outside the recovered structure.
inline constexpr int kUnreached = -1;

/// Directed edges between states observed during training, plus the visited
/// set. Edges are deduplicated; insertion order is preserved.
class TransitionGraph {
 public:
  explicit TransitionGraph(const GridSpec& spec);

  void add_edge(State from, State to);
  void add_observation(const Transition& t) { add_edge(t.state, t.next_state); }

  bool visited(State s) const { return visited_[spec_.index(s)]; }
  const std::vector<std::pair<State, State>>& edges() const { return edges_; }
  const GridSpec& spec() const { return spec_; }

 private:
  GridSpec spec_;
  std::vector<std::pair<State, State>> edges_;
  std::vector<bool> edge_seen_;  // num_states^2 adjacency mask
  std::vector<bool> visited_;
};

/// Structural distance to the seed set, row-major; kUnreached where no
/// observed path exists.
struct DistanceField {
  std::vector<int> d;

  int at(const GridSpec& spec, State s) const { return d[spec.index(s)]; }
};

/// Multi-source BFS from the seed states over *reversed* observed edges, so
/// d(s) counts steps from s toward the seeds along transitions the agent can
/// actually take. Unvisited or disconnected states get kUnreached.
DistanceField bfs_distance(const TransitionGraph& graph,
                           const std::vector<State>& sources);

/// exp(lambda * (d_s - d_next)); neutral 1 when either side is unreached.
double direction_score(int d_s, int d_next, double lambda);

/// tanh(alpha * (d_s - d_next)); neutral 0 when either side is unreached.
double replay_score(int d_s, int d_next, double alpha);

/// Graph containing every environment transition. Model-based upper bound
/// used for ablations.
TransitionGraph full_grid_graph(const GridSpec& spec);

}  // namespace structrl
