#include "structrl/structure.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>

namespace structrl {

TransitionGraph::TransitionGraph(const GridSpec& spec)
    : spec_(spec),
      edge_seen_(static_cast<std::size_t>(spec.num_states()) *
                     spec.num_states(),
                 false),
      visited_(spec.num_states(), false) {}

void TransitionGraph::add_edge(State from, State to) {
  if (!spec_.in_bounds(from) || !spec_.in_bounds(to))
    throw std::invalid_argument("TransitionGraph: state outside the grid");
  const int u = spec_.index(from);
  const int v = spec_.index(to);
  visited_[u] = true;
  visited_[v] = true;
  const std::size_t key =
      static_cast<std::size_t>(u) * spec_.num_states() + v;
  if (edge_seen_[key]) return;
  edge_seen_[key] = true;
  edges_.emplace_back(from, to);
}

DistanceField bfs_distance(const TransitionGraph& graph,
                           const std::vector<State>& sources) {
  if (sources.empty())
    throw std::invalid_argument("bfs_distance: empty seed set");
  const GridSpec& spec = graph.spec();
  const int n = spec.num_states();

  // Reverse adjacency: an observed edge u -> v lets distance grow from v
  // back to u.
  std::vector<std::vector<int>> rev(n);
  for (const auto& [from, to] : graph.edges())
    rev[spec.index(to)].push_back(spec.index(from));

  DistanceField field{std::vector<int>(n, kUnreached)};
  std::queue<int> frontier;
  for (const State& s : sources) {
    const int idx = spec.index(s);
    if (field.d[idx] == kUnreached) {
      field.d[idx] = 0;
      frontier.push(idx);
    }
  }
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int u : rev[v]) {
      if (field.d[u] == kUnreached) {
        field.d[u] = field.d[v] + 1;
        frontier.push(u);
      }
    }
  }
  return field;
}

double direction_score(int d_s, int d_next, double lambda) {
  if (lambda <= 0.0)
    throw std::invalid_argument("direction_score: lambda must be positive");
  if (d_s == kUnreached || d_next == kUnreached) return 1.0;
  return std::exp(lambda * static_cast<double>(d_s - d_next));
}

double replay_score(int d_s, int d_next, double alpha) {
  if (alpha <= 0.0)
    throw std::invalid_argument("replay_score: alpha must be positive");
  if (d_s == kUnreached || d_next == kUnreached) return 0.0;
  return std::tanh(alpha * static_cast<double>(d_s - d_next));
}

TransitionGraph full_grid_graph(const GridSpec& spec) {
  TransitionGraph graph(spec);
  for (const State& s : all_states(spec)) {
    if (s == spec.goal) continue;
    for (Action a : kAllActions) graph.add_observation(step(spec, s, a));
  }
  return graph;
}

}  // namespace structrl
