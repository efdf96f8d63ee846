#include "structrl/gridworld.hpp"

#include <queue>
#include <stdexcept>
#include <string>

namespace structrl {

const char* action_name(Action a) {
  switch (a) {
    case Action::Up: return "up";
    case Action::Down: return "down";
    case Action::Left: return "left";
    case Action::Right: return "right";
  }
  return "?";
}

void GridSpec::validate() const {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("grid dimensions must be positive");
  if (!in_bounds(goal))
    throw std::invalid_argument("goal lies outside the grid");
  if (max_steps < width + height)
    throw std::invalid_argument(
        "max_steps must be at least width + height so every state can reach "
        "the goal within the episode cap");
}

Transition step(const GridSpec& spec, State s, Action a) {
  if (s == spec.goal)
    throw std::invalid_argument("step() called on the terminal goal state");
  State next = s;
  switch (a) {
    case Action::Up: next.y -= 1; break;
    case Action::Down: next.y += 1; break;
    case Action::Left: next.x -= 1; break;
    case Action::Right: next.x += 1; break;
  }
  if (!spec.in_bounds(next)) next = s;  // border clamp
  return Transition{s, a, spec.step_reward, next, next == spec.goal};
}

std::vector<int> true_distance_field(const GridSpec& spec) {
  // BFS from the goal over the undirected grid graph. Equals Manhattan
  // distance while the grid has no obstacles, but stays correct if an
  // obstacle mask is ever added.
  const int n = spec.num_states();
  std::vector<int> dist(n, -1);
  std::queue<int> frontier;
  dist[spec.index(spec.goal)] = 0;
  frontier.push(spec.index(spec.goal));
  while (!frontier.empty()) {
    const int idx = frontier.front();
    frontier.pop();
    const State s = spec.state_at(idx);
    const State neighbors[4] = {
        {s.x, s.y - 1}, {s.x, s.y + 1}, {s.x - 1, s.y}, {s.x + 1, s.y}};
    for (const State& nb : neighbors) {
      if (!spec.in_bounds(nb)) continue;
      const int nidx = spec.index(nb);
      if (dist[nidx] < 0) {
        dist[nidx] = dist[idx] + 1;
        frontier.push(nidx);
      }
    }
  }
  return dist;
}

int true_distance(const GridSpec& spec, State s) {
  return true_distance_field(spec)[spec.index(s)];
}

std::vector<State> all_states(const GridSpec& spec) {
  std::vector<State> states;
  states.reserve(spec.num_states());
  for (int y = 0; y < spec.height; ++y)
    for (int x = 0; x < spec.width; ++x) states.push_back({x, y});
  return states;
}

}  // namespace structrl
