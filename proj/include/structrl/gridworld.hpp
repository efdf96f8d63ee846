#pragma once

#include <cstdint>
#include <vector>

namespace structrl {

struct State {
  int x = 0;
  int y = 0;
  bool operator==(const State&) const = default;
};

/// Fixed ordering; greedy ties are always broken Up < Down < Left < Right.
enum class Action : std::uint8_t { Up = 0, Down = 1, Left = 2, Right = 3 };

inline constexpr int kNumActions = 4;
inline constexpr Action kAllActions[kNumActions] = {Action::Up, Action::Down,
                                                    Action::Left, Action::Right};

const char* action_name(Action a);

struct Transition {
  State state;
  Action action = Action::Up;
  double reward = 0.0;
  State next_state;
  bool terminal = false;
};

/// Deterministic 4-connected grid. (0,0) is the upper-left cell; Up decreases y.
struct GridSpec {
  int width = 10;
  int height = 10;
  State goal{0, 0};
  double step_reward = -1.0;
  int max_steps = 100;

  int num_states() const { return width * height; }
  bool in_bounds(State s) const {
    return s.x >= 0 && s.x < width && s.y >= 0 && s.y < height;
  }
  /// Row-major state index.
  int index(State s) const { return s.y * width + s.x; }
  State state_at(int idx) const { return {idx % width, idx / width}; }

  /// Throws std::invalid_argument on a malformed spec.
  void validate() const;
};

/// One deterministic environment step. Moving into a border leaves the
/// position unchanged. Stepping from the goal is a contract violation and
/// throws std::invalid_argument.
Transition step(const GridSpec& spec, State s, Action a);

/// Shortest-path step count from s to the goal (BFS over the grid graph).
int true_distance(const GridSpec& spec, State s);

/// true_distance for every state, row-major.
std::vector<int> true_distance_field(const GridSpec& spec);

/// All states in row-major order.
std::vector<State> all_states(const GridSpec& spec);

}  // namespace structrl
