#include "doctest.h"

#include "structrl/gridworld.hpp"

#include "../oracles.hpp"

#include <stdexcept>

using namespace structrl;

TEST_CASE("step moves one cell and charges the step reward") {
  GridSpec g;
  Transition t = step(g, {5, 5}, Action::Up);
  CHECK(t.next_state == State{5, 4});
  CHECK(t.reward == -1.0);
  CHECK_FALSE(t.terminal);
  CHECK(t.state == State{5, 5});
  CHECK(t.action == Action::Up);

  CHECK(step(g, {5, 5}, Action::Down).next_state == State{5, 6});
  CHECK(step(g, {5, 5}, Action::Left).next_state == State{4, 5});
  CHECK(step(g, {5, 5}, Action::Right).next_state == State{6, 5});
}

TEST_CASE("border moves leave the position unchanged") {
  GridSpec g;
  CHECK(step(g, {0, 5}, Action::Left).next_state == State{0, 5});
  CHECK(step(g, {9, 5}, Action::Right).next_state == State{9, 5});
  CHECK(step(g, {5, 0}, Action::Up).next_state == State{5, 0});
  CHECK(step(g, {5, 9}, Action::Down).next_state == State{5, 9});
  CHECK(step(g, {9, 9}, Action::Down).reward == -1.0);
}

TEST_CASE("entering the goal is terminal; leaving it is an error") {
  GridSpec g;
  Transition t = step(g, {1, 0}, Action::Left);
  CHECK(t.terminal);
  CHECK(t.next_state == g.goal);
  CHECK(step(g, {0, 1}, Action::Up).terminal);
  CHECK_FALSE(step(g, {1, 1}, Action::Left).terminal);
  CHECK_THROWS_AS(step(g, g.goal, Action::Down), std::invalid_argument);
}

TEST_CASE("state indexing is row-major and round-trips") {
  GridSpec g;
  CHECK(g.index({0, 0}) == 0);
  CHECK(g.index({9, 0}) == 9);
  CHECK(g.index({0, 1}) == 10);
  CHECK(g.index({9, 9}) == 99);
  for (int idx = 0; idx < g.num_states(); ++idx)
    CHECK(g.index(g.state_at(idx)) == idx);
}

TEST_CASE("true_distance equals the Manhattan oracle on the open grid") {
  GridSpec g;
  for (const State& s : all_states(g))
    CHECK(true_distance(g, s) == oracle::manhattan(s.x, s.y, g.goal.x, g.goal.y));

  GridSpec off;
  off.goal = {3, 7};
  for (const State& s : all_states(off))
    CHECK(true_distance(off, s) == oracle::manhattan(s.x, s.y, 3, 7));
}

TEST_CASE("true_distance_field matches per-state calls in row-major order") {
  GridSpec g;
  const std::vector<int> field = true_distance_field(g);
  REQUIRE(field.size() == 100);
  for (int idx = 0; idx < g.num_states(); ++idx)
    CHECK(field[idx] == true_distance(g, g.state_at(idx)));
}

TEST_CASE("all_states enumerates each cell once, row-major") {
  GridSpec g;
  const std::vector<State> states = all_states(g);
  REQUIRE(states.size() == 100);
  for (int idx = 0; idx < 100; ++idx) CHECK(g.index(states[idx]) == idx);
}

TEST_CASE("malformed grids are rejected") {
  GridSpec g;
  g.width = 0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = GridSpec{};
  g.goal = {10, 0};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = GridSpec{};
  g.max_steps = 0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}
