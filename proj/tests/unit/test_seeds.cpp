#include "doctest.h"

#include "structrl/seeds.hpp"

#include <stdexcept>
#include <vector>

using namespace structrl;

namespace {

GridSpec grid2x2() {
  GridSpec g;
  g.width = 2;
  g.height = 2;
  return g;
}

}  // namespace

TEST_CASE("no activated state means no early-activation seeds") {
  GridSpec g = grid2x2();
  TStarField tstar{{kNever, kNever, kNever, kNever}};
  CHECK_FALSE(seeds_from_tstar(g, tstar, {0, 0, 0, 0}, 2, 1).has_value());
}

TEST_CASE("smallest activation times win, ties in row-major order") {
  GridSpec g = grid2x2();
  TStarField tstar{{5, 3, 3, 4}};
  auto set = seeds_from_tstar(g, tstar, {0, 0, 0, 0}, 2, 1);
  REQUIRE(set.has_value());
  CHECK(set->strategy == SeedStrategy::TStar);
  CHECK(set->k == 2);
  REQUIRE(set->states.size() == 2);
  CHECK(set->states[0] == State{1, 0});  // index 1, t*=3
  CHECK(set->states[1] == State{0, 1});  // index 2, t*=3, later in row-major
}

TEST_CASE("unstable states are filtered out first") {
  GridSpec g = grid2x2();
  TStarField tstar{{1, 2, 3, 4}};
  auto set = seeds_from_tstar(g, tstar, {9, 0, 0, 9}, 2, 1);
  REQUIRE(set.has_value());
  REQUIRE(set->states.size() == 2);
  CHECK(set->states[0] == State{1, 0});
  CHECK(set->states[1] == State{0, 1});
}

TEST_CASE("the stability threshold relaxes until enough states qualify") {
  GridSpec g = grid2x2();
  TStarField tstar{{1, kNever, 3, 4}};
  auto set = seeds_from_tstar(g, tstar, {2, 0, 0, 0}, 3, 0);
  REQUIRE(set.has_value());
  REQUIRE(set->states.size() == 3);
  CHECK(set->states[0] == State{0, 0});  // joins once the filter reaches 2
  CHECK(set->states[1] == State{0, 1});
  CHECK(set->states[2] == State{1, 1});
}

TEST_CASE("an exhausted candidate pool returns fewer than k states") {
  GridSpec g = grid2x2();
  TStarField tstar{{kNever, 6, kNever, kNever}};
  auto set = seeds_from_tstar(g, tstar, {0, 5, 0, 0}, 3, 0);
  REQUIRE(set.has_value());
  REQUIRE(set->states.size() == 1);
  CHECK(set->states[0] == State{1, 0});
  CHECK(set->k == 3);

  CHECK_THROWS_AS(seeds_from_tstar(g, tstar, {0, 0, 0, 0}, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("terminal-transition origins, most frequent first") {
  GridSpec g;
  std::vector<Transition> buffer;
  buffer.push_back(step(g, {1, 0}, Action::Left));
  buffer.push_back(step(g, {0, 1}, Action::Up));
  buffer.push_back(step(g, {0, 1}, Action::Up));
  buffer.push_back(step(g, {5, 5}, Action::Down));  // non-terminal noise

  auto set = seeds_from_reward(g, buffer, 5);
  REQUIRE(set.has_value());
  CHECK(set->strategy == SeedStrategy::Reward);
  REQUIRE(set->states.size() == 2);
  CHECK(set->states[0] == State{0, 1});  // two observations
  CHECK(set->states[1] == State{1, 0});

  auto truncated = seeds_from_reward(g, buffer, 1);
  REQUIRE(truncated->states.size() == 1);
  CHECK(truncated->states[0] == State{0, 1});
}

TEST_CASE("no terminal observation means no reward-based seeds") {
  GridSpec g;
  std::vector<Transition> buffer{step(g, {5, 5}, Action::Up)};
  CHECK_FALSE(seeds_from_reward(g, buffer, 3).has_value());
  CHECK_FALSE(seeds_from_reward(g, {}, 3).has_value());
}

TEST_CASE("equal-count terminal origins rank in row-major order") {
  GridSpec g;
  std::vector<Transition> buffer;
  buffer.push_back(step(g, {0, 1}, Action::Up));
  buffer.push_back(step(g, {1, 0}, Action::Left));
  auto set = seeds_from_reward(g, buffer, 2);
  REQUIRE(set->states.size() == 2);
  CHECK(set->states[0] == State{1, 0});  // index 1 before index 10
  CHECK(set->states[1] == State{0, 1});
}

TEST_CASE("improvement deltas on a fresh symmetric table are all negative") {
  GridSpec g;
  g.width = 4;
  g.height = 4;
  QTable table(g, Support(-10.0, 0.0, 11), 1.0);
  std::vector<Transition> buffer{step(g, {2, 2}, Action::Up)};
  const BellmanImprovement imp = bellman_improvement(table, buffer);
  const int e = g.index({2, 2}) * kNumActions + static_cast<int>(Action::Up);
  CHECK(imp.defined[e]);
  CHECK(imp.delta[e] == doctest::Approx(-1.0));  // r + V(s') - V(s) = r
  CHECK_FALSE(seeds_from_bellman(table, buffer, 2).has_value());
}

TEST_CASE("improvement seeds appear behind a freshly grounded state") {
  GridSpec g;
  g.width = 4;
  g.height = 4;
  QTable table(g, Support(-10.0, 0.0, 11), 1.0);
  const Transition into_goal = step(g, {1, 0}, Action::Left);
  table.update(into_goal, 1.0);
  REQUIRE(table.value({1, 0}) == doctest::Approx(-1.0));

  std::vector<Transition> buffer{into_goal, step(g, {2, 0}, Action::Left)};
  const BellmanImprovement imp = bellman_improvement(table, buffer);
  const int behind = g.index({2, 0}) * kNumActions + static_cast<int>(Action::Left);
  // -1 + V(1,0) - V(2,0) = -1 - 1 + 5 = 3
  CHECK(imp.delta[behind] == doctest::Approx(3.0));

  auto set = seeds_from_bellman(table, buffer, 2);
  REQUIRE(set.has_value());
  CHECK(set->strategy == SeedStrategy::Bellman);
  // The grounded state itself has delta exactly 0 and is excluded;
  // only its predecessor carries strictly positive improvement.
  REQUIRE(set->states.size() == 1);
  CHECK(set->states[0] == State{2, 0});
}

TEST_CASE("a converged table offers no improvement anywhere") {
  GridSpec g;
  g.width = 4;
  g.height = 4;
  QTable table(g, Support(-10.0, 0.0, 11), 1.0);
  for (int i = 0; i < 12; ++i) table = synchronous_sweep(table, 1.0);

  std::vector<Transition> buffer;
  for (const State& s : all_states(g)) {
    if (s == g.goal) continue;
    for (Action a : kAllActions) buffer.push_back(step(g, s, a));
  }
  CHECK_FALSE(seeds_from_bellman(table, buffer, 3).has_value());
}

TEST_CASE("the hybrid selector takes the first strategy that produced a set") {
  SeedSet a;
  a.states = {{1, 0}};
  a.strategy = SeedStrategy::TStar;
  SeedSet b;
  b.states = {{0, 1}};
  b.strategy = SeedStrategy::Reward;

  CHECK(seeds_hybrid(a, b, std::nullopt).strategy == SeedStrategy::TStar);
  CHECK(seeds_hybrid(std::nullopt, b, std::nullopt).strategy == SeedStrategy::Reward);
  CHECK(seeds_hybrid(std::nullopt, std::nullopt, a).strategy == SeedStrategy::TStar);
  CHECK_THROWS_AS(seeds_hybrid(std::nullopt, std::nullopt, std::nullopt),
                  SeedSelectionError);
}

TEST_CASE("strategy names round-trip") {
  for (SeedStrategy s : {SeedStrategy::TStar, SeedStrategy::Reward,
                         SeedStrategy::Bellman, SeedStrategy::Hybrid})
    CHECK(seed_strategy_from_name(seed_strategy_name(s)) == s);
  CHECK_THROWS_AS(seed_strategy_from_name("nope"), std::invalid_argument);
}
