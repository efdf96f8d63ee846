#include "doctest.h"

#include "structrl/harness.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace structrl;

namespace {

/// Small, fast configuration for end-to-end checks.
ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.grid_width = 5;
  cfg.grid_height = 5;
  cfg.max_steps = 60;
  cfg.eval_start_x = 4;
  cfg.eval_start_y = 4;
  cfg.train_start_x = 4;
  cfg.train_start_y = 4;
  cfg.exploration_episodes = 12;
  cfg.training_episodes = 30;
  cfg.replay_capacity = 2000;
  cfg.validate();
  return cfg;
}

}  // namespace

TEST_CASE("both arms share phase 1 bit for bit") {
  const ExperimentConfig cfg = tiny_config();
  const RunResult base = run_baseline(cfg, 3);
  const RunResult structured = run_structrl(cfg, 3);
  REQUIRE(base.episodic_returns.size() ==
          static_cast<std::size_t>(cfg.total_episodes()));
  REQUIRE(structured.episodic_returns.size() == base.episodic_returns.size());
  for (int e = 0; e < cfg.exploration_episodes; ++e) {
    CAPTURE(e);
    CHECK(base.episodic_returns[e] == structured.episodic_returns[e]);
    CHECK(base.reached_goal[e] == structured.reached_goal[e]);
  }
  REQUIRE(base.sigma_trace.snapshots.size() >
          static_cast<std::size_t>(cfg.exploration_episodes));
  for (int e = 0; e <= cfg.exploration_episodes; ++e) {
    const SigmaSnapshot& sa = base.sigma_trace.snapshots[e];
    const SigmaSnapshot& sb = structured.sigma_trace.snapshots[e];
    CHECK(sa.episode == sb.episode);
    REQUIRE(sa.sigma == sb.sigma);  // exact, not approximate
  }
  // The edge log spans the whole run, but its prefix of edges first seen
  // during phase 1 must be identical across arms, in first-seen order.
  const ExploreData shared = explore_phase(cfg, 3);
  const GridSpec g = cfg.grid();
  std::vector<char> seen(static_cast<std::size_t>(g.num_states() * kNumActions), 0);
  std::vector<Transition> phase1_edges;
  for (const Transition& t : shared.buffer) {
    const std::size_t key =
        static_cast<std::size_t>(g.index(t.state) * kNumActions + static_cast<int>(t.action));
    if (!seen[key]) {
      seen[key] = 1;
      phase1_edges.push_back(t);
    }
  }
  REQUIRE(base.observed.size() >= phase1_edges.size());
  REQUIRE(structured.observed.size() >= phase1_edges.size());
  for (std::size_t i = 0; i < phase1_edges.size(); ++i) {
    CAPTURE(i);
    CHECK(base.observed[i].t.state == phase1_edges[i].state);
    CHECK(base.observed[i].t.action == phase1_edges[i].action);
    CHECK(structured.observed[i].t.state == phase1_edges[i].state);
    CHECK(structured.observed[i].t.action == phase1_edges[i].action);
  }
}

TEST_CASE("identical seeds reproduce identical runs") {
  const ExperimentConfig cfg = tiny_config();
  const RunResult a = run_structrl(cfg, 7);
  const RunResult b = run_structrl(cfg, 7);
  CHECK(a.episodic_returns == b.episodic_returns);
  CHECK(a.distance_field.d == b.distance_field.d);
  CHECK(a.rho == b.rho);
  REQUIRE(a.eval_returns.size() == b.eval_returns.size());
  for (std::size_t i = 0; i < a.eval_returns.size(); ++i)
    CHECK(a.eval_returns[i].ret == b.eval_returns[i].ret);

  const RunResult c = run_structrl(cfg, 8);
  CHECK(a.episodic_returns != c.episodic_returns);
}

TEST_CASE("run bookkeeping is internally consistent") {
  const ExperimentConfig cfg = tiny_config();
  const GridSpec g = cfg.grid();
  const RunResult r = run_structrl(cfg, 5);
  CHECK(arm_name(r.arm) == std::string("structrl"));
  CHECK(arm_name(Arm::Baseline) == std::string("baseline"));
  REQUIRE(r.seed_manifest.has_value());
  for (const State& s : r.seed_manifest->states) CHECK(g.in_bounds(s));
  CHECK(r.visit_counts.size() == static_cast<std::size_t>(g.num_states()));
  CHECK(r.replay_counts.size() == static_cast<std::size_t>(g.num_states()));
  // The goal is entered at most once per episode, exactly when it ends there.
  std::int64_t reached_total = 0;
  for (auto f : r.reached_goal) reached_total += f;
  CHECK(r.visit_counts[g.index(g.goal)] == reached_total);
  std::int64_t replayed = 0;
  for (std::int64_t c : r.replay_counts) replayed += c;
  CHECK(replayed > 0);
  for (const EvalPoint& p : r.eval_returns) {
    CHECK(p.episode % cfg.eval_every == 0);
    CHECK(p.ret <= 0.0);
    CHECK(p.ret >= cfg.max_steps * cfg.step_reward);
  }
  // Phase 2 used the recovered field, so some state must be reachable.
  bool any_reached = false;
  for (int d : r.distance_field.d) any_reached |= (d != kUnreached);
  CHECK(any_reached);
}

TEST_CASE("greedy evaluation scores the table and nothing else") {
  GridSpec g;
  g.validate();
  QTable table(g, Support(-100.0, 0.0, 51), 1.0);

  // Fresh uniform table: ties resolve to Up everywhere, which from (9,9)
  // walks to (9,0) and stalls on the border until the step cap.
  CHECK(evaluate_greedy(table, g, {9, 9}) == -100.0);

  // Converge with full-step synchronous sweeps, then the rollout is optimal.
  for (int sweep = 0; sweep < 25; ++sweep) table = synchronous_sweep(table, 1.0);
  CHECK(evaluate_greedy(table, g, {9, 9}) == -18.0);
  CHECK(evaluate_greedy(table, g, {0, 1}) == -1.0);
  CHECK(evaluate_greedy(table, g, g.goal) == 0.0);
}

TEST_CASE("rank correlation matches hand-computed cases") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{2, 4, 6, 8, 10};
  CHECK(spearman(a, b) == doctest::Approx(1.0));
  const std::vector<double> rev{5, 4, 3, 2, 1};
  CHECK(spearman(a, rev) == doctest::Approx(-1.0));

  const std::vector<double> x{1, 2, 3};
  const std::vector<double> y{1, 3, 2};
  CHECK(spearman(x, y) == doctest::Approx(0.5));

  // Tie on the left side: average ranks give sqrt(3)/2.
  const std::vector<double> tx{1, 1, 2};
  const std::vector<double> ty{1, 2, 3};
  CHECK(spearman(tx, ty) == doctest::Approx(0.8660254037844387));

  const std::vector<double> flat{4, 4, 4};
  CHECK(std::isnan(spearman(flat, ty)));

  const std::vector<double> two{1, 2};
  CHECK_THROWS_AS(spearman(two, two), std::invalid_argument);
  CHECK_THROWS_AS(spearman(x, two), std::invalid_argument);
}

TEST_CASE("aggregate reports per-episode quartiles across runs") {
  RunResult r1, r2, r3, r4;
  r1.episodic_returns = {-10, -20};
  r2.episodic_returns = {-20, -20};
  r3.episodic_returns = {-30, -20};
  r4.episodic_returns = {-40, -24};
  r1.reached_goal = {1, 1};
  r2.reached_goal = {1, 0};
  r3.reached_goal = {0, 0};
  r4.reached_goal = {0, 0};
  const ArmSummary s = aggregate({r1, r2, r3, r4});
  REQUIRE(s.episodes == std::vector<int>{1, 2});
  CHECK(s.mean[0] == doctest::Approx(-25.0));
  CHECK(s.median[0] == doctest::Approx(-25.0));
  CHECK(s.q25[0] == doctest::Approx(-32.5));  // type-7 linear interpolation
  CHECK(s.q75[0] == doctest::Approx(-17.5));
  CHECK(s.mean[1] == doctest::Approx(-21.0));
  CHECK(s.median[1] == doctest::Approx(-20.0));
  CHECK(s.success_rate[0] == doctest::Approx(0.5));
  CHECK(s.success_rate[1] == doctest::Approx(0.25));
  CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
}

TEST_CASE("sampling demo frequencies are normalized and biased as labeled") {
  ExperimentConfig cfg = tiny_config();
  cfg.demo_draws = 20000;
  const GridSpec g = cfg.grid();
  const SamplingDemo demo = compare_sampling(cfg, 2, cfg.demo_draws);

  auto total = [](const std::vector<double>& f) {
    double t = 0;
    for (double v : f) t += v;
    return t;
  };
  CHECK(total(demo.uniform_freq) == doctest::Approx(1.0));
  CHECK(total(demo.sigma_freq) == doctest::Approx(1.0));
  CHECK(total(demo.tstar_freq) == doctest::Approx(1.0));
  for (const auto* f : {&demo.uniform_freq, &demo.sigma_freq, &demo.tstar_freq})
    REQUIRE(f->size() == static_cast<std::size_t>(g.num_states()));
  // The uniform strategy covers every state roughly evenly.
  const double expected = 1.0 / g.num_states();
  for (const State& s : all_states(g))
    CHECK(demo.uniform_freq[g.index(s)] == doctest::Approx(expected).epsilon(0.5));
  // The goal never learns anything: zero spread, no activation episode.
  CHECK(demo.sigma_final[g.index(g.goal)] == 0.0);
  CHECK(demo.tstar.t_star[g.index(g.goal)] == kNever);
  CHECK(demo.query_episode >= 1);
  CHECK(demo.query_episode <= cfg.exploration_episodes);
}

TEST_CASE("parallel execution matches sequential execution") {
  const ExperimentConfig cfg = tiny_config();
  const std::vector<int> seeds{0, 1, 2, 3};
  const auto seq = run_many(cfg, Arm::StructRL, seeds, 1);
  const auto par = run_many(cfg, Arm::StructRL, seeds, 2);
  REQUIRE(seq.size() == par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].run_seed == par[i].run_seed);
    CHECK(seq[i].episodic_returns == par[i].episodic_returns);
    CHECK(seq[i].distance_field.d == par[i].distance_field.d);
  }
}
