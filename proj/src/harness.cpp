#include "structrl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace structrl {

const char* arm_name(Arm a) { return a == Arm::Baseline ? "baseline" : "structrl"; }

namespace {

State sample_non_goal_start(const GridSpec& spec, RngStream& env) {
  const int goal_idx = spec.index(spec.goal);
  int idx = env.uniform_int(spec.num_states() - 1);
  if (idx >= goal_idx) ++idx;
  return spec.state_at(idx);
}

struct SeedingOutcome {
  SeedSet seeds;
  DistanceField field;
};

/// Runs the configured selector over frozen training data and grows the
/// distance field from the winning seed set. Throws SeedSelectionError when
/// the data cannot support the configured strategy.
SeedingOutcome derive_structure(const ExperimentConfig& cfg, const GridSpec& spec,
                                const QTable& table, const SigmaTrace& trace,
                                const StabilityTrace& stability,
                                std::span<const Transition> buffer,
                                const TransitionGraph& graph) {
  const TStarField tstar = t_star(trace, cfg.smoothing_window);
  const std::vector<int> stab = stability_counts(stability);
  const int k = cfg.seed_count;

  auto require = [](std::optional<SeedSet> opt, const char* what) {
    if (!opt)
      throw SeedSelectionError(std::string(what) +
                               " seed selection found no candidates; run a longer "
                               "exploration phase");
    return *opt;
  };

  SeedSet seeds;
  switch (cfg.strategy()) {
    case SeedStrategy::TStar:
      seeds = require(seeds_from_tstar(spec, tstar, stab, k, cfg.max_changes), "t*-based");
      break;
    case SeedStrategy::Reward:
      seeds = require(seeds_from_reward(spec, buffer, k), "reward-based");
      break;
    case SeedStrategy::Bellman:
      seeds = require(seeds_from_bellman(table, buffer, k), "improvement-based");
      break;
    case SeedStrategy::Hybrid:
      seeds = seeds_hybrid(seeds_from_tstar(spec, tstar, stab, k, cfg.max_changes),
                           seeds_from_reward(spec, buffer, k),
                           seeds_from_bellman(table, buffer, k));
      break;
  }

  if (cfg.use_full_graph) {
    const TransitionGraph full = full_grid_graph(spec);
    return {seeds, bfs_distance(full, seeds.states)};
  }
  return {seeds, bfs_distance(graph, seeds.states)};
}

struct ProtocolOutcome {
  RunResult result;
  QTable table;
  std::vector<Transition> buffer_entries;
  TransitionGraph graph;
};

ProtocolOutcome run_protocol(const ExperimentConfig& cfg, Arm arm, int run_seed,
                             bool stop_after_explore) {
  cfg.validate();
  const GridSpec spec = cfg.grid();
  const Support sup = cfg.support();
  if (!cfg.uniform_starts && State{cfg.train_start_x, cfg.train_start_y} == spec.goal)
    throw std::invalid_argument("config: fixed training start must not be the goal");

  const auto t_begin = std::chrono::steady_clock::now();

  QTable table(spec, sup, cfg.gamma);
  RngStream env(cfg.rng_seed_base, static_cast<std::uint64_t>(run_seed), StreamId::Env);
  RngStream policy(cfg.rng_seed_base, static_cast<std::uint64_t>(run_seed), StreamId::Policy);
  RngStream replay(cfg.rng_seed_base, static_cast<std::uint64_t>(run_seed), StreamId::Replay);

  ReplayBuffer buffer(cfg.replay_capacity);
  WeightedReplaySampler sampler(buffer, spec);
  TransitionGraph graph(spec);

  RunResult r;
  r.arm = arm;
  r.run_seed = run_seed;
  r.stability_trace.window = cfg.stability_window;
  r.visit_counts.assign(static_cast<std::size_t>(spec.num_states()), 0);
  r.replay_counts.assign(static_cast<std::size_t>(spec.num_states()), 0);

  std::vector<int> observed_at(static_cast<std::size_t>(spec.num_states() * kNumActions), -1);

  const SigmaReduction reduction = cfg.reduction();
  record_snapshot(r.sigma_trace, 0, table, reduction);
  record_greedy(r.stability_trace, 0, table);

  StructPolicyParams params;
  params.lambda = cfg.lambda;
  params.alpha = cfg.alpha;
  params.epsilon = cfg.epsilon_train;
  params.weight_floor = cfg.weight_floor;

  bool structured = false;
  const int total = stop_after_explore ? cfg.exploration_episodes : cfg.total_episodes();

  for (int episode = 0; episode < total; ++episode) {
    const bool exploring = episode < cfg.exploration_episodes;

    if (arm == Arm::StructRL && !exploring) {
      const int into_phase2 = episode - cfg.exploration_episodes;
      const bool boundary = into_phase2 == 0;
      const bool refresh = cfg.distance_refresh_every > 0 &&
                           into_phase2 % cfg.distance_refresh_every == 0;
      if (boundary || refresh) {
        try {
          SeedingOutcome out =
              derive_structure(cfg, spec, table, r.sigma_trace, r.stability_trace,
                               buffer.entries(), graph);
          r.seed_manifest = out.seeds;
          r.distance_field = std::move(out.field);
          sampler.bind(r.distance_field, params);
          structured = true;
        } catch (const SeedSelectionError&) {
          if (boundary) throw;
          // A failed refresh keeps the previous field.
        }
      }
    }

    State s = cfg.uniform_starts ? sample_non_goal_start(spec, env)
                                 : State{cfg.train_start_x, cfg.train_start_y};
    ++r.visit_counts[static_cast<std::size_t>(spec.index(s))];
    double ret = 0.0;
    bool reached = false;

    for (int step_i = 0; step_i < spec.max_steps; ++step_i) {
      Action a;
      if (exploring) {
        a = epsilon_greedy(table, s, cfg.epsilon_explore, policy);
      } else if (structured) {
        a = select_action(spec, s, r.distance_field, params, policy);
      } else {
        a = epsilon_greedy(table, s, cfg.epsilon_train, policy);
      }

      const Transition t = step(spec, s, a);
      ret += t.reward;
      ++r.visit_counts[static_cast<std::size_t>(spec.index(t.next_state))];

      buffer.push(t);
      graph.add_observation(t);
      const std::size_t key =
          static_cast<std::size_t>(spec.index(t.state) * kNumActions + static_cast<int>(t.action));
      if (observed_at[key] < 0) {
        observed_at[key] = static_cast<int>(r.observed.size());
        r.observed.push_back({t, 0});
      }
      ++r.observed[static_cast<std::size_t>(observed_at[key])].count;

      for (int u = 0; u < cfg.updates_per_step; ++u) {
        for (int b = 0; b < cfg.batch_size; ++b) {
          const Transition& drawn = sampler.draw(replay);
          ++r.replay_counts[static_cast<std::size_t>(spec.index(drawn.state))];
          table.update(drawn, cfg.eta);
        }
      }

      s = t.next_state;
      if (t.terminal) {
        reached = true;
        break;
      }
    }

    r.episodic_returns.push_back(ret);
    r.reached_goal.push_back(reached ? 1 : 0);
    record_snapshot(r.sigma_trace, episode + 1, table, reduction);
    record_greedy(r.stability_trace, episode + 1, table);
    if ((episode + 1) % cfg.eval_every == 0) {
      r.eval_returns.push_back(
          {episode + 1, evaluate_greedy(table, spec, State{cfg.eval_start_x, cfg.eval_start_y})});
    }
  }

  r.sigma_final = r.sigma_trace.snapshots.back().sigma;
  r.tstar_field = t_star(r.sigma_trace, cfg.smoothing_window);

  if (!structured) {
    // Post-run structure recovery for analysis exports; never alters training.
    try {
      SeedingOutcome out = derive_structure(cfg, spec, table, r.sigma_trace, r.stability_trace,
                                            buffer.entries(), graph);
      r.seed_manifest = out.seeds;
      r.distance_field = std::move(out.field);
    } catch (const SeedSelectionError&) {
      r.distance_field.d.assign(static_cast<std::size_t>(spec.num_states()), kUnreached);
      r.seed_manifest.reset();
    }
  }

  {
    const std::vector<int> d_true = true_distance_field(spec);
    std::vector<double> xs, ys;
    for (int i = 0; i < spec.num_states(); ++i) {
      if (r.tstar_field.t_star[static_cast<std::size_t>(i)] == kNever) continue;
      xs.push_back(static_cast<double>(r.tstar_field.t_star[static_cast<std::size_t>(i)]));
      ys.push_back(static_cast<double>(d_true[static_cast<std::size_t>(i)]));
    }
    if (xs.size() >= 3) r.rho = spearman(xs, ys);
  }

  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();

  return {std::move(r), std::move(table), buffer.entries(), std::move(graph)};
}

}  // namespace

RunResult run_baseline(const ExperimentConfig& cfg, int run_seed) {
  return run_protocol(cfg, Arm::Baseline, run_seed, false).result;
}

RunResult run_structrl(const ExperimentConfig& cfg, int run_seed) {
  return run_protocol(cfg, Arm::StructRL, run_seed, false).result;
}

ExploreData explore_phase(const ExperimentConfig& cfg, int run_seed) {
  ProtocolOutcome out = run_protocol(cfg, Arm::Baseline, run_seed, true);
  return {std::move(out.table), std::move(out.result.sigma_trace),
          std::move(out.result.stability_trace), std::move(out.buffer_entries),
          std::move(out.graph)};
}

double evaluate_greedy(const QTable& table, const GridSpec& spec, State start) {
  if (!spec.in_bounds(start)) throw std::invalid_argument("evaluate_greedy: start off the grid");
  double total = 0.0;
  State s = start;
  for (int i = 0; i < spec.max_steps && !(s == spec.goal); ++i) {
    const Transition t = step(spec, s, table.greedy_action(s));
    total += t.reward;
    s = t.next_state;
  }
  return total;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("spearman: length mismatch");
  if (xs.size() < 3) throw std::invalid_argument("spearman: need at least three pairs");
  const std::vector<double> rx = average_ranks(xs);
  const std::vector<double> ry = average_ranks(ys);
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

SamplingDemo sampling_demo_from(const RunResult& result, const ExperimentConfig& cfg,
                                int draws) {
  cfg.validate();
  if (draws < 1) throw std::invalid_argument("sampling demo: draws must be >= 1");
  const GridSpec spec = cfg.grid();

  SamplingDemo demo;
  demo.sigma_final = result.sigma_final;
  demo.tstar = result.tstar_field;

  int query = cfg.demo_query_episode;
  if (query < 0) {
    query = 0;
    bool any = false;
    for (const int t : demo.tstar.t_star) {
      if (t == kNever) continue;
      if (!any || t < query) query = t;
      any = true;
    }
  }
  demo.query_episode = query;

  RngStream analysis(cfg.rng_seed_base, static_cast<std::uint64_t>(result.run_seed),
                     StreamId::Analysis);
  auto frequencies = [&](SamplingStrategy strategy) {
    const std::vector<double> weights =
        sampling_weights(strategy, demo.sigma_final, demo.tstar, query, cfg.tau_kernel,
                         cfg.sampling_floor);
    std::vector<double> freq(static_cast<std::size_t>(spec.num_states()), 0.0);
    for (int i = 0; i < draws; ++i)
      freq[static_cast<std::size_t>(analysis.pick_weighted(weights))] += 1.0;
    for (double& f : freq) f /= static_cast<double>(draws);
    return freq;
  };
  demo.uniform_freq = frequencies(SamplingStrategy::Uniform);
  demo.sigma_freq = frequencies(SamplingStrategy::Sigma);
  demo.tstar_freq = frequencies(SamplingStrategy::TStar);
  return demo;
}

SamplingDemo compare_sampling(const ExperimentConfig& cfg, int run_seed, int draws) {
  return sampling_demo_from(run_baseline(cfg, run_seed), cfg, draws);
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * (static_cast<double>(n) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

ArmSummary aggregate(const std::vector<RunResult>& results) {
  if (results.empty()) throw std::invalid_argument("aggregate: no results");
  const std::size_t episodes = results.front().episodic_returns.size();
  for (const auto& r : results)
    if (r.episodic_returns.size() != episodes)
      throw std::invalid_argument("aggregate: episode counts differ across runs");

  ArmSummary out;
  for (std::size_t e = 0; e < episodes; ++e) {
    std::vector<double> vals;
    vals.reserve(results.size());
    double reached = 0.0;
    for (const auto& r : results) {
      vals.push_back(r.episodic_returns[e]);
      reached += r.reached_goal[e] ? 1.0 : 0.0;
    }
    std::sort(vals.begin(), vals.end());
    const double sum = std::accumulate(vals.begin(), vals.end(), 0.0);
    out.episodes.push_back(static_cast<int>(e) + 1);
    out.mean.push_back(sum / static_cast<double>(vals.size()));
    out.median.push_back(quantile_sorted(vals, 0.5));
    out.q25.push_back(quantile_sorted(vals, 0.25));
    out.q75.push_back(quantile_sorted(vals, 0.75));
    out.success_rate.push_back(reached / static_cast<double>(results.size()));
  }
  return out;
}

std::vector<RunResult> run_many(const ExperimentConfig& cfg, Arm arm,
                                const std::vector<int>& run_seeds, int jobs) {
  if (run_seeds.empty()) throw std::invalid_argument("run_many: no run seeds");
  if (jobs < 1) jobs = 1;
  const int n = static_cast<int>(run_seeds.size());
  jobs = std::min(jobs, n);

  std::vector<std::optional<RunResult>> slots(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));

  if (jobs == 1) {
    for (int i = 0; i < n; ++i)
      slots[static_cast<std::size_t>(i)] =
          arm == Arm::Baseline ? run_baseline(cfg, run_seeds[static_cast<std::size_t>(i)])
                               : run_structrl(cfg, run_seeds[static_cast<std::size_t>(i)]);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          slots[static_cast<std::size_t>(i)] =
              arm == Arm::Baseline ? run_baseline(cfg, run_seeds[static_cast<std::size_t>(i)])
                                   : run_structrl(cfg, run_seeds[static_cast<std::size_t>(i)]);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  std::vector<RunResult> out;
  out.reserve(static_cast<std::size_t>(n));
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace structrl
