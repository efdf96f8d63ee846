#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "structrl/artifacts.hpp"
#include "structrl/config.hpp"
#include "structrl/harness.hpp"
#include "structrl/io.hpp"

namespace fs = std::filesystem;
using namespace structrl;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> sets;
  std::string seeds_spec;
  std::uint64_t seed_base = 0;
  bool seed_base_given = false;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "config file (key=value lines; defaults when omitted)");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--set", o.sets, "config override key=value (repeatable)");
  cmd->add_option("--seeds", o.seeds_spec,
                  "run-seed count, or comma-separated explicit run seeds");
  cmd->add_option("--rng-seed-base", o.seed_base, "base seed for every random stream")
      ->each([&o](const std::string&) { o.seed_base_given = true; });
  cmd->add_option("--jobs", o.jobs, "max concurrent runs (default: hardware threads)");
}

ExperimentConfig resolve_config(const CommonOpts& o) {
  ExperimentConfig cfg =
      o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  apply_overrides(cfg, o.sets);
  if (o.seed_base_given) cfg.rng_seed_base = o.seed_base;
  cfg.validate();
  return cfg;
}

std::vector<int> resolve_seeds(const CommonOpts& o, const ExperimentConfig& cfg) {
  std::vector<int> seeds;
  if (o.seeds_spec.empty()) {
    for (int i = 0; i < cfg.n_random_seeds; ++i) seeds.push_back(i);
  } else if (o.seeds_spec.find(',') != std::string::npos) {
    std::size_t pos = 0;
    while (pos <= o.seeds_spec.size()) {
      const std::size_t comma = o.seeds_spec.find(',', pos);
      const std::string tok = o.seeds_spec.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!tok.empty()) seeds.push_back(parse_int(tok));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (seeds.empty()) throw std::invalid_argument("--seeds: empty seed list");
  } else {
    const int count = parse_int(o.seeds_spec);
    if (count < 1) throw std::invalid_argument("--seeds: count must be >= 1");
    for (int i = 0; i < count; ++i) seeds.push_back(i);
  }
  return seeds;
}

int resolve_jobs(const CommonOpts& o) {
  if (o.jobs > 0) return o.jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double tail_mean(const std::vector<double>& v, int k) {
  const int n = std::min<int>(k, static_cast<int>(v.size()));
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += v[v.size() - 1 - static_cast<std::size_t>(n) + i];
  return n > 0 ? sum / n : 0.0;
}

void print_run_line(const RunResult& r) {
  std::cout << "[" << run_prefix(r) << "] final return "
            << format_double(r.episodic_returns.empty() ? 0.0 : r.episodic_returns.back());
  if (!r.eval_returns.empty()) {
    std::cout << ", eval " << format_double(r.eval_returns.back().ret) << " @ episode "
              << r.eval_returns.back().episode;
  }
  std::cout << ", rho " << format_double(r.rho) << ", seeds ";
  if (r.seed_manifest) {
    std::cout << seed_strategy_name(r.seed_manifest->strategy) << " x"
              << r.seed_manifest->states.size();
  } else {
    std::cout << "none";
  }
  std::cout << " (" << format_double(std::round(r.wall_seconds * 10.0) / 10.0) << "s)\n";
}

void cmd_train(const CommonOpts& opts, Arm arm) {
  const ExperimentConfig cfg = resolve_config(opts);
  const std::vector<int> seeds = resolve_seeds(opts, cfg);
  const std::string out =
      opts.out_dir.empty() ? std::string("runs/") + arm_name(arm) : opts.out_dir;
  const std::vector<RunResult> results = run_many(cfg, arm, seeds, resolve_jobs(opts));
  for (const auto& r : results) {
    write_run_artifacts(out, cfg, r);
    print_run_line(r);
  }
  write_shared_artifacts(out, cfg, results);
  std::cout << "wrote " << out << "\n";
}

void cmd_compare(const CommonOpts& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  const std::vector<int> seeds = resolve_seeds(opts, cfg);
  const std::string out = opts.out_dir.empty() ? "runs/compare" : opts.out_dir;
  const int jobs = resolve_jobs(opts);

  std::vector<RunResult> all = run_many(cfg, Arm::Baseline, seeds, jobs);
  {
    std::vector<RunResult> structs = run_many(cfg, Arm::StructRL, seeds, jobs);
    for (auto& r : structs) all.push_back(std::move(r));
  }
  for (const auto& r : all) {
    write_run_artifacts(out, cfg, r);
    print_run_line(r);
  }
  write_shared_artifacts(out, cfg, all);

  double base_mean = 0.0, struct_mean = 0.0;
  int wins = 0;
  const int n = static_cast<int>(seeds.size());
  for (int i = 0; i < n; ++i) {
    const double b = tail_mean(all[static_cast<std::size_t>(i)].episodic_returns, 50);
    const double s = tail_mean(all[static_cast<std::size_t>(n + i)].episodic_returns, 50);
    base_mean += b / n;
    struct_mean += s / n;
    if (s > b) ++wins;
  }
  std::cout << "final-50 mean return: baseline " << format_double(base_mean) << ", structrl "
            << format_double(struct_mean) << "\n";
  std::cout << "structrl wins " << wins << "/" << n << " seeds (final-50 mean)\n";
  std::cout << "wrote " << out << "\n";
}

struct AnalysisData {
  ExperimentConfig cfg;
  SigmaTrace trace;
  TStarField tstar;
  std::vector<double> sigma_final;
  DistanceField field;
  std::optional<SeedSet> seeds;
  TransitionGraph graph;
};

AnalysisData analysis_from_saved(const CommonOpts& opts, const std::string& run_dir,
                                 const std::string& arm, int seed) {
  ExperimentConfig cfg = config_from_manifest((fs::path(run_dir) / "manifest").string());
  apply_overrides(cfg, opts.sets);
  cfg.validate();
  const GridSpec spec = cfg.grid();

  const std::string prefix = arm + "_s" + std::to_string(seed);
  const std::string traces = (fs::path(run_dir) / "traces").string() + "/";
  SigmaTrace trace = read_sigma_trace(traces + prefix + "_sigma.csv");
  StabilityTrace greedy = read_greedy_trace(traces + prefix + "_greedy.csv", cfg.stability_window);
  const std::vector<ObservedEdge> edges = read_edges(traces + prefix + "_edges.csv", spec);

  TStarField tstar = t_star(trace, cfg.smoothing_window);
  const std::vector<int> stability = stability_counts(greedy);

  TransitionGraph graph(spec);
  std::vector<Transition> observed;
  for (const auto& e : edges) {
    graph.add_observation(e.t);
    for (std::int64_t i = 0; i < e.count; ++i) observed.push_back(e.t);
  }

  std::optional<SeedSet> seeds;
  switch (cfg.strategy()) {
    case SeedStrategy::TStar:
      seeds = seeds_from_tstar(spec, tstar, stability, cfg.seed_count, cfg.max_changes);
      break;
    case SeedStrategy::Reward:
      seeds = seeds_from_reward(spec, observed, cfg.seed_count);
      break;
    case SeedStrategy::Bellman:
      throw std::runtime_error(
          "bellman seed selection needs the live value table; rerun without --run or use "
          "--set seed_strategy=tstar");
    case SeedStrategy::Hybrid: {
      auto a = seeds_from_tstar(spec, tstar, stability, cfg.seed_count, cfg.max_changes);
      auto b = seeds_from_reward(spec, observed, cfg.seed_count);
      if (!a && !b)
        throw SeedSelectionError(
            "saved traces support no seed strategy; run a longer exploration phase");
      seeds = a ? a : b;
      break;
    }
  }
  if (!seeds)
    throw SeedSelectionError("seed selection found no candidates in the saved traces");

  DistanceField field = cfg.use_full_graph ? bfs_distance(full_grid_graph(spec), seeds->states)
                                           : bfs_distance(graph, seeds->states);
  std::vector<double> sigma_final = trace.snapshots.back().sigma;
  return {std::move(cfg), std::move(trace), std::move(tstar), std::move(sigma_final),
          std::move(field), std::move(seeds), std::move(graph)};
}

AnalysisData analysis_from_fresh(const CommonOpts& opts) {
  ExperimentConfig cfg = resolve_config(opts);
  const std::vector<int> seeds = resolve_seeds(opts, cfg);
  RunResult r = run_baseline(cfg, seeds.front());
  const GridSpec spec = cfg.grid();
  TransitionGraph graph(spec);
  for (const auto& e : r.observed) graph.add_observation(e.t);
  return {std::move(cfg),          std::move(r.sigma_trace), std::move(r.tstar_field),
          std::move(r.sigma_final), std::move(r.distance_field), std::move(r.seed_manifest),
          std::move(graph)};
}

void cmd_analyze(const CommonOpts& opts, const std::string& run_dir, const std::string& arm,
                 int seed) {
  AnalysisData data =
      run_dir.empty() ? analysis_from_fresh(opts) : analysis_from_saved(opts, run_dir, arm, seed);
  const GridSpec spec = data.cfg.grid();
  const std::string out = opts.out_dir.empty() ? "runs/analysis" : opts.out_dir;
  fs::create_directories(out);

  {
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < spec.num_states(); ++i) {
      const State s = spec.state_at(i);
      rows.push_back({format_int(s.x), format_int(s.y),
                      format_int(data.field.d[static_cast<std::size_t>(i)]),
                      format_double(data.sigma_final[static_cast<std::size_t>(i)]),
                      format_int(data.tstar.t_star[static_cast<std::size_t>(i)])});
    }
    write_csv((fs::path(out) / "dynamics.csv").string(), {"x", "y", "d", "sigma_final", "tstar"},
              rows);
  }
  {
    const auto frontier =
        frontier_transitions(data.tstar, data.field, data.cfg.frontier_tau, data.graph);
    std::vector<std::vector<std::string>> rows;
    for (const auto& [from, to] : frontier) {
      rows.push_back({format_int(from.x), format_int(from.y), format_int(to.x),
                      format_int(to.y)});
    }
    write_csv((fs::path(out) / "frontier.csv").string(), {"from_x", "from_y", "to_x", "to_y"},
              rows);
  }

  const std::vector<int> d_true = true_distance_field(spec);
  std::vector<double> xs_true, ys_true, xs_rec, ys_rec;
  for (int i = 0; i < spec.num_states(); ++i) {
    const int t = data.tstar.t_star[static_cast<std::size_t>(i)];
    if (t == kNever) continue;
    xs_true.push_back(t);
    ys_true.push_back(d_true[static_cast<std::size_t>(i)]);
    if (data.field.d[static_cast<std::size_t>(i)] != kUnreached) {
      xs_rec.push_back(t);
      ys_rec.push_back(data.field.d[static_cast<std::size_t>(i)]);
    }
  }
  if (data.seeds) {
    std::cout << "seed strategy " << seed_strategy_name(data.seeds->strategy) << ", "
              << data.seeds->states.size() << " states\n";
  }
  std::cout << "rho(t*, true distance) = "
            << format_double(xs_true.size() >= 3 ? spearman(xs_true, ys_true)
                                                 : std::numeric_limits<double>::quiet_NaN())
            << "\n";
  std::cout << "rho(t*, recovered distance) = "
            << format_double(xs_rec.size() >= 3 ? spearman(xs_rec, ys_rec)
                                                : std::numeric_limits<double>::quiet_NaN())
            << "\n";
  std::cout << "wrote " << out << "\n";
}

void cmd_sampling_demo(const CommonOpts& opts, int draws_override) {
  const ExperimentConfig cfg = resolve_config(opts);
  const std::vector<int> seeds = resolve_seeds(opts, cfg);
  const int draws = draws_override > 0 ? draws_override : cfg.demo_draws;
  const std::string out = opts.out_dir.empty() ? "runs/demo" : opts.out_dir;

  const RunResult r = run_baseline(cfg, seeds.front());
  const SamplingDemo demo = sampling_demo_from(r, cfg, draws);
  const GridSpec spec = cfg.grid();

  fs::create_directories((fs::path(out) / "grids").string());
  const std::string grids = (fs::path(out) / "grids").string() + "/";
  write_grid_csv(grids + "demo_uniform.csv", spec.width, spec.height,
                 std::span<const double>(demo.uniform_freq));
  write_grid_csv(grids + "demo_sigma.csv", spec.width, spec.height,
                 std::span<const double>(demo.sigma_freq));
  write_grid_csv(grids + "demo_tstar.csv", spec.width, spec.height,
                 std::span<const double>(demo.tstar_freq));

  auto modal = [&spec](const std::vector<double>& freq) {
    const auto it = std::max_element(freq.begin(), freq.end());
    return spec.state_at(static_cast<int>(it - freq.begin()));
  };
  const State mu = modal(demo.uniform_freq);
  const State ms = modal(demo.sigma_freq);
  const State mt = modal(demo.tstar_freq);
  std::cout << "query episode " << demo.query_episode << ", " << draws << " draws\n";
  std::cout << "modal state uniform (" << mu.x << "," << mu.y << "), sigma (" << ms.x << ","
            << ms.y << "), tstar (" << mt.x << "," << mt.y << ")\n";
  std::cout << "wrote " << out << "\n";
}

void cmd_export_grids(const CommonOpts& opts, const std::string& run_dir, const std::string& arm,
                      int seed) {
  ExperimentConfig cfg = config_from_manifest((fs::path(run_dir) / "manifest").string());
  apply_overrides(cfg, opts.sets);
  cfg.validate();
  const GridSpec spec = cfg.grid();
  const std::string prefix = arm + "_s" + std::to_string(seed);
  const std::string traces = (fs::path(run_dir) / "traces").string() + "/";
  const SigmaTrace trace = read_sigma_trace(traces + prefix + "_sigma.csv");
  const TStarField tstar = t_star(trace, cfg.smoothing_window);

  const std::string out = opts.out_dir.empty() ? "runs/export" : opts.out_dir;
  fs::create_directories(out);
  write_grid_csv((fs::path(out) / "sigma_final.csv").string(), spec.width, spec.height,
                 std::span<const double>(trace.snapshots.back().sigma));
  write_grid_csv((fs::path(out) / "tstar.csv").string(), spec.width, spec.height,
                 std::span<const int>(tstar.t_star));
  const std::vector<int> d_true = true_distance_field(spec);
  write_grid_csv((fs::path(out) / "d_true.csv").string(), spec.width, spec.height,
                 std::span<const int>(d_true));
  std::cout << "wrote " << out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structrl: tabular distributional-RL lab with structure-guided training"};
  app.require_subcommand(1);
  app.footer("Config keys (settable via --set key=value or a --config file):\n" +
             ExperimentConfig::describe_keys());

  CommonOpts opts;
  std::string run_dir;
  std::string arm = "baseline";
  int saved_seed = 0;
  int draws_override = 0;

  CLI::App* train_b = app.add_subcommand("train-baseline", "train the C51 baseline arm");
  add_common(train_b, opts);
  CLI::App* train_s = app.add_subcommand("train-structrl", "train the structure-guided arm");
  add_common(train_s, opts);
  CLI::App* compare =
      app.add_subcommand("compare", "train both arms on matched seeds and summarize");
  add_common(compare, opts);
  CLI::App* analyze = app.add_subcommand(
      "analyze-dynamics", "per-state d / sigma / t* table plus rank correlations");
  add_common(analyze, opts);
  analyze->add_option("--run", run_dir, "saved run directory (trains fresh when omitted)");
  analyze->add_option("--arm", arm, "arm to analyze in --run mode")
      ->check(CLI::IsMember({"baseline", "structrl"}));
  analyze->add_option("--seed", saved_seed, "run seed to analyze in --run mode");
  CLI::App* demo = app.add_subcommand(
      "sampling-demo", "visitation frequencies for uniform / sigma / t* sampling");
  add_common(demo, opts);
  demo->add_option("--draws", draws_override, "state draws per strategy");
  CLI::App* export_cmd =
      app.add_subcommand("export-grids", "regenerate grids from a saved run's traces");
  add_common(export_cmd, opts);
  export_cmd->add_option("--run", run_dir, "saved run directory")->required();
  export_cmd->add_option("--arm", arm, "arm to export")
      ->check(CLI::IsMember({"baseline", "structrl"}));
  export_cmd->add_option("--seed", saved_seed, "run seed to export");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (train_b->parsed()) cmd_train(opts, Arm::Baseline);
    if (train_s->parsed()) cmd_train(opts, Arm::StructRL);
    if (compare->parsed()) cmd_compare(opts);
    if (analyze->parsed()) cmd_analyze(opts, run_dir, arm, saved_seed);
    if (demo->parsed()) cmd_sampling_demo(opts, draws_override);
    if (export_cmd->parsed()) cmd_export_grids(opts, run_dir, arm, saved_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
