#include "structrl/artifacts.hpp"

#include <algorithm>
#include <filesystem>
#include <stdexcept>

#include "structrl/io.hpp"

namespace structrl {

namespace fs = std::filesystem;

std::string run_prefix(const RunResult& r) {
  return std::string(arm_name(r.arm)) + "_s" + std::to_string(r.run_seed);
}

namespace {

std::vector<std::string> state_header(int num_states) {
  std::vector<std::string> header{"episode"};
  for (int i = 0; i < num_states; ++i) header.push_back("s" + std::to_string(i));
  return header;
}

void write_sigma_trace(const std::string& path, const SigmaTrace& trace, int num_states) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& snap : trace.snapshots) {
    std::vector<std::string> row{format_int(snap.episode)};
    for (const double v : snap.sigma) row.push_back(format_double(v));
    rows.push_back(std::move(row));
  }
  write_csv(path, state_header(num_states), rows);
}

void write_greedy_trace(const std::string& path, const StabilityTrace& trace, int num_states) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& snap : trace.greedy_log) {
    std::vector<std::string> row{format_int(snap.episode)};
    for (const Action a : snap.greedy) row.push_back(format_int(static_cast<int>(a)));
    rows.push_back(std::move(row));
  }
  write_csv(path, state_header(num_states), rows);
}

void write_edge_log(const std::string& path, const std::vector<ObservedEdge>& observed) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : observed) {
    rows.push_back({format_int(e.t.state.x), format_int(e.t.state.y),
                    format_int(static_cast<int>(e.t.action)), format_double(e.t.reward),
                    format_int(e.t.next_state.x), format_int(e.t.next_state.y),
                    e.t.terminal ? "1" : "0", format_int(e.count)});
  }
  write_csv(path, {"from_x", "from_y", "action", "reward", "to_x", "to_y", "terminal", "count"},
            rows);
}

std::string seed_states_text(const SeedSet& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.states.size(); ++i) {
    if (i) out += ';';
    out += '(' + std::to_string(seeds.states[i].x) + ',' + std::to_string(seeds.states[i].y) + ')';
  }
  return out;
}

}  // namespace

void write_run_artifacts(const std::string& dir, const ExperimentConfig& cfg,
                         const RunResult& r) {
  const GridSpec spec = cfg.grid();
  const int n = spec.num_states();
  fs::create_directories(fs::path(dir) / "grids");
  fs::create_directories(fs::path(dir) / "traces");
  const std::string grids = (fs::path(dir) / "grids").string() + "/";
  const std::string traces = (fs::path(dir) / "traces").string() + "/";
  const std::string prefix = run_prefix(r);

  write_grid_csv(grids + prefix + "_d.csv", spec.width, spec.height,
                 std::span<const int>(r.distance_field.d));
  write_grid_csv(grids + prefix + "_sigma.csv", spec.width, spec.height,
                 std::span<const double>(r.sigma_final));
  write_grid_csv(grids + prefix + "_tstar.csv", spec.width, spec.height,
                 std::span<const int>(r.tstar_field.t_star));
  write_grid_csv(grids + prefix + "_visit.csv", spec.width, spec.height,
                 std::span<const std::int64_t>(r.visit_counts));
  write_grid_csv(grids + prefix + "_replay.csv", spec.width, spec.height,
                 std::span<const std::int64_t>(r.replay_counts));

  write_sigma_trace(traces + prefix + "_sigma.csv", r.sigma_trace, n);
  write_greedy_trace(traces + prefix + "_greedy.csv", r.stability_trace, n);
  write_edge_log(traces + prefix + "_edges.csv", r.observed);
}

void write_shared_artifacts(const std::string& dir, const ExperimentConfig& cfg,
                            const std::vector<RunResult>& results) {
  if (results.empty()) throw std::invalid_argument("write_shared_artifacts: no results");
  fs::create_directories(dir);

  std::vector<const RunResult*> ordered;
  for (const auto& r : results) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(), [](const RunResult* a, const RunResult* b) {
    if (a->arm != b->arm) return a->arm == Arm::Baseline;
    return a->run_seed < b->run_seed;
  });

  auto entries = cfg.echo();
  for (const RunResult* r : ordered) {
    const std::string key = "run_" + run_prefix(*r);
    if (r->seed_manifest) {
      entries.emplace_back(key + "_seed_strategy", seed_strategy_name(r->seed_manifest->strategy));
      entries.emplace_back(key + "_seed_k", format_int(r->seed_manifest->k));
      entries.emplace_back(key + "_seed_states", seed_states_text(*r->seed_manifest));
    } else {
      entries.emplace_back(key + "_seed_strategy", "none");
    }
    entries.emplace_back(key + "_rho", format_double(r->rho));
  }
  write_manifest((fs::path(dir) / "manifest").string(), entries);

  {
    std::vector<std::vector<std::string>> rows;
    for (const RunResult* r : ordered) {
      std::size_t eval_idx = 0;
      for (std::size_t e = 0; e < r->episodic_returns.size(); ++e) {
        const int episode = static_cast<int>(e) + 1;
        std::string eval_cell;
        if (eval_idx < r->eval_returns.size() &&
            r->eval_returns[eval_idx].episode == episode) {
          eval_cell = format_double(r->eval_returns[eval_idx].ret);
          ++eval_idx;
        }
        rows.push_back({format_int(episode), format_int(r->run_seed), arm_name(r->arm),
                        format_double(r->episodic_returns[e]), eval_cell});
      }
    }
    write_csv((fs::path(dir) / "returns.csv").string(),
              {"episode", "run_seed", "arm", "return", "eval_return"}, rows);
  }

  {
    std::vector<std::vector<std::string>> rows;
    std::vector<CurveSeries> series;
    for (const Arm arm : {Arm::Baseline, Arm::StructRL}) {
      std::vector<RunResult> subset;
      for (const RunResult* r : ordered)
        if (r->arm == arm) subset.push_back(*r);
      if (subset.empty()) continue;
      const ArmSummary summary = aggregate(subset);
      for (std::size_t i = 0; i < summary.episodes.size(); ++i) {
        rows.push_back({format_int(summary.episodes[i]), arm_name(arm),
                        format_double(summary.mean[i]), format_double(summary.median[i]),
                        format_double(summary.q25[i]), format_double(summary.q75[i]),
                        format_double(summary.success_rate[i])});
      }
      CurveSeries cs;
      cs.label = arm_name(arm);
      cs.color = arm == Arm::Baseline ? "#d62728" : "#1f77b4";
      cs.center = summary.mean;
      cs.lo = summary.q25;
      cs.hi = summary.q75;
      series.push_back(std::move(cs));
    }
    write_csv((fs::path(dir) / "summary.csv").string(),
              {"episode", "arm", "mean", "median", "q25", "q75", "success_rate"}, rows);
    if (!series.empty() && series.front().center.size() >= 2)
      write_curves_svg((fs::path(dir) / "curves.svg").string(), "episodic return", series);
  }
}

ExperimentConfig config_from_manifest(const std::string& manifest_path) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : read_manifest(manifest_path)) {
    if (key.rfind("run_", 0) == 0) continue;
    cfg.set(key, value);
  }
  return cfg;
}

SigmaTrace read_sigma_trace(const std::string& path) {
  const auto rows = read_csv(path);
  if (rows.size() < 2 || rows.front().empty() || rows.front().front() != "episode")
    throw std::runtime_error("not a sigma trace: " + path);
  const std::size_t n = rows.front().size() - 1;
  SigmaTrace trace;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != n + 1)
      throw std::runtime_error("ragged sigma trace row in " + path);
    SigmaSnapshot snap;
    snap.episode = parse_int(rows[i][0]);
    for (std::size_t j = 1; j < rows[i].size(); ++j)
      snap.sigma.push_back(parse_double(rows[i][j]));
    trace.snapshots.push_back(std::move(snap));
  }
  return trace;
}

StabilityTrace read_greedy_trace(const std::string& path, int window) {
  const auto rows = read_csv(path);
  if (rows.size() < 2 || rows.front().empty() || rows.front().front() != "episode")
    throw std::runtime_error("not a greedy trace: " + path);
  const std::size_t n = rows.front().size() - 1;
  StabilityTrace trace;
  trace.window = window;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != n + 1)
      throw std::runtime_error("ragged greedy trace row in " + path);
    GreedySnapshot snap;
    snap.episode = parse_int(rows[i][0]);
    for (std::size_t j = 1; j < rows[i].size(); ++j) {
      const int a = parse_int(rows[i][j]);
      if (a < 0 || a >= kNumActions)
        throw std::runtime_error("invalid action id in " + path);
      snap.greedy.push_back(static_cast<Action>(a));
    }
    trace.greedy_log.push_back(std::move(snap));
  }
  return trace;
}

std::vector<ObservedEdge> read_edges(const std::string& path, const GridSpec& spec) {
  const auto rows = read_csv(path);
  if (rows.empty() || rows.front().size() != 8 || rows.front().front() != "from_x")
    throw std::runtime_error("not an edge log: " + path);
  std::vector<ObservedEdge> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 8) throw std::runtime_error("ragged edge row in " + path);
    ObservedEdge e;
    e.t.state = State{parse_int(row[0]), parse_int(row[1])};
    const int a = parse_int(row[2]);
    if (a < 0 || a >= kNumActions) throw std::runtime_error("invalid action id in " + path);
    e.t.action = static_cast<Action>(a);
    e.t.reward = parse_double(row[3]);
    e.t.next_state = State{parse_int(row[4]), parse_int(row[5])};
    e.t.terminal = row[6] == "1";
    e.count = parse_i64(row[7]);
    if (!spec.in_bounds(e.t.state) || !spec.in_bounds(e.t.next_state))
      throw std::runtime_error("edge references an off-grid state in " + path);
    out.push_back(e);
  }
  return out;
}

}  // namespace structrl
