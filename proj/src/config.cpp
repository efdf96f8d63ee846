#include "structrl/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "structrl/io.hpp"

namespace structrl {
namespace {

bool parse_bool(const std::string& s) {
  if (s == "0" || s == "false") return false;
  if (s == "1" || s == "true") return true;
  throw std::invalid_argument("not a boolean (0/1/true/false): '" + s + "'");
}

struct KeyDef {
  std::string key;
  std::string desc;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

KeyDef make_key(const char* key, const char* desc, int ExperimentConfig::*field) {
  return {key, desc, [field](ExperimentConfig& c, const std::string& v) { c.*field = parse_int(v); },
          [field](const ExperimentConfig& c) { return format_int(c.*field); }};
}

KeyDef make_key(const char* key, const char* desc, double ExperimentConfig::*field) {
  return {key, desc,
          [field](ExperimentConfig& c, const std::string& v) { c.*field = parse_double(v); },
          [field](const ExperimentConfig& c) { return format_double(c.*field); }};
}

KeyDef make_key(const char* key, const char* desc, bool ExperimentConfig::*field) {
  return {key, desc,
          [field](ExperimentConfig& c, const std::string& v) { c.*field = parse_bool(v); },
          [field](const ExperimentConfig& c) { return c.*field ? "1" : "0"; }};
}

KeyDef make_key(const char* key, const char* desc, std::string ExperimentConfig::*field) {
  return {key, desc, [field](ExperimentConfig& c, const std::string& v) { c.*field = v; },
          [field](const ExperimentConfig& c) { return c.*field; }};
}

KeyDef make_key(const char* key, const char* desc, std::uint64_t ExperimentConfig::*field) {
  return {key, desc, [field](ExperimentConfig& c, const std::string& v) { c.*field = parse_u64(v); },
          [field](const ExperimentConfig& c) { return format_int(static_cast<std::int64_t>(c.*field)); }};
}

const std::vector<KeyDef>& registry() {
  static const std::vector<KeyDef> defs = {
      make_key("grid_width", "grid width in cells", &ExperimentConfig::grid_width),
      make_key("grid_height", "grid height in cells", &ExperimentConfig::grid_height),
      make_key("goal_x", "goal cell x", &ExperimentConfig::goal_x),
      make_key("goal_y", "goal cell y", &ExperimentConfig::goal_y),
      make_key("step_reward", "reward per step (negative)", &ExperimentConfig::step_reward),
      make_key("max_steps", "episode step cap", &ExperimentConfig::max_steps),
      make_key("v_min", "lowest return atom", &ExperimentConfig::v_min),
      make_key("v_max", "highest return atom", &ExperimentConfig::v_max),
      make_key("n_atoms", "number of return atoms", &ExperimentConfig::n_atoms),
      make_key("gamma", "discount factor", &ExperimentConfig::gamma),
      make_key("eta", "mixture step size for distribution updates", &ExperimentConfig::eta),
      make_key("epsilon_explore", "random-action rate during the exploration phase",
               &ExperimentConfig::epsilon_explore),
      make_key("epsilon_train", "random-action rate during the training phase",
               &ExperimentConfig::epsilon_train),
      make_key("exploration_episodes", "phase-1 episode count (>= 2)",
               &ExperimentConfig::exploration_episodes),
      make_key("training_episodes", "phase-2 episode count", &ExperimentConfig::training_episodes),
      make_key("eval_every", "greedy-eval cadence in episodes", &ExperimentConfig::eval_every),
      make_key("eval_start_x", "eval rollout start x", &ExperimentConfig::eval_start_x),
      make_key("eval_start_y", "eval rollout start y", &ExperimentConfig::eval_start_y),
      make_key("uniform_starts", "1: uniform non-goal training starts; 0: fixed start",
               &ExperimentConfig::uniform_starts),
      make_key("train_start_x", "fixed training start x (uniform_starts=0)",
               &ExperimentConfig::train_start_x),
      make_key("train_start_y", "fixed training start y (uniform_starts=0)",
               &ExperimentConfig::train_start_y),
      make_key("sigma_reduction", "per-state spread reduction: greedy | mean",
               &ExperimentConfig::sigma_reduction),
      make_key("smoothing_window", "centered moving-average width (odd; 1 disables)",
               &ExperimentConfig::smoothing_window),
      make_key("stability_window", "final episodes scanned for greedy-action changes",
               &ExperimentConfig::stability_window),
      make_key("seed_strategy", "tstar | reward | bellman | hybrid",
               &ExperimentConfig::seed_strategy),
      make_key("seed_count", "target seed-set size", &ExperimentConfig::seed_count),
      make_key("max_changes", "stability cutoff for tstar seed candidates",
               &ExperimentConfig::max_changes),
      make_key("lambda", "exploration bias strength", &ExperimentConfig::lambda),
      make_key("alpha", "replay bias strength", &ExperimentConfig::alpha),
      make_key("weight_floor", "minimum replay weight in (0,1)", &ExperimentConfig::weight_floor),
      make_key("use_full_graph", "1: distance over the full grid graph instead of observed edges",
               &ExperimentConfig::use_full_graph),
      make_key("distance_refresh_every",
               "re-derive seeds and distances every N phase-2 episodes (0: never)",
               &ExperimentConfig::distance_refresh_every),
      make_key("replay_capacity", "replay buffer capacity", &ExperimentConfig::replay_capacity),
      make_key("batch_size", "transitions per update batch", &ExperimentConfig::batch_size),
      make_key("updates_per_step", "update batches per environment step",
               &ExperimentConfig::updates_per_step),
      make_key("tau_kernel", "decay scale of the t*-based sampling kernel",
               &ExperimentConfig::tau_kernel),
      make_key("sampling_floor", "weight floor for the sampling-strategy demo",
               &ExperimentConfig::sampling_floor),
      make_key("demo_draws", "state draws per strategy in the sampling demo",
               &ExperimentConfig::demo_draws),
      make_key("demo_query_episode", "t*-kernel query episode (-1: earliest finite t*)",
               &ExperimentConfig::demo_query_episode),
      make_key("frontier_tau", "max |t* gap| for frontier transitions",
               &ExperimentConfig::frontier_tau),
      make_key("n_random_seeds", "number of runs per arm", &ExperimentConfig::n_random_seeds),
      make_key("rng_seed_base", "base seed; every stream derives from it",
               &ExperimentConfig::rng_seed_base),
  };
  return defs;
}

const KeyDef& find_key(const std::string& key) {
  for (const auto& def : registry())
    if (def.key == key) return def;
  throw std::invalid_argument("unknown config key: '" + key + "'");
}

void check(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(std::string("config: ") + msg);
}

}  // namespace

GridSpec ExperimentConfig::grid() const {
  GridSpec g;
  g.width = grid_width;
  g.height = grid_height;
  g.goal = State{goal_x, goal_y};
  g.step_reward = step_reward;
  g.max_steps = max_steps;
  return g;
}

Support ExperimentConfig::support() const { return Support(v_min, v_max, n_atoms); }

SigmaReduction ExperimentConfig::reduction() const {
  if (sigma_reduction == "greedy") return SigmaReduction::Greedy;
  if (sigma_reduction == "mean") return SigmaReduction::MeanOverActions;
  throw std::invalid_argument("config: sigma_reduction must be 'greedy' or 'mean'");
}

SeedStrategy ExperimentConfig::strategy() const { return seed_strategy_from_name(seed_strategy); }

void ExperimentConfig::validate() const {
  grid().validate();
  support();
  reduction();
  strategy();
  const GridSpec g = grid();
  check(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  check(eta > 0.0 && eta <= 1.0, "eta must lie in (0, 1]");
  check(epsilon_explore >= 0.0 && epsilon_explore <= 1.0, "epsilon_explore must lie in [0, 1]");
  check(epsilon_train >= 0.0 && epsilon_train <= 1.0, "epsilon_train must lie in [0, 1]");
  check(exploration_episodes >= 2, "exploration_episodes must be >= 2");
  check(training_episodes >= 0, "training_episodes must be >= 0");
  check(eval_every >= 1, "eval_every must be >= 1");
  check(g.in_bounds(State{eval_start_x, eval_start_y}), "eval start must be on the grid");
  check(g.in_bounds(State{train_start_x, train_start_y}), "train start must be on the grid");
  check(!uniform_starts || g.num_states() > 1, "uniform starts need a non-goal state");
  check(smoothing_window >= 1 && smoothing_window % 2 == 1, "smoothing_window must be odd");
  check(stability_window >= 1, "stability_window must be >= 1");
  check(seed_count >= 1, "seed_count must be >= 1");
  check(max_changes >= 0, "max_changes must be >= 0");
  check(lambda > 0.0, "lambda must be > 0");
  check(alpha > 0.0, "alpha must be > 0");
  check(weight_floor > 0.0 && weight_floor < 1.0, "weight_floor must lie in (0, 1)");
  check(distance_refresh_every >= 0, "distance_refresh_every must be >= 0");
  check(replay_capacity >= 1, "replay_capacity must be >= 1");
  check(batch_size >= 1, "batch_size must be >= 1");
  check(updates_per_step >= 0, "updates_per_step must be >= 0");
  check(tau_kernel > 0.0, "tau_kernel must be > 0");
  check(sampling_floor > 0.0, "sampling_floor must be > 0");
  check(demo_draws >= 1, "demo_draws must be >= 1");
  check(frontier_tau >= 0, "frontier_tau must be >= 0");
  check(n_random_seeds >= 1, "n_random_seeds must be >= 1");
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  find_key(key).set(*this, value);
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(registry().size());
  for (const auto& def : registry()) out.emplace_back(def.key, def.get(*this));
  std::sort(out.begin(), out.end());
  return out;
}

std::string ExperimentConfig::describe_keys() {
  const ExperimentConfig defaults;
  std::size_t width = 0;
  for (const auto& def : registry()) width = std::max(width, def.key.size());
  std::string out;
  for (const auto& def : registry()) {
    out += "  " + def.key + std::string(width - def.key.size() + 2, ' ') +
           "(default " + def.get(defaults) + ")  " + def.desc + "\n";
  }
  return out;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t");
      return s.substr(b, e - b + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    try {
      cfg.set(key, value);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& overrides) {
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("override must look like key=value: '" + item + "'");
    cfg.set(item.substr(0, eq), item.substr(eq + 1));
  }
}

}  // namespace structrl
