#include "structrl/seeds.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace structrl {

const char* seed_strategy_name(SeedStrategy s) {
  switch (s) {
    case SeedStrategy::TStar: return "tstar";
    case SeedStrategy::Reward: return "reward";
    case SeedStrategy::Bellman: return "bellman";
    case SeedStrategy::Hybrid: return "hybrid";
  }
  return "?";
}

SeedStrategy seed_strategy_from_name(const std::string& name) {
  if (name == "tstar") return SeedStrategy::TStar;
  if (name == "reward") return SeedStrategy::Reward;
  if (name == "bellman") return SeedStrategy::Bellman;
  if (name == "hybrid") return SeedStrategy::Hybrid;
  throw std::invalid_argument("unknown seed strategy: " + name);
}

std::optional<SeedSet> seeds_from_tstar(const GridSpec& spec,
                                        const TStarField& tstar,
                                        const std::vector<int>& stability,
                                        int k, int max_changes) {
  if (k < 1) throw std::invalid_argument("seeds_from_tstar: k must be >= 1");
  const int n = static_cast<int>(tstar.t_star.size());
  int max_count = 0;
  for (int idx = 0; idx < n; ++idx)
    if (tstar.t_star[idx] != kNever)
      max_count = std::max(max_count, stability[idx]);

  std::vector<int> pool;
  for (int threshold = max_changes;; ++threshold) {
    pool.clear();
    for (int idx = 0; idx < n; ++idx)
      if (tstar.t_star[idx] != kNever && stability[idx] <= threshold)
        pool.push_back(idx);
    if (static_cast<int>(pool.size()) >= k || threshold >= max_count) break;
  }
  if (pool.empty()) return std::nullopt;

  std::stable_sort(pool.begin(), pool.end(), [&tstar](int a, int b) {
    return tstar.t_star[a] < tstar.t_star[b];
  });
  SeedSet set;
  set.strategy = SeedStrategy::TStar;
  set.k = k;
  for (int idx : pool) {
    set.states.push_back(spec.state_at(idx));
    if (static_cast<int>(set.states.size()) == k) break;
  }
  return set;
}

std::optional<SeedSet> seeds_from_reward(const GridSpec& spec,
                                         std::span<const Transition> observed,
                                         int k) {
  if (k < 1) throw std::invalid_argument("seeds_from_reward: k must be >= 1");
  std::map<int, int> terminal_counts;  // origin index -> observations
  for (const Transition& t : observed)
    if (t.terminal) ++terminal_counts[spec.index(t.state)];
  if (terminal_counts.empty()) return std::nullopt;

  std::vector<std::pair<int, int>> ranked(terminal_counts.begin(),
                                          terminal_counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) {
                     return a.second > b.second;  // index order breaks ties
                   });
  SeedSet set;
  set.strategy = SeedStrategy::Reward;
  set.k = k;
  for (const auto& [idx, count] : ranked) {
    set.states.push_back(spec.state_at(idx));
    if (static_cast<int>(set.states.size()) == k) break;
  }
  return set;
}

BellmanImprovement bellman_improvement(const QTable& table,
                                       std::span<const Transition> observed) {
  const GridSpec& spec = table.spec();
  const int entries = spec.num_states() * kNumActions;
  BellmanImprovement imp{std::vector<double>(entries, 0.0),
                         std::vector<bool>(entries, false)};
  for (const Transition& t : observed) {
    const int e = spec.index(t.state) * kNumActions + static_cast<int>(t.action);
    const double next_value = t.terminal ? 0.0 : table.value(t.next_state);
    imp.delta[e] = t.reward + table.gamma() * next_value - table.value(t.state);
    imp.defined[e] = true;
  }
  return imp;
}

std::optional<SeedSet> seeds_from_bellman(const QTable& table,
                                          std::span<const Transition> observed,
                                          int k) {
  if (k < 1) throw std::invalid_argument("seeds_from_bellman: k must be >= 1");
  const GridSpec& spec = table.spec();
  const BellmanImprovement imp = bellman_improvement(table, observed);

  std::vector<std::pair<double, int>> scored;  // (score, state index)
  for (int idx = 0; idx < spec.num_states(); ++idx) {
    double best = 0.0;
    bool any = false;
    for (int a = 0; a < kNumActions; ++a) {
      const int e = idx * kNumActions + a;
      if (!imp.defined[e]) continue;
      best = any ? std::max(best, imp.delta[e]) : imp.delta[e];
      any = true;
    }
    if (any && best > 0.0) scored.emplace_back(best, idx);
  }
  if (scored.empty()) return std::nullopt;

  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) {
                     if (a.first != b.first) return a.first > b.first;
                     return a.second < b.second;
                   });
  SeedSet set;
  set.strategy = SeedStrategy::Bellman;
  set.k = k;
  for (const auto& [score, idx] : scored) {
    set.states.push_back(spec.state_at(idx));
    if (static_cast<int>(set.states.size()) == k) break;
  }
  return set;
}

SeedSet seeds_hybrid(std::optional<SeedSet> tstar_result,
                     std::optional<SeedSet> reward_result,
                     std::optional<SeedSet> bellman_result) {
  if (tstar_result) return *std::move(tstar_result);
  if (reward_result) return *std::move(reward_result);
  if (bellman_result) return *std::move(bellman_result);
  throw SeedSelectionError(
      "all seed strategies failed: no activated, terminal-reaching, or "
      "positive-improvement states observed; run a longer exploration phase");
}

}  // namespace structrl
