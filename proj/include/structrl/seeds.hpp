#pragma once

#include "structrl/c51.hpp"
#include "structrl/dynamics.hpp"
#include "structrl/gridworld.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace structrl {

enum class SeedStrategy { TStar, Reward, Bellman, Hybrid };

const char* seed_strategy_name(SeedStrategy s);
SeedStrategy seed_strategy_from_name(const std::string& name);

/// Small set of early-active, policy-stable states the structural distance
/// grows from. `strategy` records which selector actually produced it.
struct SeedSet {
  std::vector<State> states;
  SeedStrategy strategy = SeedStrategy::TStar;
  int k = 0;
};

/// All selectors failed; the exploration phase did not produce enough signal.
struct SeedSelectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// States with finite t* and stability count <= max_changes, k smallest t*
/// first (ties by row-major order). If fewer than k qualify, max_changes is
/// relaxed by +1 until k qualify or every finite-t* candidate is already in
/// the pool. Empty pool -> nullopt.
std::optional<SeedSet> seeds_from_tstar(const GridSpec& spec,
                                        const TStarField& tstar,
                                        const std::vector<int>& stability,
                                        int k, int max_changes);

/// Origin states of observed terminal transitions, most frequent first
/// (ties by row-major order), truncated to k. No terminal observed -> nullopt.
std::optional<SeedSet> seeds_from_reward(const GridSpec& spec,
                                         std::span<const Transition> observed,
                                         int k);

/// delta(s, a) = r + gamma * V(s') - V(s) on observed (state, action) pairs,
/// with V(s) = max_a q_value(s, a).
struct BellmanImprovement {
  std::vector<double> delta;   // indexed state * kNumActions + action
  std::vector<bool> defined;
};

BellmanImprovement bellman_improvement(const QTable& table,
                                       std::span<const Transition> observed);

/// Top-k states by max_a delta(s, a), requiring a strictly positive score.
/// No positive-improvement state -> nullopt.
std::optional<SeedSet> seeds_from_bellman(const QTable& table,
                                          std::span<const Transition> observed,
                                          int k);

/// First selector that produced a set wins: t*, then reward, then Bellman.
/// Throws SeedSelectionError when all three failed.
SeedSet seeds_hybrid(std::optional<SeedSet> tstar_result,
                     std::optional<SeedSet> reward_result,
                     std::optional<SeedSet> bellman_result);

}  // namespace structrl
