#pragma once

#include "structrl/distribution.hpp"
#include "structrl/gridworld.hpp"
#include "structrl/rng.hpp"

#include <vector>

namespace structrl {

/// Tabular C51 table: one categorical return distribution per (state, action).
///
/// Non-goal entries start as the uniform (maximum entropy) distribution. The
/// goal state is terminal, is never the origin of a transition, and its
/// return is zero by definition, so its entries are initialized one-hot at
/// the atom nearest zero.
class QTable {
 public:
  QTable(const GridSpec& spec, Support sup, double gamma);

  const GridSpec& spec() const { return spec_; }
  const Support& support() const { return sup_; }
  double gamma() const { return gamma_; }

  const CategoricalDist& dist(State s, Action a) const {
    return dists_[entry_index(s, a)];
  }
  CategoricalDist& dist(State s, Action a) { return dists_[entry_index(s, a)]; }

  /// Expected return of dist(s, a).
  double q_value(State s, Action a) const;

  /// argmax_a q_value(s, a); ties broken by the fixed Action ordering.
  Action greedy_action(State s) const;

  /// State value max_a q_value(s, a).
  double value(State s) const;

  /// One asynchronous distributional Bellman update with step size eta:
  /// dist(s, a) <- (1 - eta) * dist(s, a) + eta * project(T dist(s', a*)),
  /// where a* is the greedy action at s'.
  void update(const Transition& t, double eta);

 private:
  int entry_index(State s, Action a) const {
    return spec_.index(s) * kNumActions + static_cast<int>(a);
  }

  GridSpec spec_;
  Support sup_;
  double gamma_;
  std::vector<CategoricalDist> dists_;
};

/// With probability epsilon a uniformly random action, else the greedy one.
Action epsilon_greedy(const QTable& table, State s, double epsilon,
                      RngStream& rng);

/// One synchronous sweep: every non-goal (state, action) entry is updated
/// from a frozen copy of the table, so the result does not depend on
/// iteration order. Used by convergence oracles, not by training.
QTable synchronous_sweep(const QTable& table, double eta);

}  // namespace structrl
