#include "structrl/c51.hpp"

#include <stdexcept>
#include <utility>

namespace structrl {

QTable::QTable(const GridSpec& spec, Support sup, double gamma)
    : spec_(spec), sup_(std::move(sup)), gamma_(gamma) {
  spec_.validate();
  if (gamma_ < 0.0 || gamma_ > 1.0)
    throw std::invalid_argument("QTable: gamma outside [0, 1]");
  const CategoricalDist fresh = uniform_dist(sup_);
  const CategoricalDist terminal = one_hot(sup_, sup_.nearest_atom(0.0));
  dists_.reserve(spec_.num_states() * kNumActions);
  for (int idx = 0; idx < spec_.num_states(); ++idx) {
    const bool is_goal = spec_.state_at(idx) == spec_.goal;
    for (int a = 0; a < kNumActions; ++a)
      dists_.push_back(is_goal ? terminal : fresh);
  }
}

double QTable::q_value(State s, Action a) const {
  return mean(dist(s, a), sup_);
}

Action QTable::greedy_action(State s) const {
  Action best = Action::Up;
  double best_q = q_value(s, Action::Up);
  for (int a = 1; a < kNumActions; ++a) {
    const double q = q_value(s, kAllActions[a]);
    if (q > best_q) {
      best_q = q;
      best = kAllActions[a];
    }
  }
  return best;
}

double QTable::value(State s) const {
  return q_value(s, greedy_action(s));
}

void QTable::update(const Transition& t, double eta) {
  if (eta < 0.0 || eta > 1.0)
    throw std::invalid_argument("update: eta outside [0, 1]");
  if (eta == 0.0) return;
  const CategoricalDist& next_dist =
      dist(t.next_state, greedy_action(t.next_state));
  const BellmanTarget bt =
      bellman_target(next_dist, t.reward, gamma_, t.terminal, sup_);
  const CategoricalDist target = project(bt.atoms, bt.probs, sup_);
  CategoricalDist& current = dist(t.state, t.action);
  for (int i = 0; i < sup_.n_atoms; ++i)
    current.probs[i] = (1.0 - eta) * current.probs[i] + eta * target.probs[i];
}

Action epsilon_greedy(const QTable& table, State s, double epsilon,
                      RngStream& rng) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("epsilon_greedy: epsilon outside [0, 1]");
  if (epsilon > 0.0 && rng.uniform_real() < epsilon)
    return kAllActions[rng.uniform_int(kNumActions)];
  return table.greedy_action(s);
}

QTable synchronous_sweep(const QTable& table, double eta) {
  const QTable frozen = table;
  QTable next = table;
  const GridSpec& spec = table.spec();
  for (const State& s : all_states(spec)) {
    if (s == spec.goal) continue;
    for (Action a : kAllActions) {
      const Transition t = step(spec, s, a);
      const CategoricalDist& next_dist =
          frozen.dist(t.next_state, frozen.greedy_action(t.next_state));
      const BellmanTarget bt = bellman_target(next_dist, t.reward,
                                              table.gamma(), t.terminal,
                                              table.support());
      const CategoricalDist target =
          project(bt.atoms, bt.probs, table.support());
      CategoricalDist& cell = next.dist(s, a);
      for (int i = 0; i < table.support().n_atoms; ++i)
        cell.probs[i] = (1.0 - eta) * cell.probs[i] + eta * target.probs[i];
    }
  }
  return next;
}

}  // namespace structrl
