#include "structrl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace structrl {

void record_snapshot(SigmaTrace& trace, int episode, const QTable& table,
                     SigmaReduction reduction) {
  if (!trace.snapshots.empty() && episode <= trace.snapshots.back().episode)
    throw std::invalid_argument("record_snapshot: episode must increase");
  const GridSpec& spec = table.spec();
  SigmaSnapshot snap;
  snap.episode = episode;
  snap.sigma.resize(spec.num_states());
  for (int idx = 0; idx < spec.num_states(); ++idx) {
    const State s = spec.state_at(idx);
    if (reduction == SigmaReduction::Greedy) {
      snap.sigma[idx] = stddev(table.dist(s, table.greedy_action(s)),
                               table.support());
    } else {
      double acc = 0.0;
      for (Action a : kAllActions)
        acc += stddev(table.dist(s, a), table.support());
      snap.sigma[idx] = acc / kNumActions;
    }
  }
  trace.snapshots.push_back(std::move(snap));
}

namespace {

std::vector<double> smooth_series(const std::vector<double>& series,
                                  int window) {
  if (window <= 1) return series;
  const int half = window / 2;
  const int n = static_cast<int>(series.size());
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double acc = 0.0;
    for (int j = lo; j <= hi; ++j) acc += series[j];
    out[i] = acc / (hi - lo + 1);
  }
  return out;
}

}  // namespace

TStarField t_star(const SigmaTrace& trace, int smoothing_window) {
  const int n_snaps = static_cast<int>(trace.snapshots.size());
  if (n_snaps < 2)
    throw std::invalid_argument("t_star: needs at least two snapshots");
  if (smoothing_window < 1 || smoothing_window % 2 == 0)
    throw std::invalid_argument("t_star: smoothing window must be odd and >= 1");

  const int n_states = static_cast<int>(trace.snapshots.front().sigma.size());
  TStarField field{std::vector<int>(n_states, kNever)};
  std::vector<double> series(n_snaps);
  for (int idx = 0; idx < n_states; ++idx) {
    for (int t = 0; t < n_snaps; ++t)
      series[t] = trace.snapshots[t].sigma[idx];
    const std::vector<double> smoothed = smooth_series(series, smoothing_window);
    double best = 0.0;
    int best_t = kNever;
    for (int t = 0; t + 1 < n_snaps; ++t) {
      const double inc = smoothed[t + 1] - smoothed[t];
      if (inc > best) {  // strict: earliest index wins ties
        best = inc;
        best_t = t;
      }
    }
    field.t_star[idx] =
        best_t == kNever ? kNever : trace.snapshots[best_t].episode;
  }
  return field;
}

void record_greedy(StabilityTrace& trace, int episode, const QTable& table) {
  if (!trace.greedy_log.empty() && episode <= trace.greedy_log.back().episode)
    throw std::invalid_argument("record_greedy: episode must increase");
  const GridSpec& spec = table.spec();
  GreedySnapshot snap;
  snap.episode = episode;
  snap.greedy.resize(spec.num_states());
  for (int idx = 0; idx < spec.num_states(); ++idx)
    snap.greedy[idx] = table.greedy_action(spec.state_at(idx));
  trace.greedy_log.push_back(std::move(snap));
}

std::vector<int> stability_counts(const StabilityTrace& trace) {
  const int len = static_cast<int>(trace.greedy_log.size());
  if (trace.window < 1)
    throw std::invalid_argument("stability_counts: window must be positive");
  if (len < trace.window)
    throw std::invalid_argument("stability_counts: log shorter than window");
  const int n_states = static_cast<int>(trace.greedy_log.front().greedy.size());
  std::vector<int> counts(n_states, 0);
  const int first = std::max(1, len - trace.window);
  for (int t = first; t < len; ++t) {
    const auto& cur = trace.greedy_log[t].greedy;
    const auto& prev = trace.greedy_log[t - 1].greedy;
    for (int idx = 0; idx < n_states; ++idx)
      if (cur[idx] != prev[idx]) ++counts[idx];
  }
  return counts;
}

std::vector<std::pair<State, State>> frontier_transitions(
    const TStarField& tstar, const DistanceField& field, int tau,
    const TransitionGraph& graph) {
  const GridSpec& spec = graph.spec();
  std::vector<std::pair<State, State>> out;
  for (const auto& [from, to] : graph.edges()) {
    const int t_from = tstar.t_star[spec.index(from)];
    const int t_to = tstar.t_star[spec.index(to)];
    if (t_from == kNever || t_to == kNever) continue;
    if (std::abs(t_from - t_to) > tau) continue;
    const int d_from = field.at(spec, from);
    const int d_to = field.at(spec, to);
    if (d_from == kUnreached || d_to == kUnreached) continue;
    if (d_to < d_from) out.emplace_back(from, to);
  }
  std::sort(out.begin(), out.end(),
            [&spec](const auto& a, const auto& b) {
              return std::pair(spec.index(a.first), spec.index(a.second)) <
                     std::pair(spec.index(b.first), spec.index(b.second));
            });
  return out;
}

std::vector<double> sampling_weights(SamplingStrategy strategy,
                                     const std::vector<double>& sigma,
                                     const TStarField& tstar,
                                     int current_episode, double tau_kernel,
                                     double floor) {
  if (floor <= 0.0)
    throw std::invalid_argument("sampling_weights: floor must be positive");
  const std::size_t n = sigma.size();
  std::vector<double> w(n, 1.0);
  switch (strategy) {
    case SamplingStrategy::Uniform:
      break;
    case SamplingStrategy::Sigma:
      for (std::size_t i = 0; i < n; ++i) w[i] = sigma[i] + floor;
      break;
    case SamplingStrategy::TStar:
      if (tau_kernel <= 0.0)
        throw std::invalid_argument("sampling_weights: tau_kernel must be positive");
      for (std::size_t i = 0; i < n; ++i) {
        const int t = tstar.t_star[i];
        w[i] = t == kNever
                   ? floor
                   : std::max(floor, std::exp(-std::abs(t - current_episode) /
                                              tau_kernel));
      }
      break;
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

}  // namespace structrl
