#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "structrl/gridworld.hpp"
#include "structrl/rng.hpp"
#include "structrl/structure.hpp"

namespace structrl {

/// Knobs for structure-guided behaviour. lambda steers action selection,
/// alpha shapes replay weights, epsilon keeps a residual uniform-random
/// action rate, weight_floor bounds replay weights away from zero.
struct StructPolicyParams {
  double lambda = 1.0;
  double alpha = 1.0;
  double epsilon = 0.1;
  double weight_floor = 0.05;

  void validate() const;
};

/// Fixed-capacity FIFO transition store. Indexing via at() is logical:
/// at(0) is the oldest retained transition.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(int capacity);

  void push(const Transition& t);
  const Transition& at(int i) const;

  /// Raw storage in physical-slot order; use when order is irrelevant.
  const std::vector<Transition>& entries() const { return entries_; }

  int size() const { return static_cast<int>(entries_.size()); }
  int capacity() const { return capacity_; }
  bool empty() const { return entries_.empty(); }
  /// Total pushes ever, including overwritten ones.
  std::int64_t pushes() const { return pushes_; }
  /// Physical slot backing logical index i.
  int slot_of(int i) const { return size() < capacity_ ? i : (head_ + i) % capacity_; }
  int head() const { return head_; }

 private:
  int capacity_;
  int head_ = 0;
  std::int64_t pushes_ = 0;
  std::vector<Transition> entries_;
};

/// Draws an action from softmax-like scores exp(lambda * (d(s) - d(s'))),
/// one score per action via a one-step lookahead, after an epsilon-random
/// gate. Unreached states score neutrally.
Action select_action(const GridSpec& spec, const State& s, const DistanceField& field,
                     const StructPolicyParams& params, RngStream& rng);

/// Priority in [weight_floor, 1] for replaying t, monotone in the distance
/// drop d(s) - d(s').
double replay_weight(const GridSpec& spec, const Transition& t, const DistanceField& field,
                     const StructPolicyParams& params);

/// Structure-weighted sample of batch_size transitions, with replacement.
/// Weights are recomputed from the field on every call; training uses
/// WeightedReplaySampler instead.
std::vector<Transition> sample_batch(const GridSpec& spec, const ReplayBuffer& buffer,
                                     const DistanceField& field,
                                     const StructPolicyParams& params, int batch_size,
                                     RngStream& rng);

/// Incremental sampler over a ReplayBuffer. Keeps per-slot weights in a
/// Fenwick tree so pushes and draws are O(log capacity). Unbound it samples
/// uniformly; bind() switches to structure weights and recomputes every slot
/// (the distance field only changes at seeding or refresh events).
class WeightedReplaySampler {
 public:
  WeightedReplaySampler(const ReplayBuffer& buffer, const GridSpec& spec);

  void bind(const DistanceField& field, const StructPolicyParams& params);
  void unbind();

  /// One weighted draw; new pushes are folded in automatically.
  const Transition& draw(RngStream& rng);

 private:
  void sync();
  void rebuild();
  void set_slot(int slot, double w);
  double total() const;
  int find(double target) const;
  double weight_of(const Transition& t) const;

  const ReplayBuffer& buffer_;
  GridSpec spec_;
  std::vector<double> tree_;
  std::vector<double> slot_weight_;
  std::int64_t synced_pushes_ = 0;
  bool bound_ = false;
  DistanceField field_;
  StructPolicyParams params_;
};

}  // namespace structrl
