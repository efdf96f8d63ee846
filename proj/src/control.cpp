#include "structrl/control.hpp"

#include <cmath>
#include <stdexcept>

namespace structrl {

void StructPolicyParams::validate() const {
  if (lambda <= 0.0) throw std::invalid_argument("StructPolicyParams: lambda must be > 0");
  if (alpha <= 0.0) throw std::invalid_argument("StructPolicyParams: alpha must be > 0");
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("StructPolicyParams: epsilon must lie in [0, 1]");
  if (weight_floor <= 0.0 || weight_floor > 1.0)
    throw std::invalid_argument("StructPolicyParams: weight_floor must lie in (0, 1]");
}

ReplayBuffer::ReplayBuffer(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw std::invalid_argument("ReplayBuffer: capacity must be >= 1");
  entries_.reserve(static_cast<std::size_t>(capacity));
}

void ReplayBuffer::push(const Transition& t) {
  if (static_cast<int>(entries_.size()) < capacity_) {
    entries_.push_back(t);
  } else {
    entries_[static_cast<std::size_t>(head_)] = t;
    head_ = (head_ + 1) % capacity_;
  }
  ++pushes_;
}

const Transition& ReplayBuffer::at(int i) const {
  if (i < 0 || i >= size()) throw std::out_of_range("ReplayBuffer::at: index out of range");
  return entries_[static_cast<std::size_t>(slot_of(i))];
}

Action select_action(const GridSpec& spec, const State& s, const DistanceField& field,
                     const StructPolicyParams& params, RngStream& rng) {
  params.validate();
  if (params.epsilon > 0.0 && rng.uniform_real() < params.epsilon)
    return kAllActions[rng.uniform_int(kNumActions)];

  const int d_s = field.at(spec, s);
  std::array<double, kNumActions> scores{};
  for (int a = 0; a < kNumActions; ++a) {
    const Transition t = step(spec, s, kAllActions[a]);
    const int d_next = field.at(spec, t.next_state);
    scores[static_cast<std::size_t>(a)] = direction_score(d_s, d_next, params.lambda);
  }
  const int pick = rng.pick_weighted(std::span<const double>(scores.data(), scores.size()));
  return kAllActions[pick];
}

double replay_weight(const GridSpec& spec, const Transition& t, const DistanceField& field,
                     const StructPolicyParams& params) {
  params.validate();
  const int d_s = field.at(spec, t.state);
  const int d_next = field.at(spec, t.next_state);
  const double score = replay_score(d_s, d_next, params.alpha);
  return params.weight_floor + (1.0 - params.weight_floor) * (1.0 + score) / 2.0;
}

std::vector<Transition> sample_batch(const GridSpec& spec, const ReplayBuffer& buffer,
                                     const DistanceField& field,
                                     const StructPolicyParams& params, int batch_size,
                                     RngStream& rng) {
  if (buffer.empty()) throw std::invalid_argument("sample_batch: buffer is empty");
  if (batch_size < 1) throw std::invalid_argument("sample_batch: batch_size must be >= 1");
  std::vector<double> weights(static_cast<std::size_t>(buffer.size()));
  for (int i = 0; i < buffer.size(); ++i)
    weights[static_cast<std::size_t>(i)] = replay_weight(spec, buffer.at(i), field, params);
  std::vector<Transition> batch;
  batch.reserve(static_cast<std::size_t>(batch_size));
  for (int b = 0; b < batch_size; ++b) batch.push_back(buffer.at(rng.pick_weighted(weights)));
  return batch;
}

WeightedReplaySampler::WeightedReplaySampler(const ReplayBuffer& buffer, const GridSpec& spec)
    : buffer_(buffer),
      spec_(spec),
      tree_(static_cast<std::size_t>(buffer.capacity()) + 1, 0.0),
      slot_weight_(static_cast<std::size_t>(buffer.capacity()), 0.0) {
  rebuild();
}

void WeightedReplaySampler::bind(const DistanceField& field, const StructPolicyParams& params) {
  params.validate();
  field_ = field;
  params_ = params;
  bound_ = true;
  rebuild();
}

void WeightedReplaySampler::unbind() {
  bound_ = false;
  rebuild();
}

double WeightedReplaySampler::weight_of(const Transition& t) const {
  return bound_ ? replay_weight(spec_, t, field_, params_) : 1.0;
}

void WeightedReplaySampler::set_slot(int slot, double w) {
  const double delta = w - slot_weight_[static_cast<std::size_t>(slot)];
  slot_weight_[static_cast<std::size_t>(slot)] = w;
  for (int i = slot + 1; i < static_cast<int>(tree_.size()); i += i & -i)
    tree_[static_cast<std::size_t>(i)] += delta;
}

void WeightedReplaySampler::rebuild() {
  std::fill(tree_.begin(), tree_.end(), 0.0);
  std::fill(slot_weight_.begin(), slot_weight_.end(), 0.0);
  for (int i = 0; i < buffer_.size(); ++i) {
    set_slot(buffer_.slot_of(i), weight_of(buffer_.at(i)));
  }
  synced_pushes_ = buffer_.pushes();
}

void WeightedReplaySampler::sync() {
  const std::int64_t behind = buffer_.pushes() - synced_pushes_;
  if (behind >= buffer_.capacity()) {
    rebuild();
    return;
  }
  while (synced_pushes_ < buffer_.pushes()) {
    const int slot = static_cast<int>(synced_pushes_ % buffer_.capacity());
    const int logical = buffer_.size() < buffer_.capacity()
                            ? slot
                            : (slot - buffer_.head() + buffer_.capacity()) % buffer_.capacity();
    set_slot(slot, weight_of(buffer_.at(logical)));
    ++synced_pushes_;
  }
}

double WeightedReplaySampler::total() const {
  double sum = 0.0;
  for (int i = static_cast<int>(tree_.size()) - 1; i > 0; i -= i & -i)
    sum += tree_[static_cast<std::size_t>(i)];
  return sum;
}

int WeightedReplaySampler::find(double target) const {
  int pos = 0;
  int step = 1;
  while (2 * step < static_cast<int>(tree_.size())) step *= 2;
  for (; step > 0; step /= 2) {
    const int next = pos + step;
    if (next < static_cast<int>(tree_.size()) &&
        tree_[static_cast<std::size_t>(next)] < target) {
      pos = next;
      target -= tree_[static_cast<std::size_t>(next)];
    }
  }
  return pos;
}

const Transition& WeightedReplaySampler::draw(RngStream& rng) {
  sync();
  if (buffer_.empty()) throw std::logic_error("WeightedReplaySampler::draw: buffer is empty");
  const double sum = total();
  double target = rng.uniform_real() * sum;
  if (target >= sum) target = std::nexttoward(sum, 0.0);
  int slot = find(target);
  if (slot >= buffer_.size() && buffer_.size() < buffer_.capacity())
    slot = buffer_.size() - 1;
  if (slot >= buffer_.capacity()) slot = buffer_.capacity() - 1;
  const int logical = buffer_.size() < buffer_.capacity()
                          ? slot
                          : (slot - buffer_.head() + buffer_.capacity()) % buffer_.capacity();
  return buffer_.at(logical);
}

}  // namespace structrl
