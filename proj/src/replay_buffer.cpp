#include "f2ddpg/replay_buffer.hpp"

#include <algorithm>
#include <string>

#include "f2ddpg/errors.hpp"

namespace f2ddpg::replay {

int TransitionLayout::record_width() const {
  int width = 0;
  for (int d : observation_dims) width += 2 * d;
  for (int d : action_dims) width += d;
  return width + num_agents();
}

ReplayBuffer::ReplayBuffer(TransitionLayout layout, std::size_t capacity)
    : layout_(std::move(layout)),
      capacity_(capacity),
      width_(static_cast<std::size_t>(layout_.record_width())) {
  if (capacity_ == 0) throw ConfigError("replay capacity must be positive");
  if (layout_.action_dims.size() != layout_.observation_dims.size() ||
      layout_.observation_dims.empty()) {
    throw ConfigError("replay layout needs one obs and action dim per agent");
  }
}

void ReplayBuffer::Push(const Transition& t) {
  const std::size_t n = layout_.observation_dims.size();
  if (t.observations.size() != n || t.actions.size() != n ||
      t.rewards.size() != n || t.next_observations.size() != n) {
    throw ContractError("transition agent count does not match the buffer");
  }
  for (std::size_t a = 0; a < n; ++a) {
    const auto od = static_cast<std::size_t>(layout_.observation_dims[a]);
    const auto ad = static_cast<std::size_t>(layout_.action_dims[a]);
    if (t.observations[a].size() != od || t.next_observations[a].size() != od ||
        t.actions[a].size() != ad) {
      throw ContractError("transition layout mismatch for agent " +
                          std::to_string(a));
    }
  }

  std::size_t slot;
  if (size_ < capacity_) {
    slot = size_;
    if (data_.size() < (slot + 1) * width_) data_.resize((slot + 1) * width_);
    ++size_;
  } else {
    slot = head_;
    head_ = (head_ + 1) % capacity_;
  }
  double* out = data_.data() + slot * width_;
  for (const auto& v : t.observations) out = std::copy(v.begin(), v.end(), out);
  for (const auto& v : t.actions) out = std::copy(v.begin(), v.end(), out);
  out = std::copy(t.rewards.begin(), t.rewards.end(), out);
  for (const auto& v : t.next_observations) {
    out = std::copy(v.begin(), v.end(), out);
  }
}

const double* ReplayBuffer::Record(std::size_t logical) const {
  if (logical >= size_) throw ContractError("replay index out of range");
  const std::size_t slot =
      size_ < capacity_ ? logical : (head_ + logical) % capacity_;
  return data_.data() + slot * width_;
}

Transition ReplayBuffer::At(std::size_t i) const {
  const double* in = Record(i);
  Transition t;
  auto take = [&in](int d) {
    std::vector<double> v(in, in + d);
    in += d;
    return v;
  };
  for (int d : layout_.observation_dims) t.observations.push_back(take(d));
  for (int d : layout_.action_dims) t.actions.push_back(take(d));
  t.rewards = take(layout_.num_agents());
  for (int d : layout_.observation_dims) t.next_observations.push_back(take(d));
  return t;
}

std::optional<Minibatch> ReplayBuffer::Sample(std::size_t batch_size,
                                              Rng& rng) const {
  if (batch_size == 0 || size_ < batch_size) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  std::vector<std::size_t> indices(batch_size);
  for (auto& i : indices) i = pick(rng);
  return Gather(indices);
}

Minibatch ReplayBuffer::Gather(std::span<const std::size_t> indices) const {
  const int n = layout_.num_agents();
  const auto b = static_cast<Eigen::Index>(indices.size());
  Minibatch batch;
  batch.indices.assign(indices.begin(), indices.end());
  for (int a = 0; a < n; ++a) {
    batch.observations.emplace_back(layout_.observation_dims[a], b);
    batch.actions.emplace_back(layout_.action_dims[a], b);
    batch.next_observations.emplace_back(layout_.observation_dims[a], b);
  }
  batch.rewards.resize(n, b);
  for (Eigen::Index col = 0; col < b; ++col) {
    const double* in = Record(indices[col]);
    for (int a = 0; a < n; ++a) {
      const int d = layout_.observation_dims[a];
      std::copy_n(in, d, batch.observations[a].col(col).data());
      in += d;
    }
    for (int a = 0; a < n; ++a) {
      const int d = layout_.action_dims[a];
      std::copy_n(in, d, batch.actions[a].col(col).data());
      in += d;
    }
    std::copy_n(in, n, batch.rewards.col(col).data());
    in += n;
    for (int a = 0; a < n; ++a) {
      const int d = layout_.observation_dims[a];
      std::copy_n(in, d, batch.next_observations[a].col(col).data());
      in += d;
    }
  }
  return batch;
}

}  // namespace f2ddpg::replay
