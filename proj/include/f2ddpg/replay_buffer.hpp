#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "f2ddpg/rng.hpp"

namespace f2ddpg::replay {

// One joint step: o, a, r, o'. Actions are flat squashed vectors.
struct Transition {
  std::vector<std::vector<double>> observations;
  std::vector<std::vector<double>> actions;
  std::vector<double> rewards;
  std::vector<std::vector<double>> next_observations;

  bool operator==(const Transition&) const = default;
};

struct TransitionLayout {
  std::vector<int> observation_dims;
  std::vector<int> action_dims;

  int num_agents() const { return static_cast<int>(observation_dims.size()); }
  int record_width() const;
};

// Column b of every matrix belongs to sample b.
struct Minibatch {
  std::vector<std::size_t> indices;  // 0 = oldest stored transition
  std::vector<Eigen::MatrixXd> observations;       // per agent: obs_dim x B
  std::vector<Eigen::MatrixXd> actions;            // per agent: act_dim x B
  Eigen::MatrixXd rewards;                         // N x B
  std::vector<Eigen::MatrixXd> next_observations;  // per agent: obs_dim x B

  int size() const { return static_cast<int>(indices.size()); }
};

// Fixed-capacity FIFO ring of fixed-width records. Storage grows on demand
// up to capacity, so a large nominal capacity costs nothing until filled.
class ReplayBuffer {
 public:
  ReplayBuffer(TransitionLayout layout, std::size_t capacity);

  const TransitionLayout& layout() const { return layout_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return size_; }

  // Evicts the oldest transition when full. Throws ContractError if the
  // transition does not match the layout.
  void Push(const Transition& transition);

  // i-th oldest stored transition.
  Transition At(std::size_t i) const;

  // B indices uniform with replacement. std::nullopt while size() < B.
  std::optional<Minibatch> Sample(std::size_t batch_size, Rng& rng) const;

  Minibatch Gather(std::span<const std::size_t> indices) const;

 private:
  const double* Record(std::size_t logical) const;

  TransitionLayout layout_;
  std::size_t capacity_;
  std::size_t width_;
  std::size_t head_ = 0;  // physical slot of the oldest record once full
  std::size_t size_ = 0;
  std::vector<double> data_;
};

}  // namespace f2ddpg::replay
