#pragma once

#include <cstddef>
#include <vector>

#include "noisyq/tensor.hpp"

namespace noisyq {

struct Transition {
  RealVector state;
  int action = 0;
  double reward = 0.0;
  RealVector next_state;
  bool terminal = false;

  friend bool operator==(const Transition& a, const Transition& b) {
    return a.action == b.action && a.reward == b.reward && a.terminal == b.terminal &&
           a.state == b.state && a.next_state == b.next_state;
  }
};

/// Fixed-capacity FIFO ring of transitions with uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);

  std::size_t size() const { return storage_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return storage_.empty(); }

  /// Oldest-first access; index 0 is the next entry to be evicted.
  const Transition& operator[](std::size_t i) const;

  /// Uniform draws with replacement. Throws NotReadyError while size() < batch_size.
  std::vector<std::size_t> sample_indices(std::size_t batch_size, Rng& rng) const;
  std::vector<Transition> sample(std::size_t batch_size, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::vector<Transition> storage_;
  std::size_t write_cursor_ = 0;
};

}  // namespace noisyq
