#include "noisyq/replay.hpp"

#include <string>

namespace noisyq {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay_capacity", "must be positive");
  storage_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(t));
  } else {
    storage_[write_cursor_] = std::move(t);
  }
  write_cursor_ = (write_cursor_ + 1) % capacity_;
}

const Transition& ReplayBuffer::operator[](std::size_t i) const {
  if (i >= storage_.size()) throw std::out_of_range("ReplayBuffer index out of range");
  if (storage_.size() < capacity_) return storage_[i];
  return storage_[(write_cursor_ + i) % capacity_];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch_size, Rng& rng) const {
  if (storage_.size() < batch_size || storage_.empty())
    throw NotReadyError("replay buffer holds " + std::to_string(storage_.size()) +
                        " transitions, need " + std::to_string(batch_size));
  std::uniform_int_distribution<std::size_t> pick(0, storage_.size() - 1);
  std::vector<std::size_t> idx(batch_size);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
  std::vector<Transition> out;
  out.reserve(batch_size);
  for (std::size_t i : sample_indices(batch_size, rng)) out.push_back(storage_[i]);
  return out;
}

}  // namespace noisyq
