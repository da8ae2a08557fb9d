#pragma once

#include <cstddef>
#include <vector>

#include "sddpg/rng.hpp"
#include "sddpg/transition.hpp"

namespace sddpg {

// Bounded FIFO experience store with uniform with-replacement sampling.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity = 0) : capacity_(capacity) {}

    void push(Transition t);
    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }

    std::vector<Transition> sample(int n, Rng& rng) const;

    // Oldest-first access, used by checkpointing.
    const Transition& at(std::size_t i) const;

  private:
    std::size_t capacity_ = 0;
    std::size_t head_ = 0;  // next slot to overwrite once full
    std::vector<Transition> data_;
};

}  // namespace sddpg
