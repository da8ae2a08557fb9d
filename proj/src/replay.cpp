#include "sddpg/replay.hpp"

#include <stdexcept>

namespace sddpg {

void ReplayBuffer::push(Transition t) {
    if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: zero capacity");
    if (data_.size() < capacity_) {
        data_.push_back(std::move(t));
        return;
    }
    data_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
}

std::vector<Transition> ReplayBuffer::sample(int n, Rng& rng) const {
    if (data_.empty()) throw std::invalid_argument("ReplayBuffer: sampling from empty buffer");
    std::vector<Transition> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(data_[rng.uniform_index(data_.size())]);
    return out;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
    // oldest element sits at head_ once the ring has wrapped
    if (data_.size() < capacity_) return data_[i];
    return data_[(head_ + i) % capacity_];
}

}  // namespace sddpg
