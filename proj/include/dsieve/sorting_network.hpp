#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace dsieve {

/// One compare-and-swap: after it, slot `low` holds the smaller value.
struct Comparator {
  std::size_t low;
  std::size_t high;
  bool operator==(const Comparator&) const = default;
};

/// Batcher odd-even mergesort network, grouped into layers of disjoint
/// comparators.
class ComparatorSchedule {
 public:
  ComparatorSchedule(std::size_t count, int element_bits, std::vector<std::vector<Comparator>> layers);

  std::size_t count() const { return count_; }
  int element_bits() const { return element_bits_; }
  const std::vector<std::vector<Comparator>>& layers() const { return layers_; }
  std::size_t depth() const { return layers_.size(); }
  std::size_t comparator_count() const;

  template <typename T>
  void apply(std::span<T> values) const {
    for (const auto& layer : layers_) {
      for (const auto& c : layer) {
        if (values[c.high] < values[c.low]) std::swap(values[c.low], values[c.high]);
      }
    }
  }

 private:
  std::size_t count_;
  int element_bits_;
  std::vector<std::vector<Comparator>> layers_;
};

/// count must be a power of two; m is the element width in bits.
ComparatorSchedule build_comparator_schedule(std::size_t count, int m);

/// Closed-form Batcher comparator count for 2^p inputs.
std::size_t batcher_comparator_count(int p);

}  // namespace dsieve
