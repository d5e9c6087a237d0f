#include "dsieve/sorting_network.hpp"

#include <algorithm>
#include <bit>

#include "dsieve/errors.hpp"

namespace dsieve {

ComparatorSchedule::ComparatorSchedule(std::size_t count, int element_bits,
                                       std::vector<std::vector<Comparator>> layers)
    : count_(count), element_bits_(element_bits), layers_(std::move(layers)) {}

std::size_t ComparatorSchedule::comparator_count() const {
  std::size_t total = 0;
  for (const auto& layer : layers_) total += layer.size();
  return total;
}

ComparatorSchedule build_comparator_schedule(std::size_t count, int m) {
  if (count == 0 || !std::has_single_bit(count))
    throw InvalidParameters("sorting network size must be a power of two");
  if (m < 1) throw InvalidParameters("element width must be positive");

  // Iterative odd-even mergesort (Knuth 5.3.4, exercise 32 form): each
  // (p, k) pair is one layer of disjoint comparators.
  std::vector<std::vector<Comparator>> layers;
  for (std::size_t p = 1; p < count; p <<= 1) {
    for (std::size_t k = p; k >= 1; k >>= 1) {
      std::vector<Comparator> layer;
      for (std::size_t j = k % p; j + k < count; j += 2 * k) {
        for (std::size_t i = 0; i < std::min(k, count - j - k); ++i) {
          if ((i + j) / (2 * p) == (i + j + k) / (2 * p)) layer.push_back({i + j, i + j + k});
        }
      }
      layers.push_back(std::move(layer));
    }
  }
  return ComparatorSchedule(count, m, std::move(layers));
}

std::size_t batcher_comparator_count(int p) {
  if (p == 0) return 0;
  // (p^2 - p + 4) * 2^(p-2) - 1, written to stay integral at p = 1.
  const std::size_t q = static_cast<std::size_t>(p);
  return ((q * q - q + 4) << q) / 4 - 1;
}

}  // namespace dsieve
