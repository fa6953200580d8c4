#include "wembed/unigram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wembed/error.hpp"

namespace wembed {

std::vector<double> unigram_distribution(std::span<const std::uint64_t> counts, double power) {
  std::vector<double> p(counts.size());
  double z = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) z += p[i] = std::pow(static_cast<double>(counts[i]), power);
  for (double& v : p) v /= z;
  return p;
}

UnigramTable::UnigramTable(std::span<const std::uint64_t> counts, std::size_t size, double power) {
  if (counts.empty()) throw UsageError("unigram table needs at least one word");
  if (size < counts.size()) throw UsageError("unigram table size must be at least the vocabulary size");
  const auto p = unigram_distribution(counts, power);
  std::vector<std::size_t> slots(p.size());
  std::vector<double> remainder(p.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double quota = p[i] * static_cast<double>(size);
    slots[i] = static_cast<std::size_t>(std::floor(quota));
    remainder[i] = quota - static_cast<double>(slots[i]);
    assigned += slots[i];
  }
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  // Rounding can leave assigned a hair above size; trim from the smallest remainders.
  for (std::size_t k = 0; assigned < size; k = (k + 1) % order.size(), ++assigned) ++slots[order[k]];
  for (std::size_t k = order.size(); assigned > size;) {
    k = (k == 0 ? order.size() : k) - 1;
    if (slots[order[k]] > 0) --slots[order[k]], --assigned;
  }
  table_.reserve(size);
  for (std::size_t i = 0; i < slots.size(); ++i)
    table_.insert(table_.end(), slots[i], static_cast<std::uint32_t>(i));
}

UnigramTable build_unigram_table(const Vocabulary& vocab, std::size_t size) {
  std::vector<std::uint64_t> counts;
  counts.reserve(vocab.size());
  for (const auto& e : vocab.entries()) counts.push_back(e.count);
  return UnigramTable(counts, size);
}

} // namespace wembed
