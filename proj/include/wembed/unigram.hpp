#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wembed/rng.hpp"
#include "wembed/vocab.hpp"

namespace wembed {

/// Noise distribution for negative sampling: a table whose entries are word
/// ids in proportion to count^0.75.
class UnigramTable {
public:
  UnigramTable() = default;
  /// Slots are apportioned by largest remainder (ties to the lower id).
  /// Throws UsageError when size < number of words or there are no words.
  UnigramTable(std::span<const std::uint64_t> counts, std::size_t size, double power = 0.75);

  std::uint32_t sample(Rng& rng) const { return table_[rng.below(table_.size())]; }
  std::size_t size() const noexcept { return table_.size(); }
  const std::vector<std::uint32_t>& entries() const noexcept { return table_; }

private:
  std::vector<std::uint32_t> table_;
};

UnigramTable build_unigram_table(const Vocabulary& vocab, std::size_t size);

/// count^power normalised to sum to one.
std::vector<double> unigram_distribution(std::span<const std::uint64_t> counts, double power = 0.75);

} // namespace wembed
