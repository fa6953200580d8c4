#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wembed/pipeline.hpp"
#include "wembed/vocab.hpp"

namespace wembed {

struct CoocRecord {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  double x = 0.0;
};

/// Sparse word-word co-occurrence weights. Both directions are stored
/// explicitly; records are sorted by (i, j) and unique.
class CooccurrenceStore {
public:
  CooccurrenceStore() = default;
  CooccurrenceStore(std::vector<CoocRecord> records, std::uint32_t ws, std::uint64_t vocab_hash);

  const std::vector<CoocRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  std::uint32_t window() const noexcept { return ws_; }
  std::uint64_t vocab_hash() const noexcept { return vocab_hash_; }

  /// Weight of (i, j), or 0 when the pair never co-occurred.
  double weight(std::uint32_t i, std::uint32_t j) const;
  double total_weight() const;

  /// Throws IntegrityError when the store was built from another vocabulary.
  void check_vocab(const Vocabulary& vocab) const;

private:
  std::vector<CoocRecord> records_;
  std::uint32_t ws_ = 0;
  std::uint64_t vocab_hash_ = 0;
};

struct CooccurOptions {
  unsigned threads = 1;
  /// Sentences per accumulation chunk. Chunk boundaries fix the summation
  /// order, so results are identical for any thread count.
  std::size_t chunk_sentences = 8192;
  /// Merge pending chunk runs once they hold this many records.
  std::size_t merge_threshold = std::size_t{1} << 24;
};

/// Harmonically weighted, sentence-bounded counts: each in-vocabulary pair at
/// distance d <= ws adds 1/d in both directions. Out-of-vocabulary tokens are
/// dropped before windowing.
CooccurrenceStore accumulate_cooccurrence(const CleanCorpus& corpus, const Vocabulary& vocab,
                                          std::uint32_t ws, const CooccurOptions& options = {});

/// Seed-determined permutation of a store's records, one epoch's worth.
class ShuffledStream {
public:
  ShuffledStream(const CooccurrenceStore& store, std::uint64_t seed);

  /// False once every record has been emitted.
  bool next(CoocRecord& out);
  std::size_t size() const noexcept { return order_.size(); }
  const std::vector<std::size_t>& order() const noexcept { return order_; }

private:
  const CooccurrenceStore* store_;
  std::vector<std::size_t> order_;
  std::size_t pos_ = 0;
};

ShuffledStream iter_shuffled(const CooccurrenceStore& store, std::uint64_t seed);

/// Default on-disk shard size.
inline constexpr std::size_t kShardBytes = std::size_t{64} << 20;

/// One shard file: "COOC1", vocab_hash u64, ws u32, record count u64, then
/// (u32 i, u32 j, f64 x) records, all little-endian.
void save_cooccurrence(const CooccurrenceStore& store, const std::string& path);
CooccurrenceStore load_cooccurrence(const std::string& path);

/// Splits the store across files "<prefix>.NNNNN.cooc" of at most
/// shard_bytes each. Returns the paths written.
std::vector<std::string> write_shards(const CooccurrenceStore& store, const std::string& prefix,
                                      std::size_t shard_bytes = kShardBytes);
/// Reads "<prefix>.00000.cooc", "<prefix>.00001.cooc", ... until one is missing.
CooccurrenceStore read_shards(const std::string& prefix);
std::string shard_path(const std::string& prefix, std::size_t index);

} // namespace wembed
