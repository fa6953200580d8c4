#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wembed/pipeline.hpp"

namespace wembed {

struct VocabEntry {
  std::string word;
  std::uint64_t count = 0;
};

/// Frequency-ranked word table. Ids are positions in the sorted order
/// (count descending, then code-point order of the word).
class Vocabulary {
public:
  Vocabulary() = default;
  /// Entries are sorted and filtered by min_count here.
  Vocabulary(std::vector<VocabEntry> entries, std::uint64_t total_tokens, std::uint64_t min_count);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<VocabEntry>& entries() const noexcept { return entries_; }
  const VocabEntry& operator[](std::size_t id) const { return entries_[id]; }
  const std::string& word(std::size_t id) const { return entries_[id].word; }
  std::uint64_t count(std::size_t id) const { return entries_[id].count; }

  std::optional<std::uint32_t> find(std::string_view word) const;

  std::uint64_t total_tokens() const noexcept { return total_tokens_; }
  std::uint64_t min_count() const noexcept { return min_count_; }
  std::uint64_t retained_tokens() const noexcept;

  /// FNV-1a 64 over "word\tcount\n" lines in id order. Binds derived data
  /// (co-occurrence stores, embeddings) to this exact vocabulary.
  std::uint64_t hash() const noexcept;

private:
  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::uint64_t total_tokens_ = 0;
  std::uint64_t min_count_ = 1;
};

/// Counting is sharded over sentence ranges when threads > 1; the result
/// does not depend on the thread count.
Vocabulary build_vocab(const CleanCorpus& corpus, std::uint64_t min_count, unsigned threads = 1);

/// "word<TAB>count" per line in id order.
void save_vocab(const Vocabulary& vocab, const std::string& path);
/// total_tokens of the loaded vocabulary is the sum of the listed counts.
Vocabulary load_vocab(const std::string& path, std::uint64_t min_count = 1);

struct LetterNgramRow {
  std::size_t length = 0;
  std::uint64_t frequency = 0;
  double percent = 0.0;
};

struct LetterNgramStats {
  std::vector<LetterNgramRow> rows; // ascending length, only non-zero rows
  std::uint64_t total = 0;
};

double percent_of(std::uint64_t part, std::uint64_t total);

/// Token-length histogram, length measured in Unicode scalar values.
LetterNgramStats word_length_stats(const CleanCorpus& corpus);
void save_length_stats(const LetterNgramStats& stats, const std::string& path);
std::string format_length_stats(const LetterNgramStats& stats);

struct StopWordCandidate {
  std::string word;
  std::uint64_t count = 0;
  double relative_frequency = 0.0; // count / sum of vocabulary counts
};

struct StopWordCandidates {
  std::vector<StopWordCandidate> ranked;
  std::size_t cut_n = 0;
};

StopWordCandidates stopword_candidates(const Vocabulary& vocab, std::size_t top_n);
std::string format_stopwords(const StopWordCandidates& c);

/// Probability of keeping one occurrence of a word under frequency
/// subsampling: min(1, sqrt(t / f)) with f = word_count / total_tokens.
double subsample_keep_prob(std::uint64_t word_count, std::uint64_t total_tokens, double t);

} // namespace wembed
