#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wembed {

struct SubwordConfig {
  int minn = 2;
  int maxn = 7;
  std::uint32_t n_buckets = 2'000'000;
  char32_t bow_marker = U'<';
  char32_t eow_marker = U'>';

  /// Throws UsageError unless 1 <= minn <= maxn and n_buckets >= 1.
  void validate() const;
};

/// Character n-grams of the marked word bow+word+eow, grouped by n
/// ascending, left to right within each n. The complete marked form is not
/// returned since the word has its own vector. Throws InputError for empty
/// words or words containing a marker.
std::vector<std::string> char_ngrams(std::string_view word, const SubwordConfig& config);

/// Expected size of char_ngrams for a word of `letters` code points.
std::size_t char_ngram_count(std::size_t letters, int minn, int maxn);

/// 32-bit FNV-1a over the UTF-8 bytes.
std::uint32_t fnv1a32(std::string_view bytes) noexcept;

/// fnv1a32(ngram) mod n_buckets.
std::uint32_t ngram_bucket(std::string_view ngram, std::uint32_t n_buckets);

/// Bucket ids of all n-grams of a word, in char_ngrams order.
std::vector<std::uint32_t> word_buckets(std::string_view word, const SubwordConfig& config);

/// Like word_buckets, but a word containing a marker character simply has no
/// n-grams. Used wherever whole vocabularies are decomposed.
std::vector<std::uint32_t> vocab_word_buckets(std::string_view word, const SubwordConfig& config);

} // namespace wembed
