#include "wembed/subword.hpp"

#include "wembed/error.hpp"
#include "wembed/utf8.hpp"

namespace wembed {

void SubwordConfig::validate() const {
  if (minn < 1 || maxn < minn) throw UsageError("subword lengths need 1 <= minn <= maxn");
  if (n_buckets < 1) throw UsageError("bucket count must be positive");
}

std::vector<std::string> char_ngrams(std::string_view word, const SubwordConfig& config) {
  if (word.empty()) throw InputError("cannot take n-grams of an empty word");
  std::u32string marked;
  marked.reserve(word.size() + 2);
  marked.push_back(config.bow_marker);
  for (char32_t c : utf8::decode(word)) {
    if (c == config.bow_marker || c == config.eow_marker)
      throw InputError("word '" + std::string(word) + "' contains a subword marker character");
    marked.push_back(c);
  }
  marked.push_back(config.eow_marker);

  const std::size_t total = marked.size();
  std::vector<std::string> out;
  for (std::size_t n = static_cast<std::size_t>(config.minn);
       n <= static_cast<std::size_t>(config.maxn) && n < total; ++n) {
    for (std::size_t i = 0; i + n <= total; ++i)
      out.push_back(utf8::encode(std::u32string_view(marked).substr(i, n)));
  }
  return out;
}

std::size_t char_ngram_count(std::size_t letters, int minn, int maxn) {
  const std::size_t total = letters + 2;
  std::size_t count = 0;
  for (std::size_t n = static_cast<std::size_t>(minn); n <= static_cast<std::size_t>(maxn) && n < total; ++n)
    count += total - n + 1;
  return count;
}

std::uint32_t fnv1a32(std::string_view bytes) noexcept {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

std::uint32_t ngram_bucket(std::string_view ngram, std::uint32_t n_buckets) {
  if (ngram.empty()) throw InputError("empty n-gram");
  if (n_buckets == 0) throw UsageError("bucket count must be positive");
  return fnv1a32(ngram) % n_buckets;
}

std::vector<std::uint32_t> word_buckets(std::string_view word, const SubwordConfig& config) {
  std::vector<std::uint32_t> out;
  for (const auto& g : char_ngrams(word, config)) out.push_back(ngram_bucket(g, config.n_buckets));
  return out;
}

std::vector<std::uint32_t> vocab_word_buckets(std::string_view word, const SubwordConfig& config) {
  for (char32_t c : utf8::decode(word))
    if (c == config.bow_marker || c == config.eow_marker) return {};
  return word_buckets(word, config);
}

} // namespace wembed
