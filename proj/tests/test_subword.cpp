#include "doctest.h"

#include "oracles.hpp"
#include "wembed/error.hpp"
#include "wembed/rng.hpp"
#include "wembed/subword.hpp"
#include "wembed/utf8.hpp"

using namespace wembed;

namespace {

std::string random_word(Rng& rng, std::size_t len) {
  static const std::vector<std::string> letters = {"a", "b", "z", "س", "ن", "ڌ", "ي", "ٻ", "ڪ", "ء", "😀"};
  std::string w;
  for (std::size_t k = 0; k < len; ++k) w += letters[rng.below(letters.size())];
  return w;
}

} // namespace

TEST_CASE("char_ngrams hand examples") {
  SubwordConfig cfg;
  cfg.minn = 2;
  cfg.maxn = 3;
  CHECK(char_ngrams("abc", cfg) == std::vector<std::string>{"<a", "ab", "bc", "c>", "<ab", "abc", "bc>"});
  cfg.maxn = 7;
  CHECK(char_ngrams("a", cfg) == std::vector<std::string>{"<a", "a>"});
  CHECK(char_ngrams("سن", cfg) ==
        std::vector<std::string>{"<س", "سن", "ن>", "<سن", "سن>"});
}

TEST_CASE("char_ngrams rejects unrepresentable words") {
  SubwordConfig cfg;
  CHECK_THROWS_AS(char_ngrams("", cfg), InputError);
  CHECK_THROWS_AS(char_ngrams("a<b", cfg), InputError);
  CHECK_THROWS_AS(char_ngrams("ab>", cfg), InputError);
  CHECK(vocab_word_buckets("a<b", cfg).empty());
  cfg.minn = 0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
}

TEST_CASE("char_ngrams equals brute-force enumeration") {
  Rng rng(11);
  for (int k = 0; k < 1000; ++k) {
    SubwordConfig cfg;
    cfg.minn = static_cast<int>(1 + rng.below(4));
    cfg.maxn = cfg.minn + static_cast<int>(rng.below(6));
    const std::size_t len = 1 + rng.below(20);
    const auto word = random_word(rng, len);
    const auto got = char_ngrams(word, cfg);
    CAPTURE(word);
    REQUIRE(got == oracle::brute_force_ngrams(word, cfg.minn, cfg.maxn));
    REQUIRE(got.size() == char_ngram_count(len, cfg.minn, cfg.maxn));
  }
}

TEST_CASE("char_ngram_count closed form") {
  CHECK(char_ngram_count(3, 2, 3) == 7);
  CHECK(char_ngram_count(1, 2, 7) == 2);
  CHECK(char_ngram_count(1, 4, 7) == 0);
  CHECK(char_ngram_count(10, 3, 6) == 10 + 9 + 8 + 7);
}

TEST_CASE("FNV-1a 32 test vectors") {
  CHECK(fnv1a32("") == 0x811c9dc5u);
  CHECK(fnv1a32("a") == 0xe40c292cu);
  CHECK(fnv1a32("foobar") == 0xbf9cf968u);
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const auto w = random_word(rng, rng.below(12));
    CHECK(fnv1a32(w) == oracle::fnv1a32_reference(w));
  }
}

TEST_CASE("bucket assignment") {
  CHECK(ngram_bucket("<ab", 1) == 0);
  CHECK(ngram_bucket("<ab", 2'000'000) == ngram_bucket("<ab", 2'000'000));
  CHECK(ngram_bucket("<ab", 1000) == oracle::fnv1a32_reference("<ab") % 1000);
  SubwordConfig cfg;
  cfg.n_buckets = 97;
  const auto ids = word_buckets("سنڌي", cfg);
  const auto grams = char_ngrams("سنڌي", cfg);
  REQUIRE(ids.size() == grams.size());
  for (std::size_t k = 0; k < ids.size(); ++k) CHECK(ids[k] == ngram_bucket(grams[k], 97));
}
