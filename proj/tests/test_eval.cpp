#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "wembed/error.hpp"
#include "wembed/eval.hpp"
#include "wembed/w2v.hpp"

using namespace wembed;

namespace {

EmbeddingSet plain(std::vector<std::string> words, std::vector<std::vector<double>> vecs) {
  Matrix m(vecs.size(), vecs.front().size());
  for (std::size_t r = 0; r < vecs.size(); ++r)
    for (std::size_t c = 0; c < vecs[r].size(); ++c) m.at(r, c) = vecs[r][c];
  EmbeddingMeta meta;
  meta.dim = static_cast<std::uint32_t>(m.cols());
  return EmbeddingSet(std::move(words), {}, std::move(m), Matrix{}, meta);
}

} // namespace

TEST_CASE("cosine similarity") {
  const std::vector<double> a = {1, 0}, b = {0, 1}, c = {1, 1}, d = {2, 2}, e = {1, 2}, f = {3, 4}, z = {0, 0};
  CHECK(cosine_similarity(a, b) == 0.0);
  CHECK(cosine_similarity(c, d) == doctest::Approx(1.0));
  CHECK(cosine_similarity(c, d) <= 1.0);
  CHECK(cosine_similarity(e, f) == doctest::Approx(11.0 / (std::sqrt(5.0) * 5.0)));
  CHECK(cosine_similarity(e, f) == doctest::Approx(0.98387).epsilon(1e-5));
  CHECK_THROWS_AS(cosine_similarity(a, z), DomainError);
  CHECK_THROWS_AS(cosine_similarity(a, std::vector<double>{1, 2, 3}), DomainError);
}

TEST_CASE("nearest neighbours") {
  auto emb = plain({"a", "b", "c"}, {{1, 0}, {0.9, 0.1}, {0, 1}});
  auto ns = nearest_neighbors(emb, "a", 2);
  REQUIRE(ns.size() == 2);
  CHECK(ns[0].word == "b");
  CHECK(ns[1].word == "c");
  CHECK(nearest_neighbors(emb, "a", 10).size() == 2);
  CHECK_THROWS_AS(nearest_neighbors(emb, "zz", 2), NotFoundError);

  auto dup = plain({"w", "x", "w2"}, {{0.3, -0.7}, {1, 1}, {0.3, -0.7}});
  auto top = nearest_neighbors(dup, "w", 1);
  CHECK(top[0].word == "w2");
  CHECK(top[0].cosine == doctest::Approx(1.0));

  auto ties = plain({"q", "p2", "p1"}, {{1, 0}, {2, 0}, {3, 0}});
  auto tn = nearest_neighbors(ties, "q", 2);
  CHECK(tn[0].word == "p2");
  CHECK(tn[1].word == "p1");

  const auto text = format_neighbors("a", ns);
  CHECK(text.find("b") != std::string::npos);
}

TEST_CASE("word vectors compose subwords") {
  auto topics = fixtures::two_topic_corpus(200, 12, 4);
  auto vocab = build_vocab(topics.corpus, 1);
  W2vConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 3;
  cfg.n_buckets = 5000;
  cfg.unigram_table_size = 10'000;
  auto emb = train_sg(topics.corpus, vocab, cfg).model;

  SUBCASE("in-vocabulary words use the training composition") {
    const auto id = *emb.find(topics.topic_a[0]);
    const auto rows = emb.word_rows(id);
    std::vector<double> expect(8);
    mean_of_rows(emb.input(), rows, expect);
    CHECK(word_vector(emb, topics.topic_a[0]) == expect);
  }
  SUBCASE("unknown words average their n-gram rows") {
    const std::string oov = topics.topic_a[0] + topics.topic_a[1];
    REQUIRE_FALSE(emb.find(oov).has_value());
    const auto ids = word_buckets(oov, emb.meta().subword);
    std::vector<double> expect(8, 0.0);
    for (auto b : ids)
      if (auto row = emb.bucket_row(b))
        for (std::size_t k = 0; k < 8; ++k) expect[k] += emb.input().at(*row, k);
    for (auto& x : expect) x /= static_cast<double>(ids.size());
    const auto got = word_vector(emb, oov);
    for (std::size_t k = 0; k < 8; ++k) CHECK(got[k] == doctest::Approx(expect[k]));
  }
  SUBCASE("unrepresentable words") {
    CHECK_THROWS_AS(word_vector(emb, "<>"), NotFoundError);
    emb.meta().has_subwords = false;
    CHECK_THROWS_AS(word_vector(emb, topics.topic_a[0] + "x"), NotFoundError);
  }
}

TEST_CASE("pair report") {
  auto emb = plain({"a", "b", "c"}, {{1, 0}, {0.6, 0.8}, {0, 1}});
  std::vector<WordPair> pairs = {{"a", "a", 0}};
  CHECK(pair_similarity_report(emb, pairs).pair_average == 1.0);

  pairs = {{"a", "b", 0}, {"b", "c", 0}, {"a", "zz", 0}};
  auto r = pair_similarity_report(emb, pairs);
  REQUIRE(r.pair_rows.size() == 2);
  CHECK(r.pair_rows[0].cosine == doctest::Approx(0.6));
  CHECK(r.pair_rows[1].cosine == doctest::Approx(0.8));
  CHECK(r.pair_average == doctest::Approx(0.7));
  CHECK(r.oov_words == std::vector<std::string>{"zz"});
  CHECK(format_pair_report(r).find("zz") != std::string::npos);

  const std::vector<WordPair> all_oov = {{"x", "y", 0}};
  CHECK_THROWS_AS(pair_similarity_report(emb, all_oov), NotFoundError);
  CHECK_THROWS_AS(pair_similarity_report(emb, std::vector<WordPair>{}), InputError);
}

TEST_CASE("Spearman correlation") {
  const std::vector<double> gold = {1, 2, 3, 4};
  CHECK(spearman_rho(gold, std::vector<double>{1, 3, 2, 4}) == 0.8);
  CHECK(spearman_rho(gold, std::vector<double>{10, 20, 30, 40}) == 1.0);
  CHECK(spearman_rho(gold, std::vector<double>{4, 3, 2, 1}) == -1.0);
  CHECK(average_ranks(std::vector<double>{5, 1, 5, 3}) == std::vector<double>{3.5, 1, 3.5, 2});
  CHECK_THROWS_AS(spearman_rho(gold, std::vector<double>{1, 1, 1, 1}), DomainError);
  CHECK_THROWS_AS(spearman_rho(gold, std::vector<double>{1, 2}), DomainError);
  CHECK_THROWS_AS(spearman_rho(std::vector<double>{1}, std::vector<double>{1}), DomainError);
}

TEST_CASE("WordSim evaluation on a known order") {
  // cos(anchor, w_k) increases with k.
  std::vector<std::string> words = {"anchor"};
  std::vector<std::vector<double>> vecs = {{1, 0}};
  WordSimDataset data;
  for (int k = 0; k < 6; ++k) {
    const double angle = 1.5 - 0.25 * k;
    words.push_back("w" + std::to_string(k));
    vecs.push_back({std::cos(angle), std::sin(angle)});
    data.pairs.push_back({"anchor", words.back(), static_cast<double>(k)});
  }
  data.pairs.push_back({"anchor", "missing", 9.0});
  auto emb = plain(words, vecs);
  auto r = evaluate_wordsim(emb, data);
  CHECK(r.spearman_rho == 1.0);
  CHECK(r.pair_rows.size() == 6);
  CHECK(r.oov_words == std::vector<std::string>{"missing"});
}

TEST_CASE("WordSim file parsing") {
  fixtures::TempDir dir;
  fixtures::write_file(dir.file("ws.tsv"), "# comment\n\nسنڌ\tٻولي\t7.5\nا\tب\t1\n");
  auto d = load_wordsim(dir.file("ws.tsv"));
  REQUIRE(d.pairs.size() == 2);
  CHECK(d.pairs[0].a == "سنڌ");
  CHECK(d.pairs[0].gold == 7.5);

  fixtures::write_file(dir.file("dup.tsv"), "a\tb\t1\nb\ta\t2\n");
  CHECK_THROWS_AS(load_wordsim(dir.file("dup.tsv")), ParseError);
  fixtures::write_file(dir.file("nan.tsv"), "a\tb\tnan\n");
  CHECK_THROWS_AS(load_wordsim(dir.file("nan.tsv")), ParseError);
  fixtures::write_file(dir.file("short.tsv"), "a\n");
  CHECK_THROWS_AS(load_wordsim(dir.file("short.tsv")), ParseError);

  fixtures::write_file(dir.file("pairs.tsv"), "a\tb\nc\td\n");
  CHECK(load_pairs(dir.file("pairs.tsv")).size() == 2);
  CHECK_THROWS_AS(load_wordsim(dir.file("missing.tsv")), IoError);
}
