#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "gradcheck.hpp"
#include "oracles.hpp"
#include "wembed/error.hpp"
#include "wembed/glove.hpp"

using namespace wembed;

TEST_CASE("weighting function") {
  CHECK(glove_weight(100, 100, 0.75) == 1.0);
  CHECK(glove_weight(250, 100, 0.75) == 1.0);
  CHECK(glove_weight(0, 100, 0.75) == 0.0);
  CHECK(glove_weight(12.5, 100, 0.75) == doctest::Approx(0.210224).epsilon(1e-6));
}

TEST_CASE("loss values") {
  auto m = GloveModel::init(2, 2, 1);
  std::fill(m.w.data().begin(), m.w.data().end(), 0.0);
  std::fill(m.wc.data().begin(), m.wc.data().end(), 0.0);
  std::fill(m.b.begin(), m.b.end(), 0.0);
  std::fill(m.bc.begin(), m.bc.end(), 0.0);
  CHECK(glove_loss(m, {0, 1, 1.0}, 100, 0.75) == 0.0);
  CHECK_THROWS_AS(glove_loss(m, {0, 1, 0.0}, 100, 0.75), DomainError);

  // Hand-set toy model.
  m.w.at(0, 0) = 0.5, m.w.at(0, 1) = -1.0;
  m.wc.at(1, 0) = 2.0, m.wc.at(1, 1) = 0.25;
  m.b[0] = 0.1, m.bc[1] = -0.3;
  const double x = 4.0;
  const double d = 0.5 * 2.0 + -1.0 * 0.25 + 0.1 - 0.3 - std::log(x);
  CHECK(glove_loss(m, {0, 1, x}, 100, 0.75) == doctest::Approx(std::pow(0.04, 0.75) * d * d));

  // Exact fit has zero loss.
  m.b[0] = std::log(x) - (0.5 * 2.0 - 0.25) + 0.3;
  CHECK(std::abs(glove_loss(m, {0, 1, x}, 100, 0.75)) < 1e-24);
}

TEST_CASE("analytic gradient matches finite differences") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    CAPTURE(trial);
    REQUIRE(gradcheck::glove_trial(rng) < 1e-5);
  }
}

TEST_CASE("AdaGrad update") {
  Rng rng(1);
  auto m = gradcheck::random_glove(3, 4, rng);
  const CoocRecord rec{0, 2, 7.0};
  GloveConfig cfg;
  cfg.dim = 4;
  cfg.lr = 0.05;
  const auto before = m;
  const auto g = glove_gradient(m, rec, cfg.x_max, cfg.alpha);
  const double loss = glove_update(m, rec, cfg);
  CHECK(loss == glove_loss(before, rec, cfg.x_max, cfg.alpha));
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(m.w.at(0, k) == doctest::Approx(before.w.at(0, k) - cfg.lr * g.d_w[k] / std::sqrt(before.w_sq.at(0, k))));
    CHECK(m.w_sq.at(0, k) == doctest::Approx(before.w_sq.at(0, k) + g.d_w[k] * g.d_w[k]));
  }
  CHECK(m.b[0] == doctest::Approx(before.b[0] - cfg.lr * g.d_b));
  CHECK(glove_loss(m, rec, cfg.x_max, cfg.alpha) < loss);
}

TEST_CASE("training") {
  auto topics = fixtures::two_topic_corpus(50, 10, 3);
  auto vocab = build_vocab(topics.corpus, 1);
  auto store = accumulate_cooccurrence(topics.corpus, vocab, 5);
  GloveConfig cfg;
  cfg.dim = 10;
  cfg.epochs = 10;
  cfg.lr = 0.05;
  cfg.seed = 3;

  SUBCASE("mean epoch loss decreases") {
    auto t = train_glove_model(store, vocab, cfg);
    REQUIRE(t.epoch_loss.size() == 10);
    for (std::size_t e = 1; e < t.epoch_loss.size(); ++e) CHECK(t.epoch_loss[e] < t.epoch_loss[e - 1]);
  }
  SUBCASE("bit-identical reruns") {
    auto a = train_glove(store, vocab, cfg);
    auto b = train_glove(store, vocab, cfg);
    CHECK(a.input() == b.input());
    CHECK(a.output() == b.output());
    CHECK(a.meta().algorithm == "glove");
    CHECK_FALSE(a.meta().has_subwords);
    REQUIRE(a.word_count() == vocab.size());
    for (std::size_t k = 0; k < cfg.dim; ++k) {
      auto t = train_glove_model(store, vocab, cfg);
      CHECK(a.input().at(0, k) == t.model.w.at(0, k) + t.model.wc.at(0, k));
    }
  }
  SUBCASE("parallel training stays finite") {
    cfg.threads = 3;
    auto e = train_glove(store, vocab, cfg);
    CHECK(e.input().all_finite());
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(train_glove(CooccurrenceStore({}, 5, vocab.hash()), vocab, cfg), TrainingError);
    auto other = build_vocab(fixtures::two_topic_corpus(10, 5, 9).corpus, 1);
    CHECK_THROWS_AS(train_glove(store, other, cfg), IntegrityError);
    cfg.lr = 1e300;
    CHECK_THROWS_AS(train_glove(store, vocab, cfg), DivergenceError);
    cfg.lr = 0.05;
    cfg.dim = 0;
    CHECK_THROWS_AS(train_glove(store, vocab, cfg), UsageError);
  }
}
