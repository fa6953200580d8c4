#include "wembed/glove.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "wembed/error.hpp"
#include "wembed/rng.hpp"

namespace wembed {

void GloveConfig::validate() const {
  if (dim < 1) throw UsageError("dim must be at least 1");
  if (!(lr > 0.0)) throw UsageError("learning rate must be positive");
  if (epochs < 1) throw UsageError("epochs must be at least 1");
  if (!(x_max > 0.0)) throw UsageError("x_max must be positive");
  if (!(alpha > 0.0)) throw UsageError("alpha must be positive");
}

GloveModel GloveModel::init(std::size_t words, std::uint32_t dim, std::uint64_t seed) {
  GloveModel m;
  m.w = Matrix(words, dim);
  m.wc = Matrix(words, dim);
  m.b.assign(words, 0.0);
  m.bc.assign(words, 0.0);
  Rng rng(seed);
  const double scale = 1.0 / dim;
  auto draw = [&] { return (rng.uniform() - 0.5) * scale; };
  for (double& v : m.w.data()) v = draw();
  for (double& v : m.wc.data()) v = draw();
  for (double& v : m.b) v = draw();
  for (double& v : m.bc) v = draw();
  m.w_sq = Matrix(words, dim);
  m.wc_sq = Matrix(words, dim);
  std::fill(m.w_sq.data().begin(), m.w_sq.data().end(), 1.0);
  std::fill(m.wc_sq.data().begin(), m.wc_sq.data().end(), 1.0);
  m.b_sq.assign(words, 1.0);
  m.bc_sq.assign(words, 1.0);
  return m;
}

double glove_weight(double x, double x_max, double alpha) {
  if (x < 0.0) throw DomainError("co-occurrence weight must be non-negative");
  return x < x_max ? std::pow(x / x_max, alpha) : 1.0;
}

namespace {

double residual(const GloveModel& m, const CoocRecord& rec) {
  return dot(m.w.row(rec.i), m.wc.row(rec.j)) + m.b[rec.i] + m.bc[rec.j] - std::log(rec.x);
}

void require_positive(double x) {
  if (!(x > 0.0)) throw DomainError("co-occurrence value must be positive for the log");
}

} // namespace

double glove_loss(const GloveModel& model, const CoocRecord& rec, double x_max, double alpha) {
  require_positive(rec.x);
  const double d = residual(model, rec);
  return glove_weight(rec.x, x_max, alpha) * d * d;
}

GloveGradient glove_gradient(const GloveModel& model, const CoocRecord& rec, double x_max, double alpha) {
  require_positive(rec.x);
  const double g = 2.0 * glove_weight(rec.x, x_max, alpha) * residual(model, rec);
  GloveGradient out;
  const auto wi = model.w.row(rec.i);
  const auto wcj = model.wc.row(rec.j);
  out.d_w.resize(wi.size());
  out.d_wc.resize(wi.size());
  for (std::size_t k = 0; k < wi.size(); ++k) {
    out.d_w[k] = g * wcj[k];
    out.d_wc[k] = g * wi[k];
  }
  out.d_b = g;
  out.d_bc = g;
  return out;
}

double glove_update(GloveModel& m, const CoocRecord& rec, const GloveConfig& config) {
  require_positive(rec.x);
  const double d = residual(m, rec);
  const double f = glove_weight(rec.x, config.x_max, config.alpha);
  const double g = 2.0 * f * d;
  auto wi = m.w.row(rec.i);
  auto wcj = m.wc.row(rec.j);
  auto wi_sq = m.w_sq.row(rec.i);
  auto wcj_sq = m.wc_sq.row(rec.j);
  const double lr = config.lr;
  for (std::size_t k = 0; k < wi.size(); ++k) {
    const double gw = g * wcj[k];
    const double gc = g * wi[k];
    wi[k] -= lr * gw / std::sqrt(wi_sq[k]);
    wcj[k] -= lr * gc / std::sqrt(wcj_sq[k]);
    wi_sq[k] += gw * gw;
    wcj_sq[k] += gc * gc;
  }
  m.b[rec.i] -= lr * g / std::sqrt(m.b_sq[rec.i]);
  m.bc[rec.j] -= lr * g / std::sqrt(m.bc_sq[rec.j]);
  m.b_sq[rec.i] += g * g;
  m.bc_sq[rec.j] += g * g;
  return f * d * d;
}

namespace {

bool model_finite(const GloveModel& m) {
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return m.w.all_finite() && m.wc.all_finite() && finite(m.b) && finite(m.bc);
}

} // namespace

GloveTraining train_glove_model(const CooccurrenceStore& store, const Vocabulary& vocab,
                                const GloveConfig& config) {
  config.validate();
  store.check_vocab(vocab);
  if (store.empty()) throw TrainingError("co-occurrence store is empty");
  for (const auto& r : store.records()) require_positive(r.x);

  GloveTraining out{GloveModel::init(vocab.size(), config.dim, config.seed), {}};
  GloveModel& model = out.model;
  const auto& records = store.records();
  const unsigned threads = std::max(1u, config.threads);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const ShuffledStream stream(store, derive_seed(config.seed, static_cast<std::uint64_t>(epoch)));
    const auto& order = stream.order();
    double loss = 0.0;
    if (threads == 1) {
      for (std::size_t idx : order) loss += glove_update(model, records[idx], config);
    } else {
      // Lock-free workers over disjoint slices of the shuffled order.
      std::vector<double> partial(threads, 0.0);
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          const std::size_t lo = order.size() * t / threads, hi = order.size() * (t + 1) / threads;
          double s = 0.0;
          for (std::size_t k = lo; k < hi; ++k) s += glove_update(model, records[order[k]], config);
          partial[t] = s;
        });
      }
      for (auto& th : pool) th.join();
      for (double p : partial) loss += p;
    }
    if (!model_finite(model) || !std::isfinite(loss)) throw DivergenceError(epoch + 1);
    out.epoch_loss.push_back(loss / static_cast<double>(order.size()));
  }
  return out;
}

EmbeddingSet glove_embeddings(const GloveModel& model, const Vocabulary& vocab, const GloveConfig& config) {
  Matrix combined = model.w;
  for (std::size_t k = 0; k < combined.data().size(); ++k) combined.data()[k] += model.wc.data()[k];
  std::vector<std::string> words;
  words.reserve(vocab.size());
  for (const auto& e : vocab.entries()) words.push_back(e.word);
  EmbeddingMeta meta;
  meta.algorithm = "glove";
  meta.vocab_hash = vocab.hash();
  meta.has_subwords = false;
  meta.subword.n_buckets = 0;
  meta.hyper_parameters = {
      {"dim", std::to_string(config.dim)},       {"lr", std::to_string(config.lr)},
      {"epochs", std::to_string(config.epochs)}, {"x_max", std::to_string(config.x_max)},
      {"alpha", std::to_string(config.alpha)},   {"seed", std::to_string(config.seed)},
      {"min_count", std::to_string(vocab.min_count())},
  };
  return EmbeddingSet(std::move(words), {}, std::move(combined), model.wc, std::move(meta));
}

EmbeddingSet train_glove(const CooccurrenceStore& store, const Vocabulary& vocab, const GloveConfig& config,
                         std::vector<double>* epoch_loss) {
  auto trained = train_glove_model(store, vocab, config);
  if (epoch_loss) *epoch_loss = trained.epoch_loss;
  auto emb = glove_embeddings(trained.model, vocab, config);
  emb.meta().hyper_parameters["ws"] = std::to_string(store.window());
  return emb;
}

} // namespace wembed
