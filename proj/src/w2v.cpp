#include "wembed/w2v.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include "wembed/error.hpp"

namespace wembed {

std::string to_string(W2vMode mode) { return mode == W2vMode::cbow ? "cbow" : "sg"; }

SubwordConfig W2vConfig::subword() const {
  SubwordConfig s;
  s.minn = minn;
  s.maxn = maxn;
  s.n_buckets = n_buckets;
  return s;
}

void W2vConfig::validate() const {
  if (dim < 1) throw UsageError("dim must be at least 1");
  if (!(lr > 0.0)) throw UsageError("learning rate must be positive");
  if (epochs < 1) throw UsageError("epochs must be at least 1");
  if (ws < 1) throw UsageError("window size must be at least 1");
  if (negatives < 0) throw UsageError("negative sample count must be non-negative");
  if (!(subsample_t > 0.0)) throw UsageError("sampling threshold must be positive");
  subword().validate();
}

int sample_window(Rng& rng, int ws, bool dynamic) {
  return dynamic ? static_cast<int>(rng.between(1, ws)) : ws;
}

std::vector<std::uint32_t> subsample(std::span<const std::uint32_t> ids, std::span<const double> keep_prob,
                                     Rng& rng) {
  std::vector<std::uint32_t> kept;
  kept.reserve(ids.size());
  for (std::uint32_t id : ids) {
    const double p = keep_prob[id];
    if (p >= 1.0 || rng.uniform() < p) kept.push_back(id);
  }
  return kept;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double hs_word_probability(const Matrix& inner, const HuffmanTree& tree, std::span<const double> hidden,
                           std::uint32_t word) {
  double p = 1.0;
  const auto& code = tree.codes[word];
  const auto& path = tree.paths[word];
  for (std::size_t k = 0; k < code.size(); ++k) {
    const double s = dot(inner.row(path[k]), hidden);
    p *= sigmoid(code[k] ? -s : s);
  }
  return p;
}

double hs_word_probability(const EmbeddingSet& model, const HuffmanTree& tree, std::span<const double> hidden,
                           std::uint32_t word) {
  return hs_word_probability(model.output(), tree, hidden, word);
}

namespace {

using Grad = std::vector<std::pair<std::uint32_t, std::vector<double>>>;

void add_to(Grad& g, std::uint32_t row, double alpha, std::span<const double> v) {
  auto it = std::find_if(g.begin(), g.end(), [&](const auto& e) { return e.first == row; });
  if (it == g.end()) {
    g.emplace_back(row, std::vector<double>(v.size(), 0.0));
    it = std::prev(g.end());
  }
  axpy(alpha, v, it->second);
}

// rows_of(k) yields the input rows of context token k.
template <class RowsOf>
void hidden_of(const Matrix& input, std::size_t n_ctx, RowsOf rows_of, std::span<double> h) {
  std::fill(h.begin(), h.end(), 0.0);
  for (std::size_t k = 0; k < n_ctx; ++k) {
    const std::span<const std::uint32_t> rows = rows_of(k);
    const double scale = 1.0 / (static_cast<double>(n_ctx) * static_cast<double>(rows.size()));
    for (std::uint32_t r : rows) axpy(scale, input.row(r), h);
  }
}

template <class RowsOf>
double hs_step(EmbeddingSet& model, const HuffmanTree& tree, std::size_t n_ctx, RowsOf rows_of,
               std::uint32_t center, double lr, std::vector<double>& h, std::vector<double>& grad_h) {
  const std::size_t dim = model.dim();
  h.resize(dim);
  grad_h.assign(dim, 0.0);
  hidden_of(model.input(), n_ctx, rows_of, h);
  double loss = 0.0;
  const auto& code = tree.codes[center];
  const auto& path = tree.paths[center];
  for (std::size_t k = 0; k < code.size(); ++k) {
    auto v = model.output().row(path[k]);
    const double s = dot(v, h);
    loss -= log_sigmoid(code[k] ? -s : s);
    const double g = (code[k] ? 0.0 : 1.0) - sigmoid(s);
    axpy(g, v, grad_h);
    axpy(lr * g, h, v);
  }
  for (std::size_t k = 0; k < n_ctx; ++k) {
    const std::span<const std::uint32_t> rows = rows_of(k);
    const double scale = lr / (static_cast<double>(n_ctx) * static_cast<double>(rows.size()));
    for (std::uint32_t r : rows) axpy(scale, grad_h, model.input().row(r));
  }
  return loss;
}

double ns_step(EmbeddingSet& model, std::span<const std::uint32_t> input_rows, std::uint32_t target,
               std::span<const std::uint32_t> negatives, double lr, std::vector<double>& h,
               std::vector<double>& grad_h) {
  const std::size_t dim = model.dim();
  h.resize(dim);
  grad_h.assign(dim, 0.0);
  mean_of_rows(model.input(), input_rows, h);
  double loss = 0.0;
  auto step = [&](std::uint32_t out, bool positive) {
    auto u = model.output().row(out);
    const double s = dot(u, h);
    loss -= log_sigmoid(positive ? s : -s);
    const double g = (positive ? 1.0 : 0.0) - sigmoid(s);
    axpy(g, u, grad_h);
    axpy(lr * g, h, u);
  };
  step(target, true);
  for (std::uint32_t n : negatives) step(n, false);
  const double scale = lr / static_cast<double>(input_rows.size());
  for (std::uint32_t r : input_rows) axpy(scale, grad_h, model.input().row(r));
  return loss;
}

} // namespace

double ns_objective(const EmbeddingSet& model, std::span<const std::uint32_t> input_rows, std::uint32_t target,
                    std::span<const std::uint32_t> negatives) {
  std::vector<double> h(model.dim());
  mean_of_rows(model.input(), input_rows, h);
  double loss = -log_sigmoid(dot(model.output().row(target), h));
  for (std::uint32_t n : negatives) loss -= log_sigmoid(-dot(model.output().row(n), h));
  return loss;
}

SparseGradient ns_gradient(const EmbeddingSet& model, std::span<const std::uint32_t> input_rows,
                           std::uint32_t target, std::span<const std::uint32_t> negatives) {
  std::vector<double> h(model.dim());
  mean_of_rows(model.input(), input_rows, h);
  std::vector<double> d_h(model.dim(), 0.0);
  SparseGradient g;
  auto term = [&](std::uint32_t out, bool positive) {
    const auto u = model.output().row(out);
    const double coef = sigmoid(dot(u, h)) - (positive ? 1.0 : 0.0);
    add_to(g.output, out, coef, h);
    axpy(coef, u, d_h);
  };
  term(target, true);
  for (std::uint32_t n : negatives) term(n, false);
  for (std::uint32_t r : input_rows) add_to(g.input, r, 1.0 / static_cast<double>(input_rows.size()), d_h);
  return g;
}

std::vector<double> cbow_hidden(const EmbeddingSet& model,
                                std::span<const std::vector<std::uint32_t>> context_rows) {
  std::vector<double> h(model.dim());
  hidden_of(model.input(), context_rows.size(),
            [&](std::size_t k) { return std::span<const std::uint32_t>(context_rows[k]); }, h);
  return h;
}

double hs_objective(const EmbeddingSet& model, const HuffmanTree& tree,
                    std::span<const std::vector<std::uint32_t>> context_rows, std::uint32_t center) {
  const auto h = cbow_hidden(model, context_rows);
  return -std::log(hs_word_probability(model.output(), tree, h, center));
}

SparseGradient hs_gradient(const EmbeddingSet& model, const HuffmanTree& tree,
                           std::span<const std::vector<std::uint32_t>> context_rows, std::uint32_t center) {
  const auto h = cbow_hidden(model, context_rows);
  std::vector<double> d_h(model.dim(), 0.0);
  SparseGradient g;
  const auto& code = tree.codes[center];
  const auto& path = tree.paths[center];
  for (std::size_t k = 0; k < code.size(); ++k) {
    const auto v = model.output().row(path[k]);
    const double coef = sigmoid(dot(v, h)) - (code[k] ? 0.0 : 1.0);
    add_to(g.output, path[k], coef, h);
    axpy(coef, v, d_h);
  }
  const double n_ctx = static_cast<double>(context_rows.size());
  for (const auto& rows : context_rows)
    for (std::uint32_t r : rows) add_to(g.input, r, 1.0 / (n_ctx * static_cast<double>(rows.size())), d_h);
  return g;
}

double ns_update(EmbeddingSet& model, std::span<const std::uint32_t> input_rows, std::uint32_t target,
                 std::span<const std::uint32_t> negatives, double lr) {
  std::vector<double> h, grad_h;
  return ns_step(model, input_rows, target, negatives, lr, h, grad_h);
}

double hs_update(EmbeddingSet& model, const HuffmanTree& tree,
                 std::span<const std::vector<std::uint32_t>> context_rows, std::uint32_t center, double lr) {
  std::vector<double> h, grad_h;
  return hs_step(
      model, tree, context_rows.size(),
      [&](std::size_t k) { return std::span<const std::uint32_t>(context_rows[k]); }, center, lr, h, grad_h);
}

EmbeddingSet init_w2v_model(const Vocabulary& vocab, const W2vConfig& config) {
  const SubwordConfig sub = config.subword();
  std::vector<std::uint32_t> buckets;
  for (const auto& e : vocab.entries()) {
    const auto b = vocab_word_buckets(e.word, sub);
    buckets.insert(buckets.end(), b.begin(), b.end());
  }
  std::sort(buckets.begin(), buckets.end());
  buckets.erase(std::unique(buckets.begin(), buckets.end()), buckets.end());

  Matrix input(vocab.size() + buckets.size(), config.dim);
  Rng rng(config.seed);
  const double bound = 1.0 / config.dim;
  for (double& v : input.data()) v = (2.0 * rng.uniform() - 1.0) * bound;
  const std::size_t out_rows = config.mode == W2vMode::cbow ? (vocab.size() > 0 ? vocab.size() - 1 : 0)
                                                            : vocab.size();
  Matrix output(out_rows, config.dim);

  std::vector<std::string> words;
  words.reserve(vocab.size());
  for (const auto& e : vocab.entries()) words.push_back(e.word);

  EmbeddingMeta meta;
  meta.algorithm = to_string(config.mode);
  meta.vocab_hash = vocab.hash();
  meta.has_subwords = true;
  meta.subword = sub;
  meta.hyper_parameters = {
      {"dim", std::to_string(config.dim)},
      {"lr", std::to_string(config.lr)},
      {"epochs", std::to_string(config.epochs)},
      {"ws", std::to_string(config.ws)},
      {"neg", config.mode == W2vMode::sg ? std::to_string(config.negatives) : "0"},
      {"minn", std::to_string(config.minn)},
      {"maxn", std::to_string(config.maxn)},
      {"buckets", std::to_string(config.n_buckets)},
      {"sample", std::to_string(config.subsample_t)},
      {"seed", std::to_string(config.seed)},
      {"dynamic_window", config.dynamic_window ? "1" : "0"},
      {"min_count", std::to_string(vocab.min_count())},
      {"loss", config.mode == W2vMode::sg ? "negative_sampling" : "hierarchical_softmax"},
  };
  return EmbeddingSet(std::move(words), std::move(buckets), std::move(input), std::move(output), std::move(meta));
}

namespace {

constexpr double kMinLrFraction = 1e-4;
constexpr int kNegativeRetries = 8;

W2vTraining train_impl(const CleanCorpus& corpus, const Vocabulary& vocab, const W2vConfig& config) {
  config.validate();
  if (vocab.empty()) throw TrainingError("vocabulary is empty");

  std::vector<std::vector<std::uint32_t>> sentences;
  sentences.reserve(corpus.sentences.size());
  std::uint64_t in_vocab_tokens = 0;
  for (const auto& s : corpus.sentences) {
    std::vector<std::uint32_t> ids;
    ids.reserve(s.size());
    for (const auto& tok : s)
      if (auto id = vocab.find(tok)) ids.push_back(*id);
    in_vocab_tokens += ids.size();
    if (!ids.empty()) sentences.push_back(std::move(ids));
  }
  if (in_vocab_tokens == 0) throw TrainingError("corpus has no in-vocabulary tokens");

  W2vTraining out{init_w2v_model(vocab, config), {}, {}};
  EmbeddingSet& model = out.model;

  std::vector<std::vector<std::uint32_t>> rows(vocab.size());
  for (std::uint32_t id = 0; id < vocab.size(); ++id) rows[id] = model.word_rows(id);

  std::vector<double> keep(vocab.size());
  for (std::size_t id = 0; id < vocab.size(); ++id)
    keep[id] = subsample_keep_prob(vocab.count(id), std::max(vocab.total_tokens(), vocab.count(id)),
                                   config.subsample_t);

  const bool cbow = config.mode == W2vMode::cbow;
  HuffmanTree tree;
  UnigramTable unigram;
  if (cbow)
    tree = build_huffman(vocab);
  else
    unigram = build_unigram_table(vocab, std::max(config.unigram_table_size, vocab.size()));

  const double planned = static_cast<double>(in_vocab_tokens) * config.epochs;
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(sentences.size())));
  std::atomic<std::uint64_t> processed{0};

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const std::uint64_t epoch_seed = derive_seed(config.seed, static_cast<std::uint64_t>(epoch));
    std::vector<double> loss_sum(threads, 0.0);
    std::vector<std::uint64_t> updates(threads, 0);

    auto worker = [&](unsigned t) {
      Rng rng(threads == 1 ? epoch_seed : derive_seed(epoch_seed, t));
      std::vector<double> h, grad_h;
      std::vector<std::uint32_t> negs;
      std::vector<std::uint32_t> ctx;
      const std::size_t lo = sentences.size() * t / threads, hi = sentences.size() * (t + 1) / threads;
      for (std::size_t si = lo; si < hi; ++si) {
        const auto& ids = sentences[si];
        const double progress = std::min(1.0, static_cast<double>(processed.load(std::memory_order_relaxed)) / planned);
        const double lr = config.lr * (1.0 - (1.0 - kMinLrFraction) * progress);
        const auto kept = subsample(ids, keep, rng);
        processed.fetch_add(ids.size(), std::memory_order_relaxed);
        if (kept.size() < 2) continue;
        const int n = static_cast<int>(kept.size());
        for (int pos = 0; pos < n; ++pos) {
          const int b = sample_window(rng, config.ws, config.dynamic_window);
          const int from = std::max(0, pos - b), to = std::min(n - 1, pos + b);
          if (cbow) {
            ctx.clear();
            for (int c = from; c <= to; ++c)
              if (c != pos) ctx.push_back(kept[c]);
            loss_sum[t] += hs_step(
                model, tree, ctx.size(), [&](std::size_t k) { return std::span<const std::uint32_t>(rows[ctx[k]]); },
                kept[pos], lr, h, grad_h);
            ++updates[t];
          } else {
            for (int c = from; c <= to; ++c) {
              if (c == pos) continue;
              const std::uint32_t target = kept[c];
              negs.clear();
              for (int k = 0; k < config.negatives; ++k) {
                for (int attempt = 0; attempt < kNegativeRetries; ++attempt) {
                  const std::uint32_t draw = unigram.sample(rng);
                  if (draw != target) {
                    negs.push_back(draw);
                    break;
                  }
                }
              }
              loss_sum[t] += ns_step(model, rows[kept[pos]], target, negs, lr, h, grad_h);
              ++updates[t];
            }
          }
        }
      }
    };

    if (threads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
      for (auto& th : pool) th.join();
    }

    if (!model.input().all_finite() || !model.output().all_finite()) throw DivergenceError(epoch + 1);
    double total = 0.0;
    std::uint64_t count = 0;
    for (unsigned t = 0; t < threads; ++t) total += loss_sum[t], count += updates[t];
    out.epoch_loss.push_back(count ? total / static_cast<double>(count) : 0.0);
    out.epoch_updates.push_back(count);
  }
  return out;
}

} // namespace

W2vTraining train_sg(const CleanCorpus& corpus, const Vocabulary& vocab, const W2vConfig& config) {
  if (config.mode != W2vMode::sg) throw UsageError("train_sg requires mode=sg");
  return train_impl(corpus, vocab, config);
}

W2vTraining train_cbow(const CleanCorpus& corpus, const Vocabulary& vocab, const W2vConfig& config) {
  if (config.mode != W2vMode::cbow) throw UsageError("train_cbow requires mode=cbow");
  return train_impl(corpus, vocab, config);
}

W2vTraining train_w2v(const CleanCorpus& corpus, const Vocabulary& vocab, const W2vConfig& config) {
  return train_impl(corpus, vocab, config);
}

} // namespace wembed
