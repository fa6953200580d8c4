#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wembed/embedding.hpp"
#include "wembed/huffman.hpp"
#include "wembed/pipeline.hpp"
#include "wembed/rng.hpp"
#include "wembed/subword.hpp"
#include "wembed/unigram.hpp"
#include "wembed/vocab.hpp"

namespace wembed {

enum class W2vMode { cbow, sg };

std::string to_string(W2vMode mode);

struct W2vConfig {
  W2vMode mode = W2vMode::sg;
  std::uint32_t dim = 300;
  double lr = 0.25;
  int epochs = 100;
  int ws = 7;
  int negatives = 20;
  int minn = 2;
  int maxn = 7;
  std::uint32_t n_buckets = 2'000'000;
  double subsample_t = 1e-4;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Sample the effective window uniformly from [1, ws] at every position.
  bool dynamic_window = true;
  std::size_t unigram_table_size = 10'000'000;

  SubwordConfig subword() const;
  void validate() const;
};

/// Window radius for one position: uniform in [1, ws], or ws when fixed.
int sample_window(Rng& rng, int ws, bool dynamic);

/// Tokens that survive frequency subsampling; keep_prob is indexed by id.
std::vector<std::uint32_t> subsample(std::span<const std::uint32_t> ids,
                                     std::span<const double> keep_prob, Rng& rng);

double sigmoid(double x);
/// log(sigmoid(x)) without overflow.
double log_sigmoid(double x);

/// Product over the word's path of sigmoid(+-inner . hidden), with a 0 bit
/// meaning the positive branch.
double hs_word_probability(const Matrix& inner, const HuffmanTree& tree, std::span<const double> hidden,
                           std::uint32_t word);
double hs_word_probability(const EmbeddingSet& model, const HuffmanTree& tree,
                           std::span<const double> hidden, std::uint32_t word);

/// Sparse gradient of a single-update objective: (row, gradient) pairs with
/// unique rows, for the input matrix and for the output matrix.
struct SparseGradient {
  std::vector<std::pair<std::uint32_t, std::vector<double>>> input;
  std::vector<std::pair<std::uint32_t, std::vector<double>>> output;
};

/// Skip-gram negative-sampling objective for one (center, context) pair:
/// -log s(u_t . h) - sum_k log s(-u_k . h), h the mean of input_rows.
double ns_objective(const EmbeddingSet& model, std::span<const std::uint32_t> input_rows,
                    std::uint32_t target, std::span<const std::uint32_t> negatives);
SparseGradient ns_gradient(const EmbeddingSet& model, std::span<const std::uint32_t> input_rows,
                           std::uint32_t target, std::span<const std::uint32_t> negatives);

/// Hidden vector of CBoW: mean over context tokens of each token's mean row.
std::vector<double> cbow_hidden(const EmbeddingSet& model,
                                std::span<const std::vector<std::uint32_t>> context_rows);

/// CBoW hierarchical-softmax objective: -log P(center | context).
double hs_objective(const EmbeddingSet& model, const HuffmanTree& tree,
                    std::span<const std::vector<std::uint32_t>> context_rows, std::uint32_t center);
SparseGradient hs_gradient(const EmbeddingSet& model, const HuffmanTree& tree,
                           std::span<const std::vector<std::uint32_t>> context_rows, std::uint32_t center);

/// In-place SGD steps with learning rate lr; each returns the objective
/// value before the step. Output vectors are updated one after another, as
/// in the reference word2vec loop, so with distinct output words the step is
/// exactly -lr times the gradient above.
double ns_update(EmbeddingSet& model, std::span<const std::uint32_t> input_rows, std::uint32_t target,
                 std::span<const std::uint32_t> negatives, double lr);
double hs_update(EmbeddingSet& model, const HuffmanTree& tree,
                 std::span<const std::vector<std::uint32_t>> context_rows, std::uint32_t center, double lr);

/// Word rows and materialised buckets for a vocabulary, with the input matrix
/// drawn uniformly from [-1/dim, 1/dim] and a zero output matrix.
EmbeddingSet init_w2v_model(const Vocabulary& vocab, const W2vConfig& config);

struct W2vTraining {
  EmbeddingSet model;
  std::vector<double> epoch_loss;           // mean objective per update, per epoch (0 without updates)
  std::vector<std::uint64_t> epoch_updates; // gradient steps taken per epoch
};

/// Both trainers throw TrainingError for an empty corpus or vocabulary.
W2vTraining train_sg(const CleanCorpus& corpus, const Vocabulary& vocab, const W2vConfig& config);
W2vTraining train_cbow(const CleanCorpus& corpus, const Vocabulary& vocab, const W2vConfig& config);
/// Dispatches on config.mode.
W2vTraining train_w2v(const CleanCorpus& corpus, const Vocabulary& vocab, const W2vConfig& config);

} // namespace wembed
