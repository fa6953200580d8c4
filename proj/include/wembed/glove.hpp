#pragma once

#include <cstdint>
#include <vector>

#include "wembed/cooccur.hpp"
#include "wembed/embedding.hpp"
#include "wembed/vocab.hpp"

namespace wembed {

struct GloveConfig {
  std::uint32_t dim = 300;
  double lr = 0.25;
  int epochs = 100;
  double x_max = 100.0;
  double alpha = 0.75;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  void validate() const;
};

/// Word and context matrices, biases and their AdaGrad accumulators.
struct GloveModel {
  Matrix w, wc;
  std::vector<double> b, bc;
  Matrix w_sq, wc_sq;
  std::vector<double> b_sq, bc_sq;

  /// Parameters uniform in [-0.5/dim, 0.5/dim]; accumulators start at 1.
  static GloveModel init(std::size_t words, std::uint32_t dim, std::uint64_t seed);
  std::size_t dim() const noexcept { return w.cols(); }
};

/// (x / x_max)^alpha below x_max, 1 at and above it.
double glove_weight(double x, double x_max, double alpha);

/// f(x) * (w_i . wc_j + b_i + bc_j - ln x)^2. Throws DomainError for x <= 0.
double glove_loss(const GloveModel& model, const CoocRecord& rec, double x_max, double alpha);

struct GloveGradient {
  std::vector<double> d_w;  // wrt w_i
  std::vector<double> d_wc; // wrt wc_j
  double d_b = 0.0;
  double d_bc = 0.0;
};

GloveGradient glove_gradient(const GloveModel& model, const CoocRecord& rec, double x_max, double alpha);

/// One AdaGrad step on a single record; returns the loss before the step.
double glove_update(GloveModel& model, const CoocRecord& rec, const GloveConfig& config);

struct GloveTraining {
  GloveModel model;
  std::vector<double> epoch_loss; // mean per-record loss of each epoch
};

/// Throws IntegrityError on a vocabulary mismatch, TrainingError on an empty
/// store and DivergenceError when parameters stop being finite.
GloveTraining train_glove_model(const CooccurrenceStore& store, const Vocabulary& vocab,
                                const GloveConfig& config);

/// Final vectors are w + wc.
EmbeddingSet glove_embeddings(const GloveModel& model, const Vocabulary& vocab, const GloveConfig& config);

EmbeddingSet train_glove(const CooccurrenceStore& store, const Vocabulary& vocab, const GloveConfig& config,
                         std::vector<double>* epoch_loss = nullptr);

} // namespace wembed
