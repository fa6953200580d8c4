#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wembed/subword.hpp"

namespace wembed {

/// Row-major dense matrix of doubles.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool all_finite() const;
  bool operator==(const Matrix& o) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

struct EmbeddingMeta {
  std::string algorithm = "external"; // cbow, sg, glove or external
  std::uint32_t dim = 0;
  std::uint64_t vocab_hash = 0;
  bool has_subwords = false;
  SubwordConfig subword;
  std::map<std::string, std::string> hyper_parameters;
};

/// Trained vectors. The input matrix holds one row per vocabulary word
/// followed by one row per materialised subword bucket; buckets no word ever
/// touched are implicitly zero and not stored. `output` holds the training
/// objective's output parameters (inner-node vectors for hierarchical
/// softmax, context vectors for negative sampling, the context matrix for
/// GloVe) and may be empty for loaded vectors.
class EmbeddingSet {
public:
  EmbeddingSet() = default;
  EmbeddingSet(std::vector<std::string> words, std::vector<std::uint32_t> bucket_ids, Matrix input,
               Matrix output, EmbeddingMeta meta);

  std::size_t word_count() const noexcept { return words_.size(); }
  std::size_t dim() const noexcept { return input_.cols(); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::string& word(std::size_t id) const { return words_[id]; }
  std::optional<std::uint32_t> find(std::string_view word) const;

  const std::vector<std::uint32_t>& bucket_ids() const noexcept { return bucket_ids_; }
  /// Input-matrix row of a bucket, if materialised.
  std::optional<std::uint32_t> bucket_row(std::uint32_t bucket) const;

  const Matrix& input() const noexcept { return input_; }
  Matrix& input() noexcept { return input_; }
  const Matrix& output() const noexcept { return output_; }
  Matrix& output() noexcept { return output_; }
  const EmbeddingMeta& meta() const noexcept { return meta_; }
  EmbeddingMeta& meta() noexcept { return meta_; }

  /// Rows averaged into an in-vocabulary word's vector: its own row followed
  /// by the rows of its n-gram buckets (with repetition).
  std::vector<std::uint32_t> word_rows(std::uint32_t id) const;

private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::uint32_t> bucket_ids_;
  Matrix input_;
  Matrix output_;
  EmbeddingMeta meta_;
};

/// Mean of the given input-matrix rows written into out.
void mean_of_rows(const Matrix& m, std::span<const std::uint32_t> rows, std::span<double> out);

} // namespace wembed
