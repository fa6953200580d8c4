#include "wembed/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "wembed/error.hpp"

namespace wembed {

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

EmbeddingSet::EmbeddingSet(std::vector<std::string> words, std::vector<std::uint32_t> bucket_ids,
                           Matrix input, Matrix output, EmbeddingMeta meta)
    : words_(std::move(words)), bucket_ids_(std::move(bucket_ids)), input_(std::move(input)),
      output_(std::move(output)), meta_(std::move(meta)) {
  if (input_.rows() != words_.size() + bucket_ids_.size())
    throw InputError("input matrix row count does not match words plus buckets");
  if (!std::is_sorted(bucket_ids_.begin(), bucket_ids_.end()) ||
      std::adjacent_find(bucket_ids_.begin(), bucket_ids_.end()) != bucket_ids_.end())
    throw InputError("bucket ids must be strictly increasing");
  meta_.dim = static_cast<std::uint32_t>(input_.cols());
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (!index_.emplace(words_[i], static_cast<std::uint32_t>(i)).second)
      throw InputError("duplicate word '" + words_[i] + "'");
}

std::optional<std::uint32_t> EmbeddingSet::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> EmbeddingSet::bucket_row(std::uint32_t bucket) const {
  auto it = std::lower_bound(bucket_ids_.begin(), bucket_ids_.end(), bucket);
  if (it == bucket_ids_.end() || *it != bucket) return std::nullopt;
  return static_cast<std::uint32_t>(words_.size() + (it - bucket_ids_.begin()));
}

std::vector<std::uint32_t> EmbeddingSet::word_rows(std::uint32_t id) const {
  std::vector<std::uint32_t> rows{id};
  if (!meta_.has_subwords) return rows;
  for (std::uint32_t b : vocab_word_buckets(words_[id], meta_.subword)) {
    auto r = bucket_row(b);
    if (!r) throw IntegrityError("bucket of in-vocabulary word '" + words_[id] + "' is not materialised");
    rows.push_back(*r);
  }
  return rows;
}

void mean_of_rows(const Matrix& m, std::span<const std::uint32_t> rows, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::uint32_t r : rows) axpy(1.0, m.row(r), out);
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (double& v : out) v *= inv;
}

} // namespace wembed
