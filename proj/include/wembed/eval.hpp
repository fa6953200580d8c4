#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wembed/embedding.hpp"

namespace wembed {

/// u.v / (|u||v|) clamped to [-1, 1]. Throws DomainError for a zero vector
/// or mismatched dimensions.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

/// Vector used for similarity queries. In-vocabulary words are composed
/// exactly as in training; with subwords an unknown word is the mean of its
/// n-gram rows (buckets never trained count as zero rows). Throws
/// NotFoundError when the word cannot be represented.
std::vector<double> word_vector(const EmbeddingSet& emb, const std::string& word);

struct Neighbor {
  std::string word;
  double cosine = 0.0;
};

/// Exact cosine search over the vocabulary with composed, unit-normalised
/// vectors precomputed once.
class NeighborIndex {
public:
  explicit NeighborIndex(const EmbeddingSet& emb);

  /// Top-k by cosine, descending, ties by vocabulary id; the query word
  /// itself is excluded.
  std::vector<Neighbor> query(const std::string& word, std::size_t k) const;
  std::vector<Neighbor> query(std::span<const double> vec, std::size_t k,
                              std::optional<std::uint32_t> exclude = std::nullopt) const;

private:
  const EmbeddingSet* emb_;
  Matrix unit_;
  std::vector<bool> valid_;
};

std::vector<Neighbor> nearest_neighbors(const EmbeddingSet& emb, const std::string& query, std::size_t k);

struct WordPair {
  std::string a;
  std::string b;
  double gold = 0.0;
};

struct WordSimDataset {
  std::string name;
  std::vector<WordPair> pairs;
};

/// "word_a<TAB>word_b<TAB>score" lines; '#' comments and blank lines are
/// skipped. Duplicate unordered pairs and non-finite scores are ParseErrors.
WordSimDataset load_wordsim(const std::string& path);
/// Pair lists without scores ("word_a<TAB>word_b") are accepted as well;
/// missing scores are 0.
std::vector<WordPair> load_pairs(const std::string& path);

struct PairRow {
  std::string a;
  std::string b;
  double cosine = 0.0;
};

struct EvalOptions {
  /// Compose vectors for out-of-vocabulary words from subwords instead of
  /// excluding their pairs.
  bool compose_oov = false;
};

struct EvalReport {
  std::map<std::string, std::vector<Neighbor>> neighbors;
  std::vector<PairRow> pair_rows;
  double pair_average = 0.0;
  double spearman_rho = 0.0;
  std::vector<std::string> oov_words;
};

/// Cosine per pair and their arithmetic mean. Pairs with an unresolvable
/// member are dropped and the member recorded in oov_words. Throws InputError
/// for an empty list and NotFoundError when every pair is dropped.
EvalReport pair_similarity_report(const EmbeddingSet& emb, std::span<const WordPair> pairs,
                                  const EvalOptions& options = {});

/// Spearman rank correlation: Pearson correlation of average ranks.
/// Throws DomainError for length mismatch, fewer than 2 items or constant input.
double spearman_rho(std::span<const double> gold, std::span<const double> predicted);

/// Average (1-based) ranks with ties sharing the mean rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Pair report plus Spearman rho between gold scores and cosines of the
/// pairs that survived OOV filtering.
EvalReport evaluate_wordsim(const EmbeddingSet& emb, const WordSimDataset& data, const EvalOptions& options = {});

std::string format_neighbors(const std::string& query, const std::vector<Neighbor>& ns);
std::string format_pair_report(const EvalReport& report);

} // namespace wembed
