#include "wembed/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>

#include "wembed/error.hpp"

namespace wembed {

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DomainError("cosine of vectors with different dimensions");
  const double nu = std::sqrt(dot(u, u));
  const double nv = std::sqrt(dot(v, v));
  if (nu == 0.0 || nv == 0.0) throw DomainError("cosine similarity is undefined for a zero vector");
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

std::vector<double> word_vector(const EmbeddingSet& emb, const std::string& word) {
  if (word.empty()) throw NotFoundError("empty query word");
  std::vector<double> out(emb.dim(), 0.0);
  if (auto id = emb.find(word)) {
    mean_of_rows(emb.input(), emb.word_rows(*id), out);
    return out;
  }
  if (!emb.meta().has_subwords) throw NotFoundError("'" + word + "' is not in the vocabulary");
  std::vector<std::uint32_t> buckets;
  try {
    buckets = word_buckets(word, emb.meta().subword);
  } catch (const InputError&) {
    throw NotFoundError("'" + word + "' cannot be split into subwords");
  }
  if (buckets.empty()) throw NotFoundError("'" + word + "' produces no subwords");
  bool any = false;
  for (std::uint32_t b : buckets) {
    if (auto r = emb.bucket_row(b)) {
      axpy(1.0, emb.input().row(*r), out);
      any = true;
    }
  }
  if (!any) throw NotFoundError("none of the subwords of '" + word + "' were seen in training");
  const double inv = 1.0 / static_cast<double>(buckets.size());
  for (double& v : out) v *= inv;
  return out;
}

NeighborIndex::NeighborIndex(const EmbeddingSet& emb)
    : emb_(&emb), unit_(emb.word_count(), emb.dim()), valid_(emb.word_count(), false) {
  for (std::uint32_t id = 0; id < emb.word_count(); ++id) {
    auto row = unit_.row(id);
    mean_of_rows(emb.input(), emb.word_rows(id), row);
    const double norm = std::sqrt(dot(row, row));
    if (norm > 0.0 && std::isfinite(norm)) {
      for (double& v : row) v /= norm;
      valid_[id] = true;
    }
  }
}

std::vector<Neighbor> NeighborIndex::query(std::span<const double> vec, std::size_t k,
                                           std::optional<std::uint32_t> exclude) const {
  if (k < 1) throw UsageError("k must be at least 1");
  const double norm = std::sqrt(dot(vec, vec));
  if (norm == 0.0) throw DomainError("cosine similarity is undefined for a zero vector");
  std::vector<std::pair<double, std::uint32_t>> scored;
  scored.reserve(emb_->word_count());
  for (std::uint32_t id = 0; id < emb_->word_count(); ++id) {
    if (!valid_[id] || (exclude && *exclude == id)) continue;
    scored.emplace_back(std::clamp(dot(unit_.row(id), vec) / norm, -1.0, 1.0), id);
  }
  const std::size_t take = std::min(k, scored.size());
  auto better = [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), better);
  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({emb_->word(scored[i].second), scored[i].first});
  return out;
}

std::vector<Neighbor> NeighborIndex::query(const std::string& word, std::size_t k) const {
  const auto vec = word_vector(*emb_, word);
  return query(vec, k, emb_->find(word));
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingSet& emb, const std::string& query, std::size_t k) {
  return NeighborIndex(emb).query(query, k);
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> f;
  std::size_t pos = 0;
  for (;;) {
    const auto tab = line.find('\t', pos);
    f.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
    if (tab == std::string::npos) break;
    pos = tab + 1;
  }
  return f;
}

std::vector<WordPair> read_pairs(const std::string& path, bool require_score) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open pair file");
  std::vector<WordPair> pairs;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_tabs(line);
    if (f.size() < 2 || f.size() > 3 || (require_score && f.size() != 3))
      throw ParseError(path, lineno, require_score ? "expected word_a<TAB>word_b<TAB>score" : "expected word_a<TAB>word_b");
    if (f[0].empty() || f[1].empty()) throw ParseError(path, lineno, "empty word");
    WordPair p{f[0], f[1], 0.0};
    if (f.size() == 3) {
      try {
        std::size_t used = 0;
        p.gold = std::stod(f[2], &used);
        if (used != f[2].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(path, lineno, "invalid score '" + f[2] + "'");
      }
      if (!std::isfinite(p.gold)) throw ParseError(path, lineno, "score is not finite");
    }
    auto key = std::minmax(p.a, p.b);
    if (!seen.emplace(key.first, key.second).second)
      throw ParseError(path, lineno, "duplicate pair " + p.a + " / " + p.b);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::optional<std::vector<double>> resolve(const EmbeddingSet& emb, const std::string& word, bool compose_oov) {
  if (!compose_oov && !emb.find(word)) return std::nullopt;
  try {
    auto v = word_vector(emb, word);
    if (dot(v, v) == 0.0) return std::nullopt;
    return v;
  } catch (const NotFoundError&) {
    return std::nullopt;
  }
}

} // namespace

WordSimDataset load_wordsim(const std::string& path) { return {path, read_pairs(path, true)}; }

std::vector<WordPair> load_pairs(const std::string& path) { return read_pairs(path, false); }

namespace {

// Returns the indices of pairs kept in the report.
std::vector<std::size_t> fill_pair_report(const EmbeddingSet& emb, std::span<const WordPair> pairs,
                                          const EvalOptions& options, EvalReport& report) {
  if (pairs.empty()) throw InputError("no word pairs to evaluate");
  std::vector<std::size_t> kept;
  std::set<std::string> oov;
  double sum = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& p = pairs[k];
    const auto va = resolve(emb, p.a, options.compose_oov);
    const auto vb = resolve(emb, p.b, options.compose_oov);
    if (!va) oov.insert(p.a);
    if (!vb) oov.insert(p.b);
    if (!va || !vb) continue;
    const double c = cosine_similarity(*va, *vb);
    report.pair_rows.push_back({p.a, p.b, c});
    sum += c;
    kept.push_back(k);
  }
  report.oov_words.assign(oov.begin(), oov.end());
  if (kept.empty()) throw NotFoundError("every pair has an out-of-vocabulary word");
  report.pair_average = sum / static_cast<double>(kept.size());
  return kept;
}

} // namespace

EvalReport pair_similarity_report(const EmbeddingSet& emb, std::span<const WordPair> pairs,
                                  const EvalOptions& options) {
  EvalReport report;
  fill_pair_report(emb, pairs, options, report);
  return report;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(std::span<const double> gold, std::span<const double> predicted) {
  if (gold.size() != predicted.size()) throw DomainError("spearman_rho inputs differ in length");
  if (gold.size() < 2) throw DomainError("spearman_rho needs at least two items");
  const auto rx = average_ranks(gold);
  const auto ry = average_ranks(predicted);
  const double n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    const double dx = rx[k] - mean, dy = ry[k] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DomainError("spearman_rho is undefined for constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

EvalReport evaluate_wordsim(const EmbeddingSet& emb, const WordSimDataset& data, const EvalOptions& options) {
  EvalReport report;
  const auto kept = fill_pair_report(emb, data.pairs, options, report);
  std::vector<double> gold, pred;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    gold.push_back(data.pairs[kept[k]].gold);
    pred.push_back(report.pair_rows[k].cosine);
  }
  report.spearman_rho = spearman_rho(gold, pred);
  return report;
}

std::string format_neighbors(const std::string& query, const std::vector<Neighbor>& ns) {
  std::string out;
  char buf[64];
  for (std::size_t r = 0; r < ns.size(); ++r) {
    std::snprintf(buf, sizeof buf, "\t%zu\t", r + 1);
    out += query + buf + ns[r].word;
    std::snprintf(buf, sizeof buf, "\t%.6f\n", ns[r].cosine);
    out += buf;
  }
  return out;
}

std::string format_pair_report(const EvalReport& report) {
  std::string out;
  char buf[64];
  for (const auto& r : report.pair_rows) {
    std::snprintf(buf, sizeof buf, "\t%.6f\n", r.cosine);
    out += r.a + "\t" + r.b + buf;
  }
  std::snprintf(buf, sizeof buf, "average\t%.6f\n", report.pair_average);
  out += buf;
  for (const auto& w : report.oov_words) out += "oov\t" + w + "\n";
  return out;
}

} // namespace wembed
