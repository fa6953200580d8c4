#pragma once

// Random small models and finite-difference comparisons shared by the unit
// and acceptance suites.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wembed/glove.hpp"
#include "wembed/huffman.hpp"
#include "wembed/w2v.hpp"

namespace gradcheck {

struct Toy {
  wembed::Vocabulary vocab;
  wembed::EmbeddingSet model;
  wembed::HuffmanTree tree;
};

// Random vocabulary of short words with subwords hashed into few buckets, so
// bucket collisions and repeated rows occur.
inline Toy random_toy(wembed::Rng& rng, wembed::W2vMode mode, std::size_t words, std::uint32_t dim) {
  static const std::vector<std::string> letters = {"س", "ن", "ڌ", "ي", "ب", "ت"};
  std::vector<wembed::VocabEntry> entries;
  std::set<std::string> seen;
  while (entries.size() < words) {
    std::string w;
    for (std::size_t k = 0, n = 1 + rng.below(4); k < n; ++k) w += letters[rng.below(letters.size())];
    if (seen.insert(w).second) entries.push_back({w, 1 + rng.below(100)});
  }
  std::uint64_t total = 0;
  for (const auto& e : entries) total += e.count;
  Toy t;
  t.vocab = wembed::Vocabulary(entries, total, 1);
  wembed::W2vConfig cfg;
  cfg.mode = mode;
  cfg.dim = dim;
  cfg.minn = 1 + static_cast<int>(rng.below(2));
  cfg.maxn = cfg.minn + static_cast<int>(rng.below(3));
  cfg.n_buckets = static_cast<std::uint32_t>(1 + rng.below(40));
  cfg.seed = rng.next();
  t.model = wembed::init_w2v_model(t.vocab, cfg);
  for (auto* m : {&t.model.input(), &t.model.output()})
    for (auto& x : m->data()) x = rng.uniform() - 0.5;
  t.tree = wembed::build_huffman(t.vocab);
  return t;
}

struct ErrorAccumulator {
  double diff = 0.0, analytic = 0.0, numeric = 0.0;
  void add(double a, double n) {
    diff += (a - n) * (a - n);
    analytic += a * a;
    numeric += n * n;
  }
  double relative() const {
    return std::sqrt(diff) / std::max({std::sqrt(analytic), std::sqrt(numeric), 1e-12});
  }
};

// Relative L2 error of a sparse analytic gradient against central
// differences over every parameter of the given rows. Infinite when the
// analytic gradient is malformed or touches rows outside those sets.
inline double sparse_gradient_error(wembed::EmbeddingSet& model, const wembed::SparseGradient& g,
                                    const std::set<std::uint32_t>& in_rows,
                                    const std::set<std::uint32_t>& out_rows, const std::function<double()>& f) {
  constexpr double bad = std::numeric_limits<double>::infinity();
  std::map<std::pair<int, std::uint32_t>, const std::vector<double>*> grads;
  for (const auto& [row, v] : g.input)
    if (!in_rows.count(row) || !grads.emplace(std::make_pair(0, row), &v).second) return bad;
  for (const auto& [row, v] : g.output)
    if (!out_rows.count(row) || !grads.emplace(std::make_pair(1, row), &v).second) return bad;

  ErrorAccumulator acc;
  auto visit = [&](int side, std::uint32_t row) {
    wembed::Matrix& m = side == 0 ? model.input() : model.output();
    auto it = grads.find({side, row});
    if (it != grads.end() && it->second->size() != m.cols()) return false;
    for (std::size_t k = 0; k < m.cols(); ++k) {
      const double a = it == grads.end() ? 0.0 : (*it->second)[k];
      acc.add(a, oracle::central_difference(f, m.at(row, k)));
    }
    return true;
  };
  for (auto r : in_rows)
    if (!visit(0, r)) return bad;
  for (auto r : out_rows)
    if (!visit(1, r)) return bad;
  return acc.relative();
}

inline double ns_trial(wembed::Rng& rng) {
  const auto dim = static_cast<std::uint32_t>(1 + rng.below(8));
  auto toy = random_toy(rng, wembed::W2vMode::sg, 2 + rng.below(19), dim);
  const auto n = static_cast<std::uint32_t>(toy.vocab.size());
  const auto rows = toy.model.word_rows(static_cast<std::uint32_t>(rng.below(n)));
  const auto target = static_cast<std::uint32_t>(rng.below(n));
  std::vector<std::uint32_t> negs;
  for (std::size_t k = 0, m = rng.below(6); k < m; ++k) negs.push_back(static_cast<std::uint32_t>(rng.below(n)));
  const auto g = wembed::ns_gradient(toy.model, rows, target, negs);
  std::set<std::uint32_t> in(rows.begin(), rows.end()), out(negs.begin(), negs.end());
  out.insert(target);
  return sparse_gradient_error(toy.model, g, in, out,
                               [&] { return wembed::ns_objective(toy.model, rows, target, negs); });
}

inline double hs_trial(wembed::Rng& rng) {
  const auto dim = static_cast<std::uint32_t>(1 + rng.below(8));
  auto toy = random_toy(rng, wembed::W2vMode::cbow, 2 + rng.below(19), dim);
  const auto n = static_cast<std::uint32_t>(toy.vocab.size());
  std::vector<std::vector<std::uint32_t>> ctx;
  std::set<std::uint32_t> in;
  for (std::size_t k = 0, m = 1 + rng.below(4); k < m; ++k) {
    ctx.push_back(toy.model.word_rows(static_cast<std::uint32_t>(rng.below(n))));
    in.insert(ctx.back().begin(), ctx.back().end());
  }
  const auto center = static_cast<std::uint32_t>(rng.below(n));
  std::set<std::uint32_t> out(toy.tree.paths[center].begin(), toy.tree.paths[center].end());
  const auto g = wembed::hs_gradient(toy.model, toy.tree, ctx, center);
  return sparse_gradient_error(toy.model, g, in, out,
                               [&] { return wembed::hs_objective(toy.model, toy.tree, ctx, center); });
}

inline wembed::GloveModel random_glove(std::size_t words, std::uint32_t dim, wembed::Rng& rng) {
  auto m = wembed::GloveModel::init(words, dim, rng.next());
  for (auto* mat : {&m.w, &m.wc})
    for (auto& x : mat->data()) x = rng.uniform() - 0.5;
  for (auto* vec : {&m.b, &m.bc})
    for (auto& x : *vec) x = rng.uniform() - 0.5;
  return m;
}

inline double glove_trial(wembed::Rng& rng) {
  const std::size_t words = 2 + rng.below(19);
  const auto dim = static_cast<std::uint32_t>(1 + rng.below(8));
  auto m = random_glove(words, dim, rng);
  const wembed::CoocRecord rec{static_cast<std::uint32_t>(rng.below(words)),
                               static_cast<std::uint32_t>(rng.below(words)), 0.1 + 150 * rng.uniform()};
  const auto g = wembed::glove_gradient(m, rec, 100, 0.75);
  if (g.d_w.size() != dim || g.d_wc.size() != dim) return std::numeric_limits<double>::infinity();
  auto f = [&] { return wembed::glove_loss(m, rec, 100, 0.75); };
  ErrorAccumulator acc;
  for (std::uint32_t k = 0; k < dim; ++k) {
    acc.add(g.d_w[k], oracle::central_difference(f, m.w.at(rec.i, k)));
    acc.add(g.d_wc[k], oracle::central_difference(f, m.wc.at(rec.j, k)));
  }
  acc.add(g.d_b, oracle::central_difference(f, m.b[rec.i]));
  acc.add(g.d_bc, oracle::central_difference(f, m.bc[rec.j]));
  return acc.relative();
}

} // namespace gradcheck
