#include "wembed/cooccur.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <queue>
#include <thread>
#include <unordered_map>

#include "binio.hpp"
#include "wembed/error.hpp"
#include "wembed/rng.hpp"

namespace wembed {

namespace {

using Key = std::uint64_t;
using Run = std::vector<std::pair<Key, double>>;

Key make_key(std::uint32_t i, std::uint32_t j) { return (static_cast<Key>(i) << 32) | j; }

bool record_less(const CoocRecord& a, const CoocRecord& b) {
  return a.i != b.i ? a.i < b.i : a.j < b.j;
}

Run accumulate_chunk(const CleanCorpus& corpus, const Vocabulary& vocab, std::uint32_t ws,
                     std::size_t lo, std::size_t hi) {
  std::unordered_map<Key, double> local;
  std::vector<std::uint32_t> ids;
  for (std::size_t s = lo; s < hi; ++s) {
    ids.clear();
    for (const auto& tok : corpus.sentences[s])
      if (auto id = vocab.find(tok)) ids.push_back(*id);
    for (std::size_t p = 0; p < ids.size(); ++p) {
      const std::size_t end = std::min(ids.size(), p + ws + 1);
      for (std::size_t q = p + 1; q < end; ++q) {
        const double w = 1.0 / static_cast<double>(q - p);
        local[make_key(ids[p], ids[q])] += w;
        local[make_key(ids[q], ids[p])] += w;
      }
    }
  }
  Run run(local.begin(), local.end());
  std::sort(run.begin(), run.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return run;
}

// Merges runs; equal keys are summed in run order.
Run merge_runs(std::vector<Run>& runs) {
  if (runs.size() == 1) return std::move(runs.front());
  using Head = std::pair<Key, std::size_t>; // (key, run index)
  std::priority_queue<Head, std::vector<Head>, std::greater<>> heap;
  std::vector<std::size_t> pos(runs.size(), 0);
  std::size_t total = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    total += runs[r].size();
    if (!runs[r].empty()) heap.push({runs[r][0].first, r});
  }
  Run out;
  out.reserve(total);
  while (!heap.empty()) {
    const auto [key, r] = heap.top();
    heap.pop();
    const double x = runs[r][pos[r]].second;
    if (!out.empty() && out.back().first == key)
      out.back().second += x;
    else
      out.emplace_back(key, x);
    if (++pos[r] < runs[r].size()) heap.push({runs[r][pos[r]].first, r});
  }
  runs.clear();
  return out;
}

} // namespace

CooccurrenceStore::CooccurrenceStore(std::vector<CoocRecord> records, std::uint32_t ws,
                                     std::uint64_t vocab_hash)
    : records_(std::move(records)), ws_(ws), vocab_hash_(vocab_hash) {
  if (!std::is_sorted(records_.begin(), records_.end(), record_less))
    std::sort(records_.begin(), records_.end(), record_less);
}

double CooccurrenceStore::weight(std::uint32_t i, std::uint32_t j) const {
  const CoocRecord probe{i, j, 0.0};
  auto it = std::lower_bound(records_.begin(), records_.end(), probe, record_less);
  if (it == records_.end() || it->i != i || it->j != j) return 0.0;
  return it->x;
}

double CooccurrenceStore::total_weight() const {
  double s = 0.0;
  for (const auto& r : records_) s += r.x;
  return s;
}

void CooccurrenceStore::check_vocab(const Vocabulary& vocab) const {
  if (vocab.hash() != vocab_hash_)
    throw IntegrityError("co-occurrence store was built from a different vocabulary");
  for (const auto& r : records_)
    if (r.i >= vocab.size() || r.j >= vocab.size())
      throw IntegrityError("co-occurrence record refers to a word id outside the vocabulary");
}

CooccurrenceStore accumulate_cooccurrence(const CleanCorpus& corpus, const Vocabulary& vocab,
                                          std::uint32_t ws, const CooccurOptions& options) {
  if (ws < 1) throw UsageError("window size must be at least 1");
  const std::size_t n = corpus.sentences.size();
  const std::size_t chunk = std::max<std::size_t>(1, options.chunk_sentences);
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  const unsigned threads = std::max(1u, options.threads);

  std::vector<Run> pending;
  std::size_t pending_records = 0;
  for (std::size_t wave = 0; wave < n_chunks; wave += threads) {
    const std::size_t wave_end = std::min(n_chunks, wave + threads);
    std::vector<Run> runs(wave_end - wave);
    auto job = [&](std::size_t c) {
      runs[c - wave] = accumulate_chunk(corpus, vocab, ws, c * chunk, std::min(n, (c + 1) * chunk));
    };
    if (runs.size() == 1) {
      job(wave);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t c = wave; c < wave_end; ++c) pool.emplace_back(job, c);
      for (auto& t : pool) t.join();
    }
    for (auto& r : runs) {
      pending_records += r.size();
      pending.push_back(std::move(r));
    }
    // Always merge the whole prefix so the per-key summation order stays the
    // chunk order no matter when merges happen.
    if (pending_records > options.merge_threshold && pending.size() > 1) {
      Run merged = merge_runs(pending);
      pending_records = merged.size();
      pending.push_back(std::move(merged));
    }
  }

  std::vector<CoocRecord> records;
  if (!pending.empty()) {
    Run merged = merge_runs(pending);
    records.reserve(merged.size());
    for (const auto& [key, x] : merged)
      records.push_back({static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key), x});
  }
  return CooccurrenceStore(std::move(records), ws, vocab.hash());
}

ShuffledStream::ShuffledStream(const CooccurrenceStore& store, std::uint64_t seed)
    : store_(&store), order_(store.size()) {
  for (std::size_t k = 0; k < order_.size(); ++k) order_[k] = k;
  Rng rng(seed);
  for (std::size_t k = order_.size(); k > 1; --k) std::swap(order_[k - 1], order_[rng.below(k)]);
}

bool ShuffledStream::next(CoocRecord& out) {
  if (pos_ >= order_.size()) return false;
  out = store_->records()[order_[pos_++]];
  return true;
}

ShuffledStream iter_shuffled(const CooccurrenceStore& store, std::uint64_t seed) {
  return ShuffledStream(store, seed);
}

namespace {

constexpr char kMagic[] = "COOC1";
constexpr std::size_t kHeaderBytes = 5 + 8 + 4 + 8;
constexpr std::size_t kRecordBytes = 4 + 4 + 8;

void write_range(const CooccurrenceStore& store, std::size_t lo, std::size_t hi, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open file for writing");
  out.write(kMagic, 5);
  binio::put<std::uint64_t>(out, store.vocab_hash());
  binio::put<std::uint32_t>(out, store.window());
  binio::put<std::uint64_t>(out, hi - lo);
  for (std::size_t k = lo; k < hi; ++k) {
    const auto& r = store.records()[k];
    binio::put<std::uint32_t>(out, r.i);
    binio::put<std::uint32_t>(out, r.j);
    binio::put<double>(out, r.x);
  }
  if (!out) throw IoError(path, "write failed");
}

struct ShardContents {
  std::uint64_t vocab_hash;
  std::uint32_t ws;
};

ShardContents read_into(const std::string& path, std::vector<CoocRecord>& records) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open co-occurrence file");
  binio::expect_magic(in, kMagic, path);
  ShardContents c{};
  c.vocab_hash = binio::get<std::uint64_t>(in, path);
  c.ws = binio::get<std::uint32_t>(in, path);
  const auto count = binio::get<std::uint64_t>(in, path);
  records.reserve(records.size() + count);
  for (std::uint64_t k = 0; k < count; ++k) {
    CoocRecord r;
    r.i = binio::get<std::uint32_t>(in, path);
    r.j = binio::get<std::uint32_t>(in, path);
    r.x = binio::get<double>(in, path);
    records.push_back(r);
  }
  return c;
}

} // namespace

void save_cooccurrence(const CooccurrenceStore& store, const std::string& path) {
  write_range(store, 0, store.size(), path);
}

CooccurrenceStore load_cooccurrence(const std::string& path) {
  std::vector<CoocRecord> records;
  const auto c = read_into(path, records);
  return CooccurrenceStore(std::move(records), c.ws, c.vocab_hash);
}

std::string shard_path(const std::string& prefix, std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, ".%05zu", index);
  return prefix + buf + ".cooc";
}

std::vector<std::string> write_shards(const CooccurrenceStore& store, const std::string& prefix,
                                      std::size_t shard_bytes) {
  const std::size_t per_shard = std::max<std::size_t>(1, (shard_bytes - std::min(shard_bytes, kHeaderBytes)) / kRecordBytes);
  std::vector<std::string> paths;
  std::size_t lo = 0;
  do {
    const std::size_t hi = std::min(store.size(), lo + per_shard);
    paths.push_back(shard_path(prefix, paths.size()));
    write_range(store, lo, hi, paths.back());
    lo = hi;
  } while (lo < store.size());
  return paths;
}

CooccurrenceStore read_shards(const std::string& prefix) {
  std::vector<CoocRecord> records;
  std::optional<ShardContents> first;
  std::size_t index = 0;
  for (;; ++index) {
    const std::string path = shard_path(prefix, index);
    if (!std::filesystem::exists(path)) break;
    const auto c = read_into(path, records);
    if (!first) {
      first = c;
    } else if (c.vocab_hash != first->vocab_hash || c.ws != first->ws) {
      throw IntegrityError(path + ": shard header disagrees with " + shard_path(prefix, 0));
    }
  }
  if (!first) throw IoError(shard_path(prefix, 0), "no co-occurrence shards found");
  return CooccurrenceStore(std::move(records), first->ws, first->vocab_hash);
}

} // namespace wembed
