#include "wembed/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <thread>

#include "wembed/error.hpp"
#include "wembed/utf8.hpp"

namespace wembed {

Vocabulary::Vocabulary(std::vector<VocabEntry> entries, std::uint64_t total_tokens,
                       std::uint64_t min_count)
    : total_tokens_(total_tokens), min_count_(min_count) {
  entries.erase(std::remove_if(entries.begin(), entries.end(),
                               [&](const VocabEntry& e) { return e.count < min_count; }),
                entries.end());
  // std::string compares bytes as unsigned char, which for UTF-8 matches
  // code-point order.
  std::sort(entries.begin(), entries.end(), [](const VocabEntry& a, const VocabEntry& b) {
    return a.count != b.count ? a.count > b.count : a.word < b.word;
  });
  entries_ = std::move(entries);
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].word, static_cast<std::uint32_t>(i)).second)
      throw InputError("duplicate vocabulary word '" + entries_[i].word + "'");
  }
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Vocabulary::retained_tokens() const noexcept {
  std::uint64_t s = 0;
  for (const auto& e : entries_) s += e.count;
  return s;
}

std::uint64_t Vocabulary::hash() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& e : entries_) {
    mix(e.word);
    mix("\t");
    mix(std::to_string(e.count));
    mix("\n");
  }
  return h;
}

Vocabulary build_vocab(const CleanCorpus& corpus, std::uint64_t min_count, unsigned threads) {
  if (min_count < 1) throw UsageError("min_count must be at least 1");
  using Counts = std::unordered_map<std::string, std::uint64_t>;
  const std::size_t n = corpus.sentences.size();
  const unsigned shards = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::vector<Counts> local(shards);
  auto count_range = [&](unsigned shard) {
    const std::size_t lo = n * shard / shards, hi = n * (shard + 1) / shards;
    for (std::size_t i = lo; i < hi; ++i)
      for (const auto& tok : corpus.sentences[i]) ++local[shard][tok];
  };
  if (shards == 1) {
    count_range(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned s = 0; s < shards; ++s) pool.emplace_back(count_range, s);
    for (auto& t : pool) t.join();
  }
  Counts& merged = local[0];
  for (unsigned s = 1; s < shards; ++s)
    for (auto& [w, c] : local[s]) merged[w] += c;

  std::uint64_t total = 0;
  std::vector<VocabEntry> entries;
  entries.reserve(merged.size());
  for (auto& [w, c] : merged) {
    total += c;
    entries.push_back({w, c});
  }
  return Vocabulary(std::move(entries), total, min_count);
}

void save_vocab(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open file for writing");
  for (const auto& e : vocab.entries()) out << e.word << '\t' << e.count << '\n';
  if (!out) throw IoError(path, "write failed");
}

Vocabulary load_vocab(const std::string& path, std::uint64_t min_count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open vocabulary");
  std::vector<VocabEntry> entries;
  std::uint64_t total = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw ParseError(path, lineno, "expected word<TAB>count");
    std::uint64_t c = 0;
    try {
      std::size_t used = 0;
      c = std::stoull(line.substr(tab + 1), &used);
      if (used != line.size() - tab - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(path, lineno, "invalid count");
    }
    if (c == 0) throw ParseError(path, lineno, "count must be positive");
    total += c;
    entries.push_back({line.substr(0, tab), c});
  }
  try {
    return Vocabulary(std::move(entries), total, min_count);
  } catch (const InputError& e) {
    throw ParseError(path, lineno, e.what());
  }
}

double percent_of(std::uint64_t part, std::uint64_t total) {
  if (total == 0) return 0.0;
  return static_cast<double>(part) / static_cast<double>(total) * 100.0;
}

LetterNgramStats word_length_stats(const CleanCorpus& corpus) {
  std::map<std::size_t, std::uint64_t> hist;
  LetterNgramStats stats;
  for (const auto& s : corpus.sentences) {
    for (const auto& tok : s) {
      ++hist[utf8::length(tok)];
      ++stats.total;
    }
  }
  for (const auto& [len, freq] : hist) stats.rows.push_back({len, freq, percent_of(freq, stats.total)});
  return stats;
}

std::string format_length_stats(const LetterNgramStats& stats) {
  std::string out = "length\tfrequency\tpercent\n";
  char buf[64];
  for (const auto& r : stats.rows) {
    std::snprintf(buf, sizeof buf, "%zu\t%llu\t%.4f\n", r.length,
                  static_cast<unsigned long long>(r.frequency), r.percent);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "total\t%llu\t%.4f\n", static_cast<unsigned long long>(stats.total),
                stats.total ? 100.0 : 0.0);
  out += buf;
  return out;
}

void save_length_stats(const LetterNgramStats& stats, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open file for writing");
  out << format_length_stats(stats);
  if (!out) throw IoError(path, "write failed");
}

StopWordCandidates stopword_candidates(const Vocabulary& vocab, std::size_t top_n) {
  StopWordCandidates out;
  const double denom = static_cast<double>(vocab.retained_tokens());
  out.cut_n = std::min(top_n, vocab.size());
  out.ranked.reserve(out.cut_n);
  for (std::size_t i = 0; i < out.cut_n; ++i) {
    const auto& e = vocab[i];
    out.ranked.push_back({e.word, e.count, static_cast<double>(e.count) / denom});
  }
  return out;
}

std::string format_stopwords(const StopWordCandidates& c) {
  std::string out;
  char buf[64];
  for (const auto& r : c.ranked) {
    std::snprintf(buf, sizeof buf, "\t%llu\t%.6g\n", static_cast<unsigned long long>(r.count),
                  r.relative_frequency);
    out += r.word;
    out += buf;
  }
  return out;
}

double subsample_keep_prob(std::uint64_t word_count, std::uint64_t total_tokens, double t) {
  if (word_count == 0 || total_tokens < word_count || !(t > 0.0))
    throw DomainError("subsample_keep_prob requires 1 <= word_count <= total_tokens and t > 0");
  const double f = static_cast<double>(word_count) / static_cast<double>(total_tokens);
  return std::min(1.0, std::sqrt(t / f));
}

} // namespace wembed
