#include "wembed/embio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "binio.hpp"
#include "wembed/error.hpp"
#include "wembed/eval.hpp"
#include "wembed/utf8.hpp"

namespace wembed {

namespace {

bool representable(const std::string& word) {
  if (word.empty()) return false;
  for (char32_t c : utf8::decode(word))
    if (utf8::is_whitespace(c)) return false;
  return true;
}

bool parse_double(std::string_view s, double& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> f;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    f.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return f;
}

} // namespace

std::string checkpoint_path(const std::string& text_path) { return text_path + ".emb"; }

void save_text(const EmbeddingSet& emb, const std::string& path, bool write_sidecar) {
  for (const auto& w : emb.words())
    if (!representable(w)) throw InputError("word '" + w + "' cannot be written in the text format");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open file for writing");
  out << emb.word_count() << ' ' << emb.dim() << '\n';
  char buf[32];
  for (std::size_t id = 0; id < emb.word_count(); ++id) {
    out << emb.word(id);
    for (double v : emb.input().row(id)) {
      std::snprintf(buf, sizeof buf, " %.6g", v);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError(path, "write failed");
  out.close();
  if (write_sidecar) save_checkpoint(emb, checkpoint_path(path));
}

EmbeddingSet load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open embedding file");
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(path, lineno, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_spaces(line);
  std::size_t n = 0, dim = 0;
  auto parse_size = [](std::string_view s, std::size_t& v) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && p == s.data() + s.size();
  };
  if (header.size() != 2 || !parse_size(header[0], n) || !parse_size(header[1], dim) || dim == 0)
    throw ParseError(path, lineno, "expected header '<words> <dim>'");

  std::vector<std::string> words;
  words.reserve(n);
  Matrix m(n, dim);
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto f = split_spaces(line);
    if (f.empty()) continue;
    if (words.size() == n) throw ParseError(path, lineno, "more rows than the header's " + std::to_string(n));
    if (f.size() != dim + 1)
      throw ParseError(path, lineno, "expected " + std::to_string(dim) + " values, got " + std::to_string(f.size() - 1));
    std::string w(f[0]);
    if (!seen.insert(w).second) throw ParseError(path, lineno, "duplicate word '" + w + "'");
    auto row = m.row(words.size());
    for (std::size_t k = 0; k < dim; ++k)
      if (!parse_double(f[k + 1], row[k]) || !std::isfinite(row[k]))
        throw ParseError(path, lineno, "invalid number '" + std::string(f[k + 1]) + "'");
    words.push_back(std::move(w));
  }
  if (words.size() != n)
    throw ParseError(path, lineno + 1, "header promises " + std::to_string(n) + " rows, file ends after " +
                                       std::to_string(words.size()));
  EmbeddingMeta meta;
  meta.algorithm = "external";
  meta.has_subwords = false;
  meta.subword.n_buckets = 0;
  return EmbeddingSet(std::move(words), {}, std::move(m), Matrix(), std::move(meta));
}

namespace {

constexpr char kMagic[] = "EMB1";
constexpr std::uint32_t kVersion = 1;

void put_matrix(std::ostream& out, const Matrix& m) {
  binio::put<std::uint64_t>(out, m.rows());
  binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
  for (double v : m.data()) binio::put<float>(out, static_cast<float>(v));
}

Matrix get_matrix(std::istream& in, const std::string& path) {
  const auto rows = binio::get<std::uint64_t>(in, path);
  const auto cols = binio::get<std::uint32_t>(in, path);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = binio::get<float>(in, path);
  return m;
}

} // namespace

void save_checkpoint(const EmbeddingSet& emb, const std::string& path) {
  const auto& meta = emb.meta();
  nlohmann::json j = {
      {"algorithm", meta.algorithm},
      {"dim", emb.dim()},
      {"vocab_hash", meta.vocab_hash},
      {"has_subwords", meta.has_subwords},
      {"minn", meta.subword.minn},
      {"maxn", meta.subword.maxn},
      {"n_buckets", meta.subword.n_buckets},
      {"bow_marker", static_cast<std::uint32_t>(meta.subword.bow_marker)},
      {"eow_marker", static_cast<std::uint32_t>(meta.subword.eow_marker)},
      {"hyper_parameters", meta.hyper_parameters},
  };
  const std::string js = j.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open file for writing");
  out.write(kMagic, 4);
  binio::put<std::uint32_t>(out, kVersion);
  binio::put<std::uint64_t>(out, js.size());
  out.write(js.data(), static_cast<std::streamsize>(js.size()));
  binio::put<std::uint64_t>(out, emb.word_count());
  for (const auto& w : emb.words()) {
    binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(w.size()));
    out.write(w.data(), static_cast<std::streamsize>(w.size()));
  }
  binio::put<std::uint64_t>(out, emb.bucket_ids().size());
  for (std::uint32_t b : emb.bucket_ids()) binio::put<std::uint32_t>(out, b);
  put_matrix(out, emb.input());
  put_matrix(out, emb.output());
  if (!out) throw IoError(path, "write failed");
}

EmbeddingSet load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open checkpoint");
  binio::expect_magic(in, kMagic, path);
  if (binio::get<std::uint32_t>(in, path) != kVersion) throw IoError(path, "unsupported checkpoint version");
  const auto js_len = binio::get<std::uint64_t>(in, path);
  std::string js(js_len, '\0');
  if (!in.read(js.data(), static_cast<std::streamsize>(js_len))) throw IoError(path, "truncated metadata");
  EmbeddingMeta meta;
  try {
    const auto j = nlohmann::json::parse(js);
    meta.algorithm = j.at("algorithm").get<std::string>();
    meta.vocab_hash = j.at("vocab_hash").get<std::uint64_t>();
    meta.has_subwords = j.at("has_subwords").get<bool>();
    meta.subword.minn = j.at("minn").get<int>();
    meta.subword.maxn = j.at("maxn").get<int>();
    meta.subword.n_buckets = j.at("n_buckets").get<std::uint32_t>();
    meta.subword.bow_marker = static_cast<char32_t>(j.at("bow_marker").get<std::uint32_t>());
    meta.subword.eow_marker = static_cast<char32_t>(j.at("eow_marker").get<std::uint32_t>());
    meta.hyper_parameters = j.at("hyper_parameters").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path, std::string("bad checkpoint metadata: ") + e.what());
  }
  const auto n_words = binio::get<std::uint64_t>(in, path);
  std::vector<std::string> words(n_words);
  for (auto& w : words) {
    w.resize(binio::get<std::uint32_t>(in, path));
    if (!in.read(w.data(), static_cast<std::streamsize>(w.size()))) throw IoError(path, "truncated word list");
  }
  std::vector<std::uint32_t> buckets(binio::get<std::uint64_t>(in, path));
  for (auto& b : buckets) b = binio::get<std::uint32_t>(in, path);
  Matrix input = get_matrix(in, path);
  Matrix output = get_matrix(in, path);
  try {
    return EmbeddingSet(std::move(words), std::move(buckets), std::move(input), std::move(output), std::move(meta));
  } catch (const InputError& e) {
    throw IoError(path, e.what());
  }
}

EmbeddingSet load_embeddings(const std::string& text_path) {
  const std::string ckpt = checkpoint_path(text_path);
  if (std::filesystem::exists(ckpt)) return load_checkpoint(ckpt);
  return load_text(text_path);
}

ExportReport export_tsv(const EmbeddingSet& emb, const std::vector<std::string>& words, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open file for writing");
  out << "word";
  for (std::size_t k = 0; k < emb.dim(); ++k) out << "\td" << k;
  out << '\n';
  ExportReport report;
  std::set<std::string> done;
  char buf[40];
  for (const auto& w : words) {
    if (!done.insert(w).second) {
      report.duplicates.push_back(w);
      continue;
    }
    std::vector<double> v;
    try {
      v = word_vector(emb, w);
    } catch (const NotFoundError&) {
      report.skipped.push_back(w);
      continue;
    }
    if (w.find('\t') != std::string::npos || w.find('\n') != std::string::npos) {
      report.skipped.push_back(w);
      continue;
    }
    out << w;
    for (double x : v) {
      std::snprintf(buf, sizeof buf, "\t%.17g", x);
      out << buf;
    }
    out << '\n';
    ++report.exported;
  }
  if (!out) throw IoError(path, "write failed");
  return report;
}

std::pair<std::vector<std::string>, Matrix> read_tsv_export(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open TSV export");
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(path, lineno, "missing header");
  std::size_t dim = 0;
  for (char c : line) dim += c == '\t';
  std::vector<std::string> words;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (;;) {
      const auto tab = rest.find('\t');
      f.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (f.size() != dim + 1) throw ParseError(path, lineno, "wrong number of columns");
    words.emplace_back(f[0]);
    for (std::size_t k = 1; k < f.size(); ++k) {
      double v;
      if (!parse_double(f[k], v)) throw ParseError(path, lineno, "invalid number");
      values.push_back(v);
    }
  }
  Matrix m(words.size(), dim);
  m.data() = std::move(values);
  return {std::move(words), std::move(m)};
}

} // namespace wembed
