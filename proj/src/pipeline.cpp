#include "wembed/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "wembed/error.hpp"
#include "wembed/utf8.hpp"

namespace wembed {

namespace fs = std::filesystem;

std::string to_string(NoisePattern p) {
  switch (p) {
  case NoisePattern::html_tag: return "html_tag";
  case NoisePattern::url: return "url";
  case NoisePattern::email: return "email";
  case NoisePattern::numeric: return "numeric";
  case NoisePattern::math_symbol: return "math_symbol";
  }
  return "?";
}

NoisePattern parse_noise_pattern(const std::string& name) {
  for (auto p : {NoisePattern::html_tag, NoisePattern::url, NoisePattern::email,
                 NoisePattern::numeric, NoisePattern::math_symbol}) {
    if (to_string(p) == name) return p;
  }
  throw UsageError("unknown noise pattern '" + name + "'");
}

std::set<char32_t> default_replacement_chars() {
  std::set<char32_t> s;
  for (char c : std::string_view("!\"#$%&'()*+,-/:;<=>@[\\]^_`{|}~")) s.insert(static_cast<char32_t>(c));
  for (char32_t c : {
           U'،', // arabic comma
           U'؛', // arabic semicolon
           U'٪', // arabic percent
           U'٫', U'٬', // arabic decimal / thousands separators
           U'؍', // arabic date separator
           U'«', U'»', U'‘', U'’', U'‚', U'“', U'”', U'„',
           U'‹', U'›', U'–', U'—', U'―', U'…', U'•', U'·',
           U'¡', U'¿', U'§', U'¶', U'°', U'﴾', U'﴿',
           U'‎', U'‏', U'﻿',
       }) {
    s.insert(c);
  }
  return s;
}

std::set<char32_t> default_boundary_chars() { return {U'.', U'?', U'۔', U'؟'}; }

bool is_digit_char(char32_t cp) {
  return (cp >= U'0' && cp <= U'9') || (cp >= 0x0660 && cp <= 0x0669) ||
         (cp >= 0x06F0 && cp <= 0x06F9);
}

bool is_math_symbol(char32_t cp) {
  switch (cp) {
  case U'+': case U'=': case U'<': case U'>': case U'^': case U'~': case U'|':
  case 0x00B1: case 0x00D7: case 0x00F7: case 0x00AC: case 0x2030:
    return true;
  default:
    return (cp >= 0x2200 && cp <= 0x22FF) || (cp >= 0x2A00 && cp <= 0x2AFF);
  }
}

bool is_latin_letter(char32_t cp) {
  if ((cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z')) return true;
  return cp >= 0x00C0 && cp <= 0x024F && cp != 0x00D7 && cp != 0x00F7;
}

char32_t fold_latin_case(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 32;
  // Latin Extended-A: upper/lower pairs alternate, with the parity flipping
  // in the 0x139..0x148 and 0x179..0x17E runs.
  if ((cp >= 0x0100 && cp <= 0x0137) || (cp >= 0x014A && cp <= 0x0177))
    return (cp % 2 == 0) ? cp + 1 : cp;
  if ((cp >= 0x0139 && cp <= 0x0148) || (cp >= 0x0179 && cp <= 0x017E))
    return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp == 0x0178) return 0x00FF;
  return cp;
}

void PipelineConfig::validate() const {
  for (char32_t c : replacement_chars) {
    if (boundary_chars.count(c))
      throw UsageError("character U+" + std::to_string(static_cast<unsigned>(c)) +
                       " is both a replacement and a boundary character");
    if (utf8::is_whitespace(c)) throw UsageError("replacement characters must not be whitespace");
  }
  for (char32_t c : boundary_chars)
    if (utf8::is_whitespace(c)) throw UsageError("boundary characters must not be whitespace");
}

PipelineConfig PipelineConfig::from_config(const KeyValueConfig& kv) {
  PipelineConfig cfg;
  auto char_set = [](const std::string& v) {
    const auto cps = utf8::decode(v);
    return std::set<char32_t>(cps.begin(), cps.end());
  };
  if (auto v = kv.get("replacement_chars")) cfg.replacement_chars = char_set(*v);
  if (auto v = kv.get("extra_replacement_chars")) {
    auto extra = char_set(*v);
    cfg.replacement_chars.insert(extra.begin(), extra.end());
  }
  if (auto v = kv.get("boundary_chars")) cfg.boundary_chars = char_set(*v);
  if (auto v = kv.get("noise_patterns")) {
    cfg.noise_patterns.clear();
    std::istringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item.erase(0, item.find_first_not_of(" \t"));
      item.erase(item.find_last_not_of(" \t") + 1);
      if (!item.empty()) cfg.noise_patterns.push_back(parse_noise_pattern(item));
    }
  }
  if (auto v = kv.get("lowercase")) cfg.lowercase = parse_bool(*v);
  if (auto v = kv.get("drop_latin_tokens")) cfg.drop_latin_tokens = parse_bool(*v);
  cfg.validate();
  return cfg;
}

namespace {

bool is_ascii_alpha(char32_t c) { return (c >= U'A' && c <= U'Z') || (c >= U'a' && c <= U'z'); }
bool is_ascii_alnum(char32_t c) { return is_ascii_alpha(c) || (c >= U'0' && c <= U'9'); }
bool is_hex(char32_t c) {
  return (c >= U'0' && c <= U'9') || (c >= U'a' && c <= U'f') || (c >= U'A' && c <= U'F');
}
char32_t ascii_lower(char32_t c) { return (c >= U'A' && c <= U'Z') ? c + 32 : c; }

// Each matcher returns the length of the match starting at `i`, or 0.

std::size_t match_html(std::u32string_view s, std::size_t i) {
  const std::size_t n = s.size();
  if (s[i] == U'<') {
    if (i + 1 >= n) return 0;
    const char32_t c = s[i + 1];
    if (!(is_ascii_alpha(c) || c == U'/' || c == U'!')) return 0;
    for (std::size_t k = i + 2; k < n; ++k) {
      if (s[k] == U'>') return k - i + 1;
      if (s[k] == U'<') return 0;
    }
    return 0;
  }
  if (s[i] == U'&') {
    std::size_t k = i + 1;
    if (k < n && is_ascii_alpha(s[k])) {
      while (k < n && is_ascii_alnum(s[k])) ++k;
      return (k < n && s[k] == U';') ? k - i + 1 : 0;
    }
    if (k < n && s[k] == U'#') {
      ++k;
      bool hex = false;
      if (k < n && (s[k] == U'x' || s[k] == U'X')) {
        hex = true;
        ++k;
      }
      const std::size_t start = k;
      while (k < n && (hex ? is_hex(s[k]) : (s[k] >= U'0' && s[k] <= U'9'))) ++k;
      if (k == start) return 0;
      return (k < n && s[k] == U';') ? k - i + 1 : 0;
    }
  }
  return 0;
}

bool prefix_icase(std::u32string_view s, std::size_t i, std::string_view p) {
  if (i + p.size() > s.size()) return false;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (ascii_lower(s[i + k]) != static_cast<char32_t>(p[k])) return false;
  return true;
}

std::size_t match_url(std::u32string_view s, std::size_t i) {
  std::size_t plen = 0;
  for (std::string_view p : {"https://", "http://", "ftp://", "www."}) {
    if (prefix_icase(s, i, p)) {
      plen = p.size();
      break;
    }
  }
  if (plen == 0) return 0;
  std::size_t k = i + plen;
  while (k < s.size() && !utf8::is_whitespace(s[k])) ++k;
  return k - i;
}

bool is_email_local(char32_t c) {
  return is_ascii_alnum(c) || c == U'.' || c == U'_' || c == U'%' || c == U'+' || c == U'-';
}
bool is_email_domain(char32_t c) { return is_ascii_alnum(c) || c == U'.' || c == U'-'; }

std::size_t match_email(std::u32string_view s, std::size_t i) {
  const std::size_t n = s.size();
  std::size_t k = i;
  while (k < n && is_email_local(s[k])) ++k;
  if (k == i || k >= n || s[k] != U'@') return 0;
  const std::size_t dstart = k + 1;
  std::size_t dend = dstart;
  while (dend < n && is_email_domain(s[dend])) ++dend;
  // Rightmost '.' inside the domain run (not its first char) that is followed
  // by at least two ASCII letters; the match ends after that letter run.
  for (std::size_t dot = dend; dot-- > dstart + 1;) {
    if (s[dot] != U'.') continue;
    std::size_t e = dot + 1;
    while (e < dend && is_ascii_alpha(s[e])) ++e;
    if (e - (dot + 1) >= 2) return e - i;
  }
  return 0;
}

using Matcher = std::size_t (*)(std::u32string_view, std::size_t);

std::u32string apply_matcher(std::u32string_view s, Matcher m) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t len = m(s, i);
    if (len > 0) {
      out.push_back(U' ');
      i += len;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

bool is_separator(char32_t c, const PipelineConfig& cfg) {
  return utf8::is_whitespace(c) || cfg.replacement_chars.count(c) || cfg.boundary_chars.count(c) ||
         is_math_symbol(c);
}

std::u32string strip_numeric(std::u32string_view s, const PipelineConfig& cfg) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (is_digit_char(s[i]) && (i == 0 || is_separator(s[i - 1], cfg))) {
      std::size_t k = i;
      while (k < s.size() && is_digit_char(s[k])) ++k;
      if (k == s.size() || is_separator(s[k], cfg)) {
        out.push_back(U' ');
        i = k;
        continue;
      }
      out.append(s.substr(i, k - i));
      i = k;
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

std::u32string strip_math(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (is_math_symbol(s[i])) {
      while (i < s.size() && is_math_symbol(s[i])) ++i;
      out.push_back(U' ');
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

} // namespace

std::u32string strip_noise(std::u32string_view text, const PipelineConfig& config) {
  std::u32string cur(text);
  for (NoisePattern p : config.noise_patterns) {
    switch (p) {
    case NoisePattern::html_tag: cur = apply_matcher(cur, match_html); break;
    case NoisePattern::url: cur = apply_matcher(cur, match_url); break;
    case NoisePattern::email: cur = apply_matcher(cur, match_email); break;
    case NoisePattern::numeric: cur = strip_numeric(cur, config); break;
    case NoisePattern::math_symbol: cur = strip_math(cur); break;
    }
  }
  return cur;
}

std::string strip_noise(std::string_view raw, const PipelineConfig& config) {
  return utf8::encode(strip_noise(std::u32string_view(utf8::decode(raw)), config));
}

std::u32string replace_symbols(std::u32string_view text, const PipelineConfig& config) {
  std::u32string out(text);
  for (char32_t& c : out)
    if (config.replacement_chars.count(c)) c = U' ';
  return out;
}

std::string replace_symbols(std::string_view text, const PipelineConfig& config) {
  return utf8::encode(replace_symbols(std::u32string_view(utf8::decode(text)), config));
}

std::vector<Sentence> tokenize(std::u32string_view text, const PipelineConfig& config) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::string token;
  auto flush_token = [&] {
    if (!token.empty()) {
      current.push_back(std::move(token));
      token.clear();
    }
  };
  auto flush_sentence = [&] {
    flush_token();
    if (!current.empty()) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  };
  for (char32_t c : text) {
    if (config.boundary_chars.count(c)) {
      flush_sentence();
    } else if (utf8::is_whitespace(c)) {
      flush_token();
    } else {
      utf8::append(token, c);
    }
  }
  flush_sentence();
  return sentences;
}

std::vector<Sentence> tokenize(std::string_view text, const PipelineConfig& config) {
  return tokenize(std::u32string_view(utf8::decode(text)), config);
}

void normalize(std::vector<Sentence>& sentences, const PipelineConfig& config) {
  if (!config.lowercase && !config.drop_latin_tokens) return;
  for (Sentence& s : sentences) {
    Sentence kept;
    kept.reserve(s.size());
    for (std::string& tok : s) {
      std::u32string cps = utf8::decode(tok);
      if (config.drop_latin_tokens && std::all_of(cps.begin(), cps.end(), is_latin_letter)) continue;
      if (config.lowercase) {
        bool changed = false;
        for (char32_t& c : cps) {
          const char32_t f = fold_latin_case(c);
          changed |= f != c;
          c = f;
        }
        if (changed) tok = utf8::encode(cps);
      }
      kept.push_back(std::move(tok));
    }
    s = std::move(kept);
  }
  sentences.erase(std::remove_if(sentences.begin(), sentences.end(),
                                 [](const Sentence& s) { return s.empty(); }),
                  sentences.end());
}

std::vector<Sentence> process_text(std::string_view raw, const PipelineConfig& config) {
  const std::u32string decoded = utf8::decode(raw);
  std::u32string text = strip_noise(std::u32string_view(decoded), config);
  text = replace_symbols(std::u32string_view(text), config);
  auto sentences = tokenize(std::u32string_view(text), config);
  normalize(sentences, config);
  return sentences;
}

std::vector<std::string> collect_input_files(const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<std::string> found;
      for (fs::recursive_directory_iterator it(p, ec), end; !ec && it != end; it.increment(ec)) {
        if (it->is_regular_file()) found.push_back(it->path().string());
      }
      if (ec) throw IoError(p, ec.message());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open file for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(path, "read failed");
  return ss.str();
}

} // namespace

CleanCorpus run_pipeline(const std::vector<std::string>& inputs, const PipelineConfig& config,
                         unsigned threads) {
  config.validate();
  const std::vector<std::string> paths = collect_input_files(inputs);
  const std::size_t n = paths.size();
  std::vector<std::vector<Sentence>> per_file(n);
  std::vector<std::uint64_t> sizes(n, 0);
  std::vector<std::exception_ptr> errors(n);

  auto work = [&](std::size_t i) {
    try {
      const std::string raw = read_file(paths[i]);
      sizes[i] = raw.size();
      try {
        per_file[i] = process_text(raw, config);
      } catch (const DecodeError& e) {
        throw InputError(paths[i] + ": " + e.what());
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const unsigned nthreads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      work(i);
      if (errors[i]) std::rethrow_exception(errors[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) work(i);
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  CleanCorpus corpus;
  for (std::size_t i = 0; i < n; ++i) {
    corpus.source_manifest.push_back({paths[i], sizes[i]});
    for (auto& s : per_file[i]) {
      corpus.token_count += s.size();
      corpus.sentences.push_back(std::move(s));
    }
  }
  return corpus;
}

} // namespace wembed
