#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wembed/kvconfig.hpp"

namespace wembed {

enum class NoisePattern { html_tag, url, email, numeric, math_symbol };

std::string to_string(NoisePattern p);
NoisePattern parse_noise_pattern(const std::string& name);

std::set<char32_t> default_replacement_chars();
/// '.', '?', ARABIC FULL STOP (U+06D4), ARABIC QUESTION MARK (U+061F).
std::set<char32_t> default_boundary_chars();

bool is_digit_char(char32_t cp);
bool is_math_symbol(char32_t cp);
bool is_latin_letter(char32_t cp);
char32_t fold_latin_case(char32_t cp);

struct PipelineConfig {
  std::set<char32_t> replacement_chars = default_replacement_chars();
  std::set<char32_t> boundary_chars = default_boundary_chars();
  std::vector<NoisePattern> noise_patterns = {NoisePattern::html_tag, NoisePattern::url,
                                              NoisePattern::email, NoisePattern::numeric,
                                              NoisePattern::math_symbol};
  bool lowercase = true;
  bool drop_latin_tokens = true;

  /// Throws UsageError when the replacement and boundary sets overlap or
  /// either contains whitespace.
  void validate() const;

  /// Recognised keys: replacement_chars, extra_replacement_chars,
  /// boundary_chars (each a UTF-8 string of characters), noise_patterns
  /// (comma-separated names), lowercase, drop_latin_tokens.
  static PipelineConfig from_config(const KeyValueConfig& kv);
};

using Sentence = std::vector<std::string>;

struct SourceEntry {
  std::string path;
  std::uint64_t bytes = 0;
};

struct CleanCorpus {
  std::vector<Sentence> sentences;
  std::uint64_t token_count = 0;
  std::vector<SourceEntry> source_manifest;
};

/// Removes noise spans in the configured order; each removed span becomes a
/// single space. Throws DecodeError on malformed UTF-8.
std::string strip_noise(std::string_view raw, const PipelineConfig& config);
std::u32string strip_noise(std::u32string_view text, const PipelineConfig& config);

std::string replace_symbols(std::string_view text, const PipelineConfig& config);
std::u32string replace_symbols(std::u32string_view text, const PipelineConfig& config);

std::vector<Sentence> tokenize(std::string_view text, const PipelineConfig& config);
std::vector<Sentence> tokenize(std::u32string_view text, const PipelineConfig& config);

/// Case folding and Latin-token filtering applied in place; sentences left
/// empty are removed.
void normalize(std::vector<Sentence>& sentences, const PipelineConfig& config);

/// All stages on one in-memory document.
std::vector<Sentence> process_text(std::string_view raw, const PipelineConfig& config);

/// Expands directories (recursively, sorted by path) and keeps plain file
/// arguments in the order given.
std::vector<std::string> collect_input_files(const std::vector<std::string>& paths);

/// Runs the full pipeline over files and directories (expanded as by
/// collect_input_files). Files may be processed concurrently;
/// the result is identical for every thread count.
CleanCorpus run_pipeline(const std::vector<std::string>& paths, const PipelineConfig& config,
                         unsigned threads = 1);

/// One sentence per line, tokens separated by a single space, LF endings.
std::string serialize_corpus(const CleanCorpus& corpus);
void save_corpus(const CleanCorpus& corpus, const std::string& path);
/// Manifest sidecar written next to a saved corpus.
std::string manifest_path(const std::string& corpus_path);
CleanCorpus load_corpus(const std::string& path);

} // namespace wembed
