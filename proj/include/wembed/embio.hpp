#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wembed/embedding.hpp"

namespace wembed {

/// word2vec text format: "<words> <dim>" then one "word v1 ... vdim" line
/// per word with 6 significant digits. Subword rows and metadata go to the
/// binary sidecar checkpoint_path(path). Throws InputError for a word the
/// format cannot represent (empty or containing whitespace).
void save_text(const EmbeddingSet& emb, const std::string& path, bool write_sidecar = true);

/// Reads the text format as a words-only set. Throws ParseError (with line
/// number) on header/row-count mismatch, bad numbers, wrong arity or a
/// duplicate word.
EmbeddingSet load_text(const std::string& path);

std::string checkpoint_path(const std::string& text_path);

/// Binary checkpoint: magic "EMB1", u32 version, JSON metadata, the word
/// list, bucket ids and both matrices as little-endian f32.
void save_checkpoint(const EmbeddingSet& emb, const std::string& path);
EmbeddingSet load_checkpoint(const std::string& path);

/// The checkpoint next to a text file when present, else the text file alone.
EmbeddingSet load_embeddings(const std::string& text_path);

struct ExportReport {
  std::size_t exported = 0;
  std::vector<std::string> skipped;    // words without a vector
  std::vector<std::string> duplicates; // repeated requests, written once
};

/// "word<TAB>v1<TAB>...<TAB>vdim" rows after a header line, full precision.
ExportReport export_tsv(const EmbeddingSet& emb, const std::vector<std::string>& words, const std::string& path);

/// Reads an export_tsv file back as (words, matrix).
std::pair<std::vector<std::string>, Matrix> read_tsv_export(const std::string& path);

} // namespace wembed
