#include <fstream>
#include <sstream>

#include "wembed/error.hpp"
#include "wembed/pipeline.hpp"

namespace wembed {

std::string serialize_corpus(const CleanCorpus& corpus) {
  std::string out;
  for (const auto& s : corpus.sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out.push_back(' ');
      out += s[i];
    }
    out.push_back('\n');
  }
  return out;
}

std::string manifest_path(const std::string& corpus_path) { return corpus_path + ".manifest.tsv"; }

void save_corpus(const CleanCorpus& corpus, const std::string& path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path, "cannot open file for writing");
    for (const auto& s : corpus.sentences) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out.put(' ');
        out << s[i];
      }
      out.put('\n');
    }
    if (!out) throw IoError(path, "write failed");
  }
  const std::string mpath = manifest_path(path);
  std::ofstream m(mpath, std::ios::binary);
  if (!m) throw IoError(mpath, "cannot open file for writing");
  m << "path\tbytes\n";
  for (const auto& e : corpus.source_manifest) m << e.path << '\t' << e.bytes << '\n';
  if (!m) throw IoError(mpath, "write failed");
}

CleanCorpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open corpus");
  CleanCorpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Sentence s;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto sp = line.find(' ', pos);
      const auto end = sp == std::string::npos ? line.size() : sp;
      if (end > pos) s.emplace_back(line, pos, end - pos);
      pos = end + 1;
    }
    if (!s.empty()) {
      corpus.token_count += s.size();
      corpus.sentences.push_back(std::move(s));
    }
  }
  if (in.bad()) throw IoError(path, "read failed");
  std::uint64_t bytes = 0;
  {
    std::ifstream sz(path, std::ios::binary | std::ios::ate);
    bytes = static_cast<std::uint64_t>(sz.tellg());
  }
  corpus.source_manifest.push_back({path, bytes});
  return corpus;
}

} // namespace wembed
