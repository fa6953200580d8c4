#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <string>
#include <vector>

#include "wembed/pipeline.hpp"
#include "wembed/rng.hpp"
#include "wembed/vocab.hpp"

namespace fixtures {

namespace fs = std::filesystem;

// Scratch directory removed on destruction.
class TempDir {
public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "wembed-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const fs::path& path() const { return path_; }

private:
  fs::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Small documents exercising every cleaning stage.
inline const std::vector<std::string>& pipeline_documents() {
  static const std::vector<std::string> docs = {
      "سنڌي ٻولي دنيا جي قديم ٻولين مان هڪ آهي۔ ڪراچي پاڪستان جو وڏو شهر آهي.",
      "<p>سنڌي <b>ٻولي</b></p> &amp; ڪتاب&nbsp;پڙهي &#1587; رهيو<br/>\n<!-- تبصرو --> <div class=\"x\">شهر</div>",
      "ڏسو https://example.com/path?q=1&r=2 ۽ www.sindhi.org/page ۽ FTP://files.net/x پوءِ HTTP://A.B/ڪتاب ختم",
      "رابطو info@sindhila.edu.pk يا a.b+c@mail.example.co.uk تي ڪريو. x@y.z غلط آهي.",
      "سال 2020 ۾ ١٢٣ ماڻهو ۽ ۴۵۶ ڪتاب، 3.14 ۽ x2 ۽ 2x ۽ ڪتاب2 ۽ 12:30 ۽ 12/05/2020 ۽ 10% ۽ ٩٠٪",
      "a+b=c ۽ ٻه × ٽي ÷ هڪ ∑∀ ≤ ≥ ⨀ ڪ ± ¬ ‰ ~^| 5+6 ١+٢",
      "Sindhi سنڌي English انگريزي Ünïcödé Café ٻولي ABC۔ naïve ŁÓDŹ",
      "ڇا توهان ٺيڪ آهيو؟ ها، مان ٺيڪ آهيان؛ مهرباني! ڇو? ڇاڪاڻ ته...",
      "«سنڌ» ”ٻولي“ ‘ڪتاب’ (ڪتاب) [شهر] {رهيو} ﴾قرآن﴿ — – • … ٫ ٬ ٭",
      "سنڌي\tٻولي\nدنيا جي  قديم　ٻولين\r\nمان\v\f\xC2\x85آهي",
      "<div></div> https://x.y 123 ... ?? ؟۔",
      "...سنڌ؟؟؟ ٻولي۔۔ . ? ڪتاب.شهر?رهيو",
      "&amp ڪتاب &#x62A; &#XZZ; &unknown; & ; < ڪ > <> &#; &a1b2;",
      "\xEF\xBB\xBFسنڌي\xE2\x80\x8Fٻولي\xE2\x80\x8E جي",
      "mail:abc@def.ghi.j , x@y.co. ٻولي user@host.c0m ڪتاب a@b.cde.f.gh",
      "http://سنڌي.pk/ڪتاب رهيو www. ٻيو wwwx شهر ftp:/ ڪ https:",
      "ڪتاب2 3ڪتاب ١٢٣٤ ۱۲۳ 2020سال ١٢ab 7",
      "سنڌيABC ÀÉÎ ĀĒĪ ŸŽ Ÿ ZZZسنڌ ÆØ ßẞ",
      "<سنڌي> <<ٻولي>> a<b ٻ> <1> </ ڪ> < a>",
      "سنڌ جي تاريخ بابت <i>ڪتاب</i> ۾ لکيل آهي ته موهن جو دڙو 4500 سال پراڻو آهي۔ "
      "وڌيڪ معلومات لاءِ https://sindhi.example/موهن ڏسو يا archive@library.org.pk تي لکو. "
      "ڇا اهو سچ آهي؟ ها! ١٩٤٧ ۾ ورهاڱو ٿيو؛ پوءِ ڪراچي راڄڌاني بڻي. "
      "Mohenjo-daro ۽ Indus ٻه لفظ انگريزي ۾ آهن، پر «سنڌو» سنڌي ۾. x=y+1 ۽ 3×4=12 "
      "&quot;اقتباس&quot; ۽ &#1575; ۽ www.sindh.gov.pk/page?id=7 ختم۔",
  };
  return docs;
}

// Characters favoured by the random pipeline property test.
inline const std::vector<std::string>& pipeline_alphabet() {
  static const std::vector<std::string> chars = {
      "<", ">", "a", "B", "@", ".", "h", "t", "p", "s", ":", "/", "w", "W", "f", "1", "9", "١", "۳",
      " ", "\n", "&", ";", "#", "x", "+", "=", "×", "؟", "۔", "?", "س", "ن", "ڪ", "،", "-", "%",
      "!", "\"", "À", "é", "o", "m", "c",
  };
  return chars;
}

inline std::string random_document(wembed::Rng& rng, std::size_t max_chars) {
  const auto& alpha = pipeline_alphabet();
  std::string out;
  const auto n = rng.below(max_chars + 1);
  for (std::size_t i = 0; i < n; ++i) out += alpha[rng.below(alpha.size())];
  return out;
}

// Two topics whose words are spelled with disjoint letter sets; a sentence
// only ever uses words from one topic. Sentences hold 20-24 tokens: with much
// shorter ones the per-pair co-occurrence counts are small enough that GloVe
// (50 dimensions for 50 words per topic) ends up fitting their sampling noise.
struct TwoTopicCorpus {
  wembed::CleanCorpus corpus;
  std::vector<std::string> topic_a;
  std::vector<std::string> topic_b;
};

inline std::vector<std::string> topic_words(const std::vector<std::string>& letters, std::size_t n,
                                            wembed::Rng& rng) {
  std::set<std::string> seen;
  std::vector<std::string> words;
  while (words.size() < n) {
    const auto len = 3 + rng.below(3);
    std::string w;
    for (std::size_t k = 0; k < len; ++k) w += letters[rng.below(letters.size())];
    if (seen.insert(w).second) words.push_back(w);
  }
  return words;
}

inline TwoTopicCorpus two_topic_corpus(std::size_t sentences = 2000, std::size_t words_per_topic = 50,
                                       std::uint64_t seed = 7) {
  wembed::Rng rng(seed);
  TwoTopicCorpus t;
  t.topic_a = topic_words({"ا", "ب", "ت", "ث", "ج", "ح", "خ", "د"}, words_per_topic, rng);
  t.topic_b = topic_words({"ر", "ز", "س", "ش", "ص", "ض", "ط", "ظ"}, words_per_topic, rng);
  for (std::size_t s = 0; s < sentences; ++s) {
    const auto& topic = s % 2 == 0 ? t.topic_a : t.topic_b;
    wembed::Sentence sent;
    const auto len = 20 + rng.below(5);
    for (std::size_t k = 0; k < len; ++k) sent.push_back(topic[rng.below(topic.size())]);
    t.corpus.token_count += sent.size();
    t.corpus.sentences.push_back(std::move(sent));
  }
  return t;
}

// Random corpus over a small id-like alphabet of words.
inline wembed::CleanCorpus random_corpus(wembed::Rng& rng, std::size_t max_tokens, std::size_t vocab_size) {
  wembed::CleanCorpus c;
  std::size_t budget = 1 + rng.below(max_tokens);
  while (budget > 0) {
    const std::size_t len = std::min<std::size_t>(budget, 1 + rng.below(15));
    wembed::Sentence s;
    for (std::size_t k = 0; k < len; ++k) s.push_back("w" + std::to_string(rng.below(vocab_size)));
    budget -= len;
    c.token_count += len;
    c.sentences.push_back(std::move(s));
  }
  return c;
}

} // namespace fixtures
