#include "doctest.h"

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wembed/error.hpp"
#include "wembed/pipeline.hpp"

using namespace wembed;

namespace {

std::vector<Sentence> S(std::initializer_list<std::initializer_list<const char*>> ss) {
  std::vector<Sentence> out;
  for (auto s : ss) {
    Sentence sent;
    for (auto t : s) sent.emplace_back(t);
    out.push_back(sent);
  }
  return out;
}

} // namespace

TEST_CASE("strip_noise removes markup and links") {
  PipelineConfig cfg;
  CHECK(strip_noise("", cfg) == "");
  CHECK(strip_noise("ab <b>x</b> cd", cfg) == "ab  x  cd");
  CHECK(strip_noise("see http://a.b/c now", cfg) == "see   now");
  CHECK(strip_noise("x&amp;y", cfg) == "x y");
  CHECK(strip_noise("mail a.b@c.org now", cfg) == "mail   now");
  CHECK(strip_noise("a 123 b", cfg) == "a   b");
  CHECK(strip_noise("ab12 cd", cfg) == "ab12 cd");
  CHECK(strip_noise("a+b", cfg) == "a b");
}

TEST_CASE("strip_noise reports the offset of malformed UTF-8") {
  PipelineConfig cfg;
  try {
    strip_noise(std::string("ab\xC3(", 4), cfg);
    FAIL("expected DecodeError");
  } catch (const DecodeError& e) {
    CHECK(e.offset() == 3);
  }
}

TEST_CASE("replace_symbols") {
  PipelineConfig cfg;
  CHECK(replace_symbols("a,b;c", cfg) == "a b c");
  CHECK(replace_symbols("a.b?c", cfg) == "a.b?c");
  CHECK(replace_symbols("a!!!b", cfg) == "a   b");
  CHECK(replace_symbols("ها، مان؛", cfg) == "ها  مان ");
}

TEST_CASE("tokenize splits sentences at boundary characters") {
  PipelineConfig cfg;
  CHECK(tokenize("ab cd. ef?", cfg) == S({{"ab", "cd"}, {"ef"}}));
  CHECK(tokenize("   ", cfg).empty());
  CHECK(tokenize("x", cfg) == S({{"x"}}));
  CHECK(tokenize("ڇا؟ ها۔ نه", cfg) == S({{"ڇا"}, {"ها"}, {"نه"}}));
  CHECK(tokenize("a　b", cfg) == S({{"a", "b"}}));
}

TEST_CASE("normalize drops Latin tokens and folds case") {
  PipelineConfig cfg;
  CHECK(process_text("Hello دنيا.", cfg) == S({{"دنيا"}}));
  cfg.drop_latin_tokens = false;
  CHECK(process_text("Hello دنيا.", cfg) == S({{"hello", "دنيا"}}));
  CHECK(process_text("ÀÉ ŸŽ", cfg) == S({{"àé", "ÿž"}}));
  cfg.lowercase = false;
  CHECK(process_text("Hello", cfg) == S({{"Hello"}}));
}

TEST_CASE("process_text matches the reference pipeline on crafted documents") {
  PipelineConfig cfg;
  for (const auto& doc : fixtures::pipeline_documents()) {
    CAPTURE(doc);
    CHECK(process_text(doc, cfg) == oracle::reference_pipeline(doc, cfg));
  }
}

TEST_CASE("process_text matches the reference pipeline on random documents") {
  Rng rng(42);
  PipelineConfig cfg;
  PipelineConfig keep = cfg;
  keep.drop_latin_tokens = false;
  keep.lowercase = false;
  for (int k = 0; k < 1500; ++k) {
    const auto doc = fixtures::random_document(rng, 60);
    const auto& c = k % 2 ? cfg : keep;
    CAPTURE(doc);
    REQUIRE(process_text(doc, c) == oracle::reference_pipeline(doc, c));
  }
}

TEST_CASE("noise patterns are honoured in configured order") {
  PipelineConfig cfg;
  cfg.noise_patterns = {NoisePattern::numeric};
  CHECK(strip_noise("<b>x12</b> 34", cfg) == "<b>x12</b>  ");
  cfg.noise_patterns = {};
  CHECK(strip_noise("http://x.y", cfg) == "http://x.y");
  for (auto p : {NoisePattern::html_tag, NoisePattern::url, NoisePattern::email, NoisePattern::numeric,
                 NoisePattern::math_symbol})
    CHECK(parse_noise_pattern(to_string(p)) == p);
  CHECK_THROWS_AS(parse_noise_pattern("nope"), UsageError);
}

TEST_CASE("cleaning an already clean sentence changes nothing") {
  PipelineConfig cfg;
  for (const auto& doc : fixtures::pipeline_documents()) {
    for (const auto& sent : process_text(doc, cfg)) {
      std::string line;
      for (const auto& t : sent) line += (line.empty() ? "" : " ") + t;
      CHECK(process_text(line, cfg) == std::vector<Sentence>{sent});
    }
  }
}

TEST_CASE("config validation and key-value loading") {
  PipelineConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.replacement_chars.insert(U'.');
  CHECK_THROWS_AS(cfg.validate(), UsageError);

  auto kv = KeyValueConfig::parse("noise-patterns = url, html_tag\nlowercase = false\n", "test");
  auto loaded = PipelineConfig::from_config(kv);
  CHECK(loaded.noise_patterns == std::vector<NoisePattern>{NoisePattern::url, NoisePattern::html_tag});
  CHECK_FALSE(loaded.lowercase);
  CHECK(loaded.drop_latin_tokens);
}

TEST_CASE("run_pipeline over files") {
  fixtures::TempDir dir;
  std::filesystem::create_directories(dir.path() / "raw" / "sub");
  fixtures::write_file(dir.file("raw/b.txt"), "ٻيو. ٽيون؟");
  fixtures::write_file(dir.file("raw/a.txt"), "Hello دنيا.");
  fixtures::write_file(dir.file("raw/sub/c.txt"), fixtures::pipeline_documents()[19]);
  PipelineConfig cfg;

  SUBCASE("directories expand recursively in path order") {
    auto files = collect_input_files({dir.file("raw")});
    REQUIRE(files.size() == 3);
    CHECK(files[0] == dir.file("raw/a.txt"));
    CHECK(files[2] == dir.file("raw/sub/c.txt"));
  }
  SUBCASE("result independent of thread count") {
    auto one = run_pipeline({dir.file("raw")}, cfg, 1);
    auto many = run_pipeline({dir.file("raw")}, cfg, 3);
    CHECK(serialize_corpus(one) == serialize_corpus(many));
    CHECK(one.sentences.front() == Sentence{"دنيا"});
    CHECK(one.source_manifest.size() == 3);
    CHECK(one.source_manifest[0].bytes == 15);
    std::uint64_t tokens = 0;
    for (const auto& s : one.sentences) tokens += s.size();
    CHECK(one.token_count == tokens);
  }
  SUBCASE("zero files") {
    auto c = run_pipeline({}, cfg, 1);
    CHECK(c.sentences.empty());
    CHECK(c.token_count == 0);
  }
  SUBCASE("missing file aborts naming the path") {
    try {
      run_pipeline({dir.file("raw/a.txt"), dir.file("missing.txt")}, cfg, 1);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("missing.txt") != std::string::npos);
    }
  }
  SUBCASE("malformed file is an input error naming the path") {
    fixtures::write_file(dir.file("bad.txt"), "ok \xFF");
    try {
      run_pipeline({dir.file("bad.txt")}, cfg, 1);
      FAIL("expected InputError");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("bad.txt") != std::string::npos);
    }
  }
  SUBCASE("save and load roundtrip with manifest") {
    auto c = run_pipeline({dir.file("raw")}, cfg, 1);
    save_corpus(c, dir.file("corpus.txt"));
    auto back = load_corpus(dir.file("corpus.txt"));
    CHECK(back.sentences == c.sentences);
    CHECK(back.token_count == c.token_count);
    auto manifest = fixtures::read_file(manifest_path(dir.file("corpus.txt")));
    CHECK(manifest.rfind("path\tbytes\n", 0) == 0);
    CHECK(manifest.find("a.txt\t15\n") != std::string::npos);
  }
}
