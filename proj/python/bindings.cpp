#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wembed/cooccur.hpp"
#include "wembed/embio.hpp"
#include "wembed/error.hpp"
#include "wembed/eval.hpp"
#include "wembed/glove.hpp"
#include "wembed/pipeline.hpp"
#include "wembed/subword.hpp"
#include "wembed/vocab.hpp"
#include "wembed/w2v.hpp"

namespace py = pybind11;
using namespace wembed;

namespace {

py::array_t<double> to_numpy(const Matrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

CleanCorpus corpus_from(std::vector<Sentence> sentences) {
  CleanCorpus c;
  for (const auto& s : sentences) c.token_count += s.size();
  c.sentences = std::move(sentences);
  return c;
}

W2vMode parse_mode(const std::string& mode) {
  if (mode == "sg") return W2vMode::sg;
  if (mode == "cbow") return W2vMode::cbow;
  throw UsageError("mode must be 'sg' or 'cbow', got '" + mode + "'");
}

} // namespace

PYBIND11_MODULE(_wembed, m) {
  m.doc() = "Word embeddings for low-resource corpora: preprocessing, CBoW/skip-gram/GloVe training, evaluation";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", error);
  py::register_exception<IoError>(m, "IoError", error);
  py::register_exception<DecodeError>(m, "DecodeError", error);
  py::register_exception<ParseError>(m, "ParseError", error);
  py::register_exception<InputError>(m, "InputError", error);
  py::register_exception<DomainError>(m, "DomainError", error);
  py::register_exception<NotFoundError>(m, "NotFoundError", error);
  py::register_exception<IntegrityError>(m, "IntegrityError", error);
  py::register_exception<TrainingError>(m, "TrainingError", error);
  py::register_exception<DivergenceError>(m, "DivergenceError", error);
  py::register_exception<StructureError>(m, "StructureError", error);

  // ---- preprocessing
  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("lowercase", &PipelineConfig::lowercase)
      .def_readwrite("drop_latin_tokens", &PipelineConfig::drop_latin_tokens)
      .def_property(
          "noise_patterns",
          [](const PipelineConfig& c) {
            std::vector<std::string> names;
            for (auto p : c.noise_patterns) names.push_back(to_string(p));
            return names;
          },
          [](PipelineConfig& c, const std::vector<std::string>& names) {
            c.noise_patterns.clear();
            for (const auto& n : names) c.noise_patterns.push_back(parse_noise_pattern(n));
          })
      .def_static("from_file", [](const std::string& path) {
        return PipelineConfig::from_config(KeyValueConfig::load(path));
      });

  py::class_<CleanCorpus>(m, "CleanCorpus")
      .def(py::init(&corpus_from), py::arg("sentences"))
      .def_readonly("sentences", &CleanCorpus::sentences)
      .def_readonly("token_count", &CleanCorpus::token_count)
      .def_property_readonly("sources",
                             [](const CleanCorpus& c) {
                               std::vector<std::pair<std::string, std::uint64_t>> out;
                               for (const auto& s : c.source_manifest) out.emplace_back(s.path, s.bytes);
                               return out;
                             })
      .def("__len__", [](const CleanCorpus& c) { return c.sentences.size(); });

  m.def("process_text", &process_text, py::arg("text"), py::arg("config") = PipelineConfig{},
        "Clean one document into sentences of tokens.");
  m.def("run_pipeline", &run_pipeline, py::arg("paths"), py::arg("config") = PipelineConfig{},
        py::arg("threads") = 1u, py::call_guard<py::gil_scoped_release>());
  m.def("save_corpus", &save_corpus, py::arg("corpus"), py::arg("path"));
  m.def("load_corpus", &load_corpus, py::arg("path"));

  // ---- vocabulary
  py::class_<Vocabulary>(m, "Vocabulary")
      .def("__len__", &Vocabulary::size)
      .def("__contains__", [](const Vocabulary& v, const std::string& w) { return v.find(w).has_value(); })
      .def("find", &Vocabulary::find)
      .def("word", [](const Vocabulary& v, std::size_t id) { return v.word(id); })
      .def("count", [](const Vocabulary& v, std::size_t id) { return v.count(id); })
      .def_property_readonly("words",
                             [](const Vocabulary& v) {
                               std::vector<std::pair<std::string, std::uint64_t>> out;
                               for (const auto& e : v.entries()) out.emplace_back(e.word, e.count);
                               return out;
                             })
      .def_property_readonly("total_tokens", &Vocabulary::total_tokens)
      .def_property_readonly("hash", &Vocabulary::hash);
  m.def("build_vocab", &build_vocab, py::arg("corpus"), py::arg("min_count") = 5, py::arg("threads") = 1u);
  m.def("save_vocab", &save_vocab, py::arg("vocab"), py::arg("path"));
  m.def("load_vocab", &load_vocab, py::arg("path"), py::arg("min_count") = 1);
  m.def(
      "word_length_stats",
      [](const CleanCorpus& c) {
        std::vector<std::tuple<std::size_t, std::uint64_t, double>> rows;
        for (const auto& r : word_length_stats(c).rows) rows.emplace_back(r.length, r.frequency, r.percent);
        return rows;
      },
      py::arg("corpus"), "(length, frequency, percent) rows for token lengths in code points.");
  m.def("percent_of", &percent_of, py::arg("part"), py::arg("total"));
  m.def(
      "stopword_candidates",
      [](const Vocabulary& v, std::size_t top) {
        std::vector<std::tuple<std::string, std::uint64_t, double>> out;
        for (const auto& c : stopword_candidates(v, top).ranked) out.emplace_back(c.word, c.count, c.relative_frequency);
        return out;
      },
      py::arg("vocab"), py::arg("top") = 500);
  m.def("subsample_keep_prob", &subsample_keep_prob, py::arg("count"), py::arg("total_tokens"), py::arg("t"));

  // ---- subwords
  m.def(
      "char_ngrams",
      [](const std::string& word, int minn, int maxn) {
        SubwordConfig cfg;
        cfg.minn = minn;
        cfg.maxn = maxn;
        cfg.validate();
        return char_ngrams(word, cfg);
      },
      py::arg("word"), py::arg("minn") = 2, py::arg("maxn") = 7);
  m.def("fnv1a32", [](const std::string& s) { return fnv1a32(s); }, py::arg("data"));
  m.def("ngram_bucket", &ngram_bucket, py::arg("ngram"), py::arg("n_buckets"));

  // ---- co-occurrence
  py::class_<CooccurrenceStore>(m, "CooccurrenceStore")
      .def("__len__", &CooccurrenceStore::size)
      .def("weight", &CooccurrenceStore::weight, py::arg("i"), py::arg("j"))
      .def("total_weight", &CooccurrenceStore::total_weight)
      .def_property_readonly("window", &CooccurrenceStore::window)
      .def("records", [](const CooccurrenceStore& s) {
        std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> out;
        out.reserve(s.size());
        for (const auto& r : s.records()) out.emplace_back(r.i, r.j, r.x);
        return out;
      });
  m.def(
      "accumulate_cooccurrence",
      [](const CleanCorpus& c, const Vocabulary& v, std::uint32_t ws, unsigned threads) {
        CooccurOptions opt;
        opt.threads = threads;
        return accumulate_cooccurrence(c, v, ws, opt);
      },
      py::arg("corpus"), py::arg("vocab"), py::arg("ws") = 7u, py::arg("threads") = 1u,
      py::call_guard<py::gil_scoped_release>());
  m.def("write_shards", &write_shards, py::arg("store"), py::arg("prefix"), py::arg("shard_bytes") = kShardBytes);
  m.def("read_shards", &read_shards, py::arg("prefix"));

  // ---- embeddings
  py::class_<EmbeddingSet>(m, "EmbeddingSet")
      .def_property_readonly("words", &EmbeddingSet::words)
      .def_property_readonly("dim", &EmbeddingSet::dim)
      .def_property_readonly("algorithm", [](const EmbeddingSet& e) { return e.meta().algorithm; })
      .def_property_readonly("has_subwords", [](const EmbeddingSet& e) { return e.meta().has_subwords; })
      .def_property_readonly("hyper_parameters", [](const EmbeddingSet& e) { return e.meta().hyper_parameters; })
      .def_property_readonly("input", [](const EmbeddingSet& e) { return to_numpy(e.input()); },
                             "Input matrix: word rows, then materialised subword bucket rows (a copy).")
      .def_property_readonly("output", [](const EmbeddingSet& e) { return to_numpy(e.output()); })
      .def("__len__", &EmbeddingSet::word_count)
      .def("__contains__", [](const EmbeddingSet& e, const std::string& w) { return e.find(w).has_value(); })
      .def(
          "vector",
          [](const EmbeddingSet& e, const std::string& w) {
            const auto v = word_vector(e, w);
            return py::array_t<double>(v.size(), v.data());
          },
          py::arg("word"), "Composed vector; unknown words use subwords when available.")
      .def(
          "nearest",
          [](const EmbeddingSet& e, const std::string& w, std::size_t k) {
            std::vector<std::pair<std::string, double>> out;
            for (const auto& n : nearest_neighbors(e, w, k)) out.emplace_back(n.word, n.cosine);
            return out;
          },
          py::arg("word"), py::arg("k") = 8)
      .def(
          "similarity",
          [](const EmbeddingSet& e, const std::string& a, const std::string& b) {
            return cosine_similarity(word_vector(e, a), word_vector(e, b));
          },
          py::arg("a"), py::arg("b"));

  m.def("save_text", &save_text, py::arg("embeddings"), py::arg("path"), py::arg("write_sidecar") = true);
  m.def("load_text", &load_text, py::arg("path"));
  m.def("load_embeddings", &load_embeddings, py::arg("path"));
  m.def(
      "export_tsv",
      [](const EmbeddingSet& e, const std::vector<std::string>& words, const std::string& path) {
        const auto r = export_tsv(e, words, path);
        return py::dict(py::arg("exported") = r.exported, py::arg("skipped") = r.skipped,
                        py::arg("duplicates") = r.duplicates);
      },
      py::arg("embeddings"), py::arg("words"), py::arg("path"));

  // ---- training
  m.def(
      "train_w2v",
      [](const CleanCorpus& corpus, const Vocabulary& vocab, const std::string& mode, std::uint32_t dim, double lr,
         int epochs, int ws, int neg, int minn, int maxn, std::uint32_t buckets, double sample, std::uint64_t seed,
         unsigned threads, bool dynamic_window) {
        W2vConfig cfg;
        cfg.mode = parse_mode(mode);
        cfg.dim = dim;
        cfg.lr = lr;
        cfg.epochs = epochs;
        cfg.ws = ws;
        cfg.negatives = neg;
        cfg.minn = minn;
        cfg.maxn = maxn;
        cfg.n_buckets = buckets;
        cfg.subsample_t = sample;
        cfg.seed = seed;
        cfg.threads = threads;
        cfg.dynamic_window = dynamic_window;
        py::gil_scoped_release release;
        auto t = train_w2v(corpus, vocab, cfg);
        return std::make_pair(std::move(t.model), std::move(t.epoch_loss));
      },
      py::arg("corpus"), py::arg("vocab"), py::arg("mode") = "sg", py::arg("dim") = 300u, py::arg("lr") = 0.25,
      py::arg("epochs") = 100, py::arg("ws") = 7, py::arg("neg") = 20, py::arg("minn") = 2, py::arg("maxn") = 7,
      py::arg("buckets") = 2'000'000u, py::arg("sample") = 1e-4, py::arg("seed") = 1u, py::arg("threads") = 1u,
      py::arg("dynamic_window") = true, "Train CBoW ('cbow') or skip-gram ('sg'); returns (embeddings, epoch losses).");
  m.def(
      "train_glove",
      [](const CooccurrenceStore& store, const Vocabulary& vocab, std::uint32_t dim, double lr, int epochs,
         double x_max, double alpha, std::uint64_t seed, unsigned threads) {
        GloveConfig cfg;
        cfg.dim = dim;
        cfg.lr = lr;
        cfg.epochs = epochs;
        cfg.x_max = x_max;
        cfg.alpha = alpha;
        cfg.seed = seed;
        cfg.threads = threads;
        std::vector<double> loss;
        py::gil_scoped_release release;
        auto emb = train_glove(store, vocab, cfg, &loss);
        return std::make_pair(std::move(emb), std::move(loss));
      },
      py::arg("store"), py::arg("vocab"), py::arg("dim") = 300u, py::arg("lr") = 0.25, py::arg("epochs") = 100,
      py::arg("x_max") = 100.0, py::arg("alpha") = 0.75, py::arg("seed") = 1u, py::arg("threads") = 1u,
      "Train GloVe with AdaGrad; returns (embeddings, epoch losses).");

  // ---- evaluation
  m.def(
      "cosine_similarity",
      [](const std::vector<double>& a, const std::vector<double>& b) { return cosine_similarity(a, b); },
      py::arg("a"), py::arg("b"));
  m.def(
      "spearman_rho",
      [](const std::vector<double>& gold, const std::vector<double>& pred) { return spearman_rho(gold, pred); },
      py::arg("gold"), py::arg("predicted"));
  m.def(
      "pair_similarity",
      [](const EmbeddingSet& e, const std::vector<std::pair<std::string, std::string>> pairs, bool compose_oov) {
        std::vector<WordPair> wp;
        for (const auto& [a, b] : pairs) wp.push_back({a, b, 0.0});
        const auto r = pair_similarity_report(e, wp, EvalOptions{compose_oov});
        std::vector<std::tuple<std::string, std::string, double>> rows;
        for (const auto& row : r.pair_rows) rows.emplace_back(row.a, row.b, row.cosine);
        return py::dict(py::arg("rows") = rows, py::arg("average") = r.pair_average,
                        py::arg("oov_words") = r.oov_words);
      },
      py::arg("embeddings"), py::arg("pairs"), py::arg("compose_oov") = false);
  m.def(
      "evaluate_wordsim",
      [](const EmbeddingSet& e, const std::string& path, bool compose_oov) {
        const auto data = load_wordsim(path);
        const auto r = evaluate_wordsim(e, data, EvalOptions{compose_oov});
        return py::dict(py::arg("spearman") = r.spearman_rho, py::arg("pairs_total") = data.pairs.size(),
                        py::arg("pairs_used") = r.pair_rows.size(), py::arg("oov_words") = r.oov_words);
      },
      py::arg("embeddings"), py::arg("path"), py::arg("compose_oov") = false);
}
