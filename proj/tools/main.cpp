// wembed command-line front end.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "wembed/cooccur.hpp"
#include "wembed/embio.hpp"
#include "wembed/error.hpp"
#include "wembed/eval.hpp"
#include "wembed/glove.hpp"
#include "wembed/kvconfig.hpp"
#include "wembed/pipeline.hpp"
#include "wembed/vocab.hpp"
#include "wembed/w2v.hpp"

namespace {

using namespace wembed;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Settings {
  std::string config_path;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  // preprocess
  std::vector<std::string> inputs;
  bool lowercase = true;
  bool drop_latin = true;

  // shared paths
  std::string corpus;
  std::string out;
  std::string vocab_out;
  std::string emb;
  std::string file;
  std::string cooc;
  std::string vocab;
  std::string loss_log;

  std::uint64_t min_count = 5;
  std::size_t top = 500;
  std::uint32_t shard_mb = 64;

  // training
  std::uint32_t dim = 300;
  double lr = 0.25;
  int epochs = 100;
  int ws = 7;
  int neg = 20;
  int minn = 2;
  int maxn = 7;
  std::uint32_t buckets = 2'000'000;
  double sample = 1e-4;
  bool fixed_window = false;
  double x_max = 100.0;
  double alpha = 0.75;

  // eval
  std::vector<std::string> queries;
  std::size_t k = 8;
  bool compose_oov = false;
};

struct Cli {
  CLI::App app{"wembed: corpus preprocessing, embedding training and intrinsic evaluation", "wembed"};
  Settings s;
  CLI::App* preprocess = nullptr;
  CLI::App* stats = nullptr;
  CLI::App* stopwords = nullptr;
  CLI::App* cooccur = nullptr;
  CLI::App* train = nullptr;
  CLI::App* train_cbow = nullptr;
  CLI::App* train_sg = nullptr;
  CLI::App* train_glove = nullptr;
  CLI::App* eval = nullptr;
  CLI::App* eval_neighbors = nullptr;
  CLI::App* eval_pairs = nullptr;
  CLI::App* eval_wordsim = nullptr;
  CLI::App* exporter = nullptr;

  Cli() {
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", s.config_path, "key=value settings file; explicit flags take precedence");
    app.add_option("--seed", s.seed, "random seed");
    app.add_option("--threads", s.threads, "worker threads")->check(CLI::Range(1u, 1024u));

    preprocess = app.add_subcommand("preprocess", "clean raw UTF-8 text into a one-sentence-per-line corpus");
    preprocess->add_option("--in", s.inputs, "input files or directories")->required();
    preprocess->add_option("--out", s.out, "corpus output path")->required();
    preprocess->add_option("--lowercase", s.lowercase, "fold Latin letters to lower case");
    preprocess->add_option("--drop-latin", s.drop_latin, "drop tokens made only of Latin letters");

    stats = app.add_subcommand("stats", "word-length statistics (and optionally the vocabulary)");
    stats->add_option("--corpus", s.corpus, "clean corpus")->required();
    stats->add_option("--out", s.out, "stats TSV (stdout when omitted)");
    stats->add_option("--vocab-out", s.vocab_out, "also write the vocabulary TSV here");
    stats->add_option("--min-count,--minw", s.min_count, "minimum word count for the vocabulary");

    stopwords = app.add_subcommand("stopwords", "most frequent words as stop-word candidates");
    stopwords->add_option("--corpus", s.corpus, "clean corpus")->required();
    stopwords->add_option("--top", s.top, "number of candidates");
    stopwords->add_option("--min-count,--minw", s.min_count, "minimum word count");
    stopwords->add_option("--out", s.out, "candidates TSV (stdout when omitted)");

    cooccur = app.add_subcommand("cooccur", "build GloVe co-occurrence shards");
    cooccur->add_option("--corpus", s.corpus, "clean corpus")->required();
    cooccur->add_option("--out", s.out, "shard path prefix")->required();
    cooccur->add_option("--ws", s.ws, "window size")->check(CLI::PositiveNumber);
    cooccur->add_option("--min-count,--minw", s.min_count, "minimum word count");
    cooccur->add_option("--shard-mb", s.shard_mb, "maximum shard size in MiB")->check(CLI::PositiveNumber);

    train = app.add_subcommand("train", "train embeddings");
    train->require_subcommand(1);
    train_cbow = train->add_subcommand("cbow", "CBoW with hierarchical softmax and subwords");
    train_sg = train->add_subcommand("sg", "skip-gram with negative sampling and subwords");
    for (CLI::App* sub : {train_cbow, train_sg}) {
      sub->add_option("--corpus", s.corpus, "clean corpus")->required();
      sub->add_option("--out", s.out, "output vectors (.vec text, checkpoint alongside)")->required();
      sub->add_option("--dim", s.dim, "embedding dimension")->check(CLI::PositiveNumber);
      sub->add_option("--lr", s.lr, "initial learning rate")->check(CLI::PositiveNumber);
      sub->add_option("--epochs,--epoch", s.epochs, "training epochs")->check(CLI::PositiveNumber);
      sub->add_option("--ws", s.ws, "window size")->check(CLI::PositiveNumber);
      sub->add_option("--neg", s.neg, "negative samples (sg only)")->check(CLI::NonNegativeNumber);
      sub->add_option("--minn", s.minn, "minimum character n-gram length")->check(CLI::PositiveNumber);
      sub->add_option("--maxn", s.maxn, "maximum character n-gram length")->check(CLI::PositiveNumber);
      sub->add_option("--buckets", s.buckets, "number of n-gram hash buckets")->check(CLI::PositiveNumber);
      sub->add_option("--sample", s.sample, "subsampling threshold")->check(CLI::PositiveNumber);
      sub->add_option("--min-count,--minw", s.min_count, "minimum word count");
      sub->add_flag("--fixed-window", s.fixed_window, "use the full window at every position (default: off)");
      sub->add_option("--loss-log", s.loss_log, "write per-epoch mean loss TSV here");
    }
    train_glove = train->add_subcommand("glove", "GloVe with AdaGrad");
    train_glove->add_option("--corpus", s.corpus, "clean corpus (co-occurrences built in memory)");
    train_glove->add_option("--cooc", s.cooc, "co-occurrence shard prefix from 'cooccur'");
    train_glove->add_option("--vocab", s.vocab, "vocabulary TSV matching --cooc (default <prefix>.vocab.tsv)");
    train_glove->add_option("--out", s.out, "output vectors (.vec text, checkpoint alongside)")->required();
    train_glove->add_option("--dim", s.dim, "embedding dimension")->check(CLI::PositiveNumber);
    train_glove->add_option("--lr", s.lr, "AdaGrad learning rate")->check(CLI::PositiveNumber);
    train_glove->add_option("--epochs,--epoch", s.epochs, "training epochs")->check(CLI::PositiveNumber);
    train_glove->add_option("--x-max", s.x_max, "weighting cutoff")->check(CLI::PositiveNumber);
    train_glove->add_option("--alpha", s.alpha, "weighting exponent")->check(CLI::PositiveNumber);
    train_glove->add_option("--ws", s.ws, "window size when building from --corpus")->check(CLI::PositiveNumber);
    train_glove->add_option("--min-count,--minw", s.min_count, "minimum word count when building from --corpus");
    train_glove->add_option("--loss-log", s.loss_log, "write per-epoch mean loss TSV here");

    eval = app.add_subcommand("eval", "intrinsic evaluation");
    eval->require_subcommand(1);
    eval_neighbors = eval->add_subcommand("neighbors", "top-k nearest neighbours by cosine");
    eval_neighbors->add_option("--emb", s.emb, "embedding .vec file")->required();
    eval_neighbors->add_option("--query", s.queries, "query word (repeatable)")->required();
    eval_neighbors->add_option("--k", s.k, "neighbours per query")->check(CLI::PositiveNumber);
    eval_pairs = eval->add_subcommand("pairs", "cosine per word pair and their average");
    eval_wordsim = eval->add_subcommand("wordsim", "Spearman correlation against gold similarity scores");
    for (CLI::App* sub : {eval_pairs, eval_wordsim}) {
      sub->add_option("--emb", s.emb, "embedding .vec file")->required();
      sub->add_option("--file", s.file, "pairs TSV")->required();
      sub->add_flag("--compose-oov", s.compose_oov, "build vectors for unknown words from subwords (default: off)");
    }

    exporter = app.add_subcommand("export", "write selected vectors as TSV for external plotting");
    exporter->add_option("--emb", s.emb, "embedding .vec file")->required();
    exporter->add_option("--words", s.file, "file with one word per line")->required();
    exporter->add_option("--out", s.out, "TSV output")->required();
  }

  void for_each_option(const std::function<void(CLI::App*, CLI::Option*)>& fn) {
    std::function<void(CLI::App*)> walk = [&](CLI::App* a) {
      for (CLI::Option* o : a->get_options()) fn(a, o);
      for (CLI::App* sub : a->get_subcommands([](CLI::App*) { return true; })) walk(sub);
    };
    walk(&app);
  }
};

std::string find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

// Config entries become arguments only for options the user did not pass.
std::vector<std::string> config_arguments(Cli& probe, const KeyValueConfig& kv) {
  std::vector<std::string> extra;
  probe.for_each_option([&](CLI::App* parent, CLI::Option* o) {
    if (o->count() > 0 || o->get_lnames().empty()) return;
    if (parent != &probe.app && !parent->parsed()) return;
    for (const auto& name : o->get_lnames()) {
      if (name == "config" || name == "help") continue;
      if (auto v = kv.get(name)) {
        if (o->get_expected_min() == 0) {
          if (parse_bool(*v)) extra.push_back("--" + name);
        } else {
          extra.push_back("--" + name + "=" + *v);
        }
        break;
      }
    }
  });
  return extra;
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open file for writing");
  out << text;
  if (!out) throw IoError(path, "write failed");
}

void write_loss_log(const std::string& path, const std::vector<double>& losses) {
  if (path.empty()) return;
  std::string text = "epoch\tmean_loss\n";
  char buf[64];
  for (std::size_t e = 0; e < losses.size(); ++e) {
    std::snprintf(buf, sizeof buf, "%zu\t%.10g\n", e + 1, losses[e]);
    text += buf;
  }
  write_or_print(path, text);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

void run_command(Cli& cli, const KeyValueConfig& kv) {
  Settings& s = cli.s;
  if (cli.preprocess->parsed()) {
    PipelineConfig cfg = PipelineConfig::from_config(kv);
    cfg.lowercase = s.lowercase;
    cfg.drop_latin_tokens = s.drop_latin;
    const auto files = collect_input_files(s.inputs);
    const CleanCorpus corpus = run_pipeline(files, cfg, s.threads);
    save_corpus(corpus, s.out);
    std::cerr << "preprocess: " << files.size() << " files, " << corpus.sentences.size() << " sentences, "
              << corpus.token_count << " tokens -> " << s.out << '\n';
  } else if (cli.stats->parsed()) {
    const CleanCorpus corpus = load_corpus(s.corpus);
    write_or_print(s.out, format_length_stats(word_length_stats(corpus)));
    if (!s.vocab_out.empty()) save_vocab(build_vocab(corpus, s.min_count, s.threads), s.vocab_out);
  } else if (cli.stopwords->parsed()) {
    const Vocabulary vocab = build_vocab(load_corpus(s.corpus), s.min_count, s.threads);
    write_or_print(s.out, format_stopwords(stopword_candidates(vocab, s.top)));
  } else if (cli.cooccur->parsed()) {
    const CleanCorpus corpus = load_corpus(s.corpus);
    const Vocabulary vocab = build_vocab(corpus, s.min_count, s.threads);
    CooccurOptions opts;
    opts.threads = s.threads;
    const auto store = accumulate_cooccurrence(corpus, vocab, static_cast<std::uint32_t>(s.ws), opts);
    const auto paths = write_shards(store, s.out, std::size_t{s.shard_mb} << 20);
    save_vocab(vocab, s.out + ".vocab.tsv");
    std::cerr << "cooccur: " << store.size() << " records in " << paths.size() << " shard(s), vocabulary "
              << vocab.size() << " words\n";
  } else if (cli.train_cbow->parsed() || cli.train_sg->parsed()) {
    W2vConfig cfg;
    cfg.mode = cli.train_cbow->parsed() ? W2vMode::cbow : W2vMode::sg;
    cfg.dim = s.dim;
    cfg.lr = s.lr;
    cfg.epochs = s.epochs;
    cfg.ws = s.ws;
    cfg.negatives = s.neg;
    cfg.minn = s.minn;
    cfg.maxn = s.maxn;
    cfg.n_buckets = s.buckets;
    cfg.subsample_t = s.sample;
    cfg.seed = s.seed;
    cfg.threads = s.threads;
    cfg.dynamic_window = !s.fixed_window;
    const CleanCorpus corpus = load_corpus(s.corpus);
    const Vocabulary vocab = build_vocab(corpus, s.min_count, s.threads);
    auto trained = train_w2v(corpus, vocab, cfg);
    save_text(trained.model, s.out);
    write_loss_log(s.loss_log, trained.epoch_loss);
    if (!trained.epoch_updates.empty() && trained.epoch_updates.back() == 0)
      std::cerr << "warning: no training updates in the last epoch; subsampling (--sample) or "
                   "min-count may have removed every usable context\n";
    std::cerr << "train " << to_string(cfg.mode) << ": " << vocab.size() << " words, final mean loss "
              << trained.epoch_loss.back() << " -> " << s.out << '\n';
  } else if (cli.train_glove->parsed()) {
    GloveConfig cfg;
    cfg.dim = s.dim;
    cfg.lr = s.lr;
    cfg.epochs = s.epochs;
    cfg.x_max = s.x_max;
    cfg.alpha = s.alpha;
    cfg.seed = s.seed;
    cfg.threads = s.threads;
    Vocabulary vocab;
    CooccurrenceStore store;
    if (!s.cooc.empty()) {
      store = read_shards(s.cooc);
      vocab = load_vocab(s.vocab.empty() ? s.cooc + ".vocab.tsv" : s.vocab);
    } else if (!s.corpus.empty()) {
      const CleanCorpus corpus = load_corpus(s.corpus);
      vocab = build_vocab(corpus, s.min_count, s.threads);
      CooccurOptions opts;
      opts.threads = s.threads;
      store = accumulate_cooccurrence(corpus, vocab, static_cast<std::uint32_t>(s.ws), opts);
    } else {
      throw UsageError("train glove needs --corpus or --cooc");
    }
    std::vector<double> losses;
    const auto emb = train_glove(store, vocab, cfg, &losses);
    save_text(emb, s.out);
    write_loss_log(s.loss_log, losses);
    std::cerr << "train glove: " << vocab.size() << " words, " << store.size() << " records, final mean loss "
              << losses.back() << " -> " << s.out << '\n';
  } else if (cli.eval_neighbors->parsed()) {
    const EmbeddingSet emb = load_embeddings(s.emb);
    const NeighborIndex index(emb);
    for (const auto& q : s.queries) std::cout << format_neighbors(q, index.query(q, s.k));
  } else if (cli.eval_pairs->parsed()) {
    const EmbeddingSet emb = load_embeddings(s.emb);
    const auto pairs = load_pairs(s.file);
    std::cout << format_pair_report(pair_similarity_report(emb, pairs, {s.compose_oov}));
  } else if (cli.eval_wordsim->parsed()) {
    const EmbeddingSet emb = load_embeddings(s.emb);
    const auto data = load_wordsim(s.file);
    const auto report = evaluate_wordsim(emb, data, {s.compose_oov});
    std::printf("pairs_total\t%zu\npairs_used\t%zu\nspearman\t%.6f\n", data.pairs.size(), report.pair_rows.size(),
                report.spearman_rho);
    for (const auto& w : report.oov_words) std::cout << "oov\t" << w << '\n';
  } else if (cli.exporter->parsed()) {
    const EmbeddingSet emb = load_embeddings(s.emb);
    const auto report = export_tsv(emb, read_lines(s.file), s.out);
    std::cerr << "export: " << report.exported << " rows -> " << s.out << '\n';
    for (const auto& w : report.skipped) std::cerr << "skipped\t" << w << '\n';
    for (const auto& w : report.duplicates) std::cerr << "duplicate\t" << w << '\n';
  }
}

} // namespace

int main(int argc, char** argv) {
  KeyValueConfig kv;
  try {
    const std::string config_path = find_config_arg(argc, argv);
    if (!config_path.empty()) kv = KeyValueConfig::load(config_path);
  } catch (const wembed::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  if (!kv.entries().empty()) {
    Cli probe;
    try {
      probe.app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
      const int code = probe.app.exit(e);
      return code == 0 ? 0 : kExitUsage;
    }
    try {
      const auto extra = config_arguments(probe, kv);
      args.insert(args.end(), extra.begin(), extra.end());
    } catch (const wembed::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitUsage;
    }
  }

  Cli cli;
  try {
    // CLI11 consumes a reversed argument vector.
    cli.app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = cli.app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    run_command(cli, kv);
  } catch (const wembed::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
