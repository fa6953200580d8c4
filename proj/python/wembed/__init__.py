"""Word embeddings for low-resource corpora.

Thin Python layer over the C++ core: text cleaning, vocabulary statistics,
CBoW / skip-gram (with subwords) and GloVe training, and intrinsic evaluation.
"""

from ._wembed import (
    CleanCorpus,
    CooccurrenceStore,
    DecodeError,
    DivergenceError,
    DomainError,
    EmbeddingSet,
    Error,
    InputError,
    IntegrityError,
    IoError,
    NotFoundError,
    ParseError,
    PipelineConfig,
    StructureError,
    TrainingError,
    UsageError,
    Vocabulary,
    accumulate_cooccurrence,
    build_vocab,
    char_ngrams,
    cosine_similarity,
    evaluate_wordsim,
    export_tsv,
    fnv1a32,
    load_corpus,
    load_embeddings,
    load_text,
    load_vocab,
    ngram_bucket,
    pair_similarity,
    percent_of,
    process_text,
    read_shards,
    run_pipeline,
    save_corpus,
    save_text,
    save_vocab,
    spearman_rho,
    stopword_candidates,
    subsample_keep_prob,
    train_glove,
    train_w2v,
    word_length_stats,
    write_shards,
)

__version__ = "0.1.0"
