"""Word rotator's distance, word mover's distance and embedding converters."""

from ._core import (
    Alignment,
    ConfigError,
    ConverterParams,
    DataError,
    DimensionError,
    EmbeddingTable,
    EmptyBagError,
    EvaluationReport,
    Projection,
    StopwordSet,
    UnigramModel,
    ZeroNormError,
    additive_cosine,
    additive_normalized_cosine,
    convert,
    emd,
    evaluate,
    fit_converter,
    load_embeddings,
    load_stopwords,
    load_unigram,
    pearson,
    save_embeddings,
    spearman,
    wmd,
    wmd_sif,
    wrd,
)

__all__ = [name for name in dir() if not name.startswith("_")]
