"""Train and evaluate word embeddings on small domain corpora."""

from ._core import (
    ConfigError,
    Corpus,
    DecodeError,
    DefinitionError,
    DomainError,
    Error,
    EvalReport,
    FormatError,
    IoError,
    LookupError,
    Model,
    QuestionRecord,
    SemanticError,
    TrainingConfig,
    UsageError,
    comparison_table,
    evaluate,
    generate_dataset,
    load_corpus,
    load_model,
    preset,
    preset_names,
    read_corpus,
    split_sentences,
    tokenize,
    train,
    train_ppmi,
)

__version__ = "0.1.0"
