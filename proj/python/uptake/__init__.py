"""Influence labeling, text features and logistic-regression evaluation for forum posts."""

from ._core import (
    AdoptionEvent,
    AdoptionKind,
    ConfusionMatrix,
    Corpus,
    InfluenceConfig,
    LabeledPost,
    MeqLabel,
    ModelParams,
    Post,
    SentimentLexicon,
    SentimentScores,
    SynthConfig,
    TokenizedPost,
    UptakeError,
    UptakeRecord,
    __version__,
    accuracy,
    cohens_kappa,
    confusion,
    evaluate,
    f_positive,
    generate_synthetic,
    interaction_features,
    kappa,
    label_corpus,
    round_half_up,
    sentiment,
    stratified_folds,
    suggest_meq,
    tokenize,
    train,
    word_category_features,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
