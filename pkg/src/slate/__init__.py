"""Joint sentence segmentation and task extraction for recognized ink text.

The library covers the full pipeline: the writing-region document model,
label-scheme encoding/decoding with layout marker rendering and token-level
aggregation, trainable taggers (joint single-pass and the two-model
baseline), matching-based classification evaluation, boundary-similarity
segmentation scoring, corpus I/O, and a latency harness. The ``slate``
command line exposes every step; see README.md.
"""

from .boundary import (
    BoundarySet,
    EditSummary,
    b_tp,
    boundaries_of,
    boundary_edit_distance,
    boundary_similarity,
)
from .codec import (
    BULLET_TOKEN,
    LINE_BREAK_TOKEN,
    DecodeResult,
    LabelScheme,
    RenderedToken,
    TokenLabelSequence,
    WordLabelSequence,
    aggregate_bi,
    aggregate_bio,
    aggregate_nti,
    aggregate_to_words,
    chunk_splitter,
    decode,
    encode_word_labels,
    identity_splitter,
    nti_to_bio,
    project_to_tokens,
    render_with_layout,
)
from .dataset import (
    CorpusSummary,
    DataError,
    gold_predictions,
    load_corpus,
    load_predictions,
    save_corpus,
    save_label_predictions,
    save_predictions,
    summarize,
)
from .document import (
    NONTASK,
    TASK,
    LayoutMetadata,
    SentenceSpan,
    Word,
    WritingRegion,
    validate_region,
)
from .matching import (
    ClassMetrics,
    ClassificationReport,
    ConfusionCounts,
    MatchEdge,
    MatchResult,
    classification_report,
    confusion,
    corpus_evaluate,
    full_matching,
    iou,
    match_region,
    max_weight_full_matching,
    prune,
)
from .report import EvalReport, evaluate_predictions
from .taggers import (
    InvocationCounters,
    SentenceClassifierModel,
    TaggerModel,
    TrainConfig,
    classify_sentence,
    extract_joint,
    extract_two_model,
    load_model,
    predict_labels,
    save_model,
    strip_layout,
    train_joint,
    train_sentence_classifier,
)

__version__ = "0.1.0"
