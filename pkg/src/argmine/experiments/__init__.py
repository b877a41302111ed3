from .metrics import (
    CLASS_ORDER_THREE,
    CLASS_ORDER_TWO,
    EvaluationReport,
    MetricsError,
    confusion_matrix,
    evaluate,
    label_index,
    macro_f1,
    predict_classes,
)
from .augmentation import (
    AugmentationError,
    RelatedTermsRegistry,
    augment_test,
    augment_train,
    related_terms_registry,
)
from .training import (
    DivergenceError,
    Hyperparameters,
    TokenIdFeaturizer,
    TrainRun,
    TrainingError,
    WordVectorFeaturizer,
    restart_select,
    train,
)

__all__ = [
    "CLASS_ORDER_THREE",
    "CLASS_ORDER_TWO",
    "EvaluationReport",
    "MetricsError",
    "confusion_matrix",
    "evaluate",
    "label_index",
    "macro_f1",
    "predict_classes",
    "AugmentationError",
    "RelatedTermsRegistry",
    "augment_test",
    "augment_train",
    "related_terms_registry",
    "DivergenceError",
    "Hyperparameters",
    "TokenIdFeaturizer",
    "TrainRun",
    "TrainingError",
    "WordVectorFeaturizer",
    "restart_select",
    "train",
]
