"""Supervised term weighting for binary text categorization."""
from ._accel import backend
from .classifier import (Dataset, LinearModel, TrainConfig, decision, predict,
                         train)
from .corpus import (Corpus, Document, FoldAssignment, Label, holdout_split,
                     load_class_dirs, load_tsv, stratified_folds)
from .evaluation import (EvalReport, ExperimentConfig, cross_validate,
                         run_experiment, sweep, tune_b0)
from .textproc import (FeatureKey, Vocabulary, build_vocabulary, count_document,
                       extract_features, tokenize)
from .weighting import (CollectionStats, GlobalScheme, LocalScheme,
                        SparseVector, TermContingency, WeightModel,
                        contingency_counts, entropy_h, fit_weight_model,
                        global_weight, imbalance_x, local_weight, regularize,
                        scale, vectorize)

__version__ = "0.1.0"
