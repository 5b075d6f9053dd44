"""Class-specific feature selection (OvA, OvE, DOvE), class-specific
relevance matrices and the ensemble schemes built on them."""

from .classifiers import BaseClassifierSpec, TrainedNode, predict_node_scores, train_binary_node, train_node
from .data import (
    BinarizedView,
    ClassPartition,
    Dataset,
    LabeledView,
    PairView,
    binarize,
    load_csv,
    pair_view,
    partition_by_class,
)
from .errors import CsfsError, DataError, UsageError
from .evaluation import EvaluationReport, InstrumentationReport, Pipeline, evaluate, stratified_kfold
from .matrix import RelevanceMatrix, build_matrix, pair_relevant_set
from .measures import (
    CallCounter,
    DiscretizationSpec,
    MeasureSpec,
    discretize,
    entropy,
    measure,
    mutual_information,
    normalized_information_gain,
    symmetric_uncertainty,
)
from .schemes import SchemeSpec, TrainedScheme, build_scheme, count_nodes, predict
from .selection import (
    AggregateSpec,
    ClassSpecificRanking,
    GlobalRanking,
    PairwiseRelevanceTable,
    RelevanceThreshold,
    aggregate_pairwise,
    collapse,
    dove,
    ova,
    ove,
    rank_global,
    relevant_features,
)

__all__ = [
    "aggregate_pairwise",
    "AggregateSpec",
    "BaseClassifierSpec",
    "binarize",
    "BinarizedView",
    "build_matrix",
    "build_scheme",
    "CallCounter",
    "ClassPartition",
    "ClassSpecificRanking",
    "collapse",
    "count_nodes",
    "CsfsError",
    "DataError",
    "Dataset",
    "DiscretizationSpec",
    "discretize",
    "dove",
    "entropy",
    "evaluate",
    "EvaluationReport",
    "GlobalRanking",
    "InstrumentationReport",
    "LabeledView",
    "load_csv",
    "measure",
    "MeasureSpec",
    "mutual_information",
    "normalized_information_gain",
    "ova",
    "ove",
    "pair_relevant_set",
    "pair_view",
    "PairView",
    "PairwiseRelevanceTable",
    "partition_by_class",
    "Pipeline",
    "predict",
    "predict_node_scores",
    "rank_global",
    "RelevanceMatrix",
    "RelevanceThreshold",
    "relevant_features",
    "SchemeSpec",
    "stratified_kfold",
    "symmetric_uncertainty",
    "train_binary_node",
    "train_node",
    "TrainedNode",
    "TrainedScheme",
    "UsageError",
]

__version__ = "0.1.0"
