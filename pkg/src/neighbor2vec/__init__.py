"""neighbor2vec: graph embeddings from hop-prioritized neighbor sampling,
skip-gram negative-sampling training and neighbor feature propagation."""

from .embedding_io import read as read_embeddings
from .embedding_io import write as write_embeddings
from .errors import ConfigError, DataError, FormatError, Neighbor2vecError, NumericError
from .graph import Graph, IngestOptions, from_edges, load_edge_list, save_edge_list
from .harness import run_link_prediction, run_node_classification
from .metrics import edge_feature, evaluate_accuracy, evaluate_roc_auc, hits_at_k, mrr
from .mlp import MlpConfig, MlpModel, train_mlp
from .propagation import PropagationConfig, aggregate_attention, aggregate_average, propagate
from .sampling import (
    Corpus,
    baseline_random_walk_corpus,
    default_num,
    generate_corpus,
    sample_neighborhood,
)
from .tasks import LinkTask, NodeLabelTask, sample_non_edges, stratified_split
from .trainer import (
    NoiseTable,
    TrainConfig,
    build_noise_table,
    neighborhood_softmax,
    sgns_loss_and_grads,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "IngestOptions",
    "from_edges",
    "load_edge_list",
    "save_edge_list",
    "Corpus",
    "sample_neighborhood",
    "generate_corpus",
    "baseline_random_walk_corpus",
    "default_num",
    "TrainConfig",
    "NoiseTable",
    "build_noise_table",
    "sgns_loss_and_grads",
    "train",
    "neighborhood_softmax",
    "PropagationConfig",
    "aggregate_average",
    "aggregate_attention",
    "propagate",
    "MlpConfig",
    "MlpModel",
    "train_mlp",
    "evaluate_accuracy",
    "evaluate_roc_auc",
    "hits_at_k",
    "mrr",
    "edge_feature",
    "run_node_classification",
    "run_link_prediction",
    "NodeLabelTask",
    "LinkTask",
    "stratified_split",
    "sample_non_edges",
    "read_embeddings",
    "write_embeddings",
    "Neighbor2vecError",
    "FormatError",
    "ConfigError",
    "DataError",
    "NumericError",
    "__version__",
]
