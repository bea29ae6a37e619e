"""Cost-informed linear dimensionality reduction toolkit.

Fits cost-weighted discriminant projections alongside PCA and LDA
baselines, scores reduced feature spaces with a KNN classifier under a
misclassification-cost matrix, and runs a seeded Monte-Carlo benchmark
comparing the three methods as dimensionality shrinks.
"""

from .classify import ConfusionMatrix, KnnModel, confusion, knn_predict
from .costmodel import (
    CostMatrix,
    case_study_cost_matrix,
    load_cost_matrix,
    total_cost,
    validate_cost_matrix,
)
from .datagen import (
    GenerativeSpec,
    SeedStream,
    generate_case_study,
    load_dataset_csv,
    sample_gaussian,
    sample_inverse_wishart,
    save_dataset_csv,
    stratified_split,
)
from .errors import CostdimError
from .experiment import (
    BoxPlotStats,
    ExperimentConfig,
    ReplicationResult,
    case_study_config,
    run_experiment,
    run_replication,
    summarize,
)
from .linalg import EigenResult, cholesky, eig_generalized, eig_symmetric
from .reducers import (
    COST_INFORMED,
    LDA,
    METHODS,
    PCA,
    Projection,
    fit_cost_informed,
    fit_lda,
    fit_pca,
    load_projection,
    save_projection,
    transform,
)
from .scatter import (
    Dataset,
    between_class_scatter,
    class_mean,
    cost_weighted_between_scatter,
    pairwise_scatter,
    separability,
    total_scatter,
    within_class_scatter,
)

__version__ = "0.1.0"

__all__ = [
    "BoxPlotStats",
    "COST_INFORMED",
    "ConfusionMatrix",
    "CostMatrix",
    "CostdimError",
    "Dataset",
    "EigenResult",
    "ExperimentConfig",
    "GenerativeSpec",
    "KnnModel",
    "LDA",
    "METHODS",
    "PCA",
    "Projection",
    "ReplicationResult",
    "SeedStream",
    "between_class_scatter",
    "case_study_config",
    "case_study_cost_matrix",
    "cholesky",
    "class_mean",
    "confusion",
    "cost_weighted_between_scatter",
    "eig_generalized",
    "eig_symmetric",
    "fit_cost_informed",
    "fit_lda",
    "fit_pca",
    "generate_case_study",
    "knn_predict",
    "load_cost_matrix",
    "load_dataset_csv",
    "load_projection",
    "pairwise_scatter",
    "run_experiment",
    "run_replication",
    "sample_gaussian",
    "sample_inverse_wishart",
    "save_dataset_csv",
    "save_projection",
    "separability",
    "stratified_split",
    "summarize",
    "total_cost",
    "total_scatter",
    "transform",
    "validate_cost_matrix",
    "within_class_scatter",
]
