"""Categorize and prioritize healthcare security activities.

Density-based clustering groups expert-rated activities; AHP weights and
TOPSIS then rank the resulting categories.
"""

from .ahp import ConsistencyReport, PairwiseMatrix, WeightVector, consistency_ratio, derive_weights
from .cluster import ClusterAssignment, DbscanParams, cluster_profiles, dbscan, distance, epsilon_neighborhood
from .core import (
    Activity,
    Category,
    Criterion,
    DecisionMatrix,
    ExpertProfile,
    Kind,
    RatingMatrix,
    ValidationError,
    bundled_paper_catalog,
    validate_decision_matrix,
    validate_rating_matrix,
)
from .pipeline import PipelineConfig, PipelineReport, reproduce, run, sensitivity
from .topsis import TopsisResult, apply_weights, closeness, ideal_solutions, normalize, rank, separation

__version__ = "0.1.0"
