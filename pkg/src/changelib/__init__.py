from .changepoint.modeling_changepoint import estimate_changepoints, error_rate
from .distance.configuration_distance import DistanceParams
from .distance.modeling_distance import empirical_distance, estimate_single, score_delta
from .pipelines.change_detection import ChangePointPipeline
from .pipelines.experiment import ExperimentConfig, ExperimentPipeline

__all__ = [
    "ChangePointPipeline",
    "ExperimentPipeline",
    "ExperimentConfig",
    "DistanceParams",
    "empirical_distance",
    "score_delta",
    "estimate_single",
    "estimate_changepoints",
    "error_rate",
]
