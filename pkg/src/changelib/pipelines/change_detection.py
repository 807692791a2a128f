import os
from typing import Any, Dict, Optional

import numpy as np

from ..changepoint.configuration_changepoint import EstimateReport
from ..changepoint.modeling_changepoint import estimate_changepoints
from ..distance.configuration_distance import DistanceParams
from ..io import read_series, write_report
from ..types import as_time_series, rescale_unit
from .base import Pipeline


class ChangePointPipeline(Pipeline):
    """Estimate change points of a series given as an array or a sequence file."""

    def __init__(self, params: Optional[DistanceParams] = None, rescale: bool = False):
        self.params = params or DistanceParams()
        self.rescale = rescale

    def _sanitize_parameters(self, **kwargs):
        preprocess_kwargs = {
            "fmt": kwargs.get("fmt", "text"),
            "rescale": kwargs.get("rescale", self.rescale),
        }
        forward_kwargs = {
            "kappa": kwargs["kappa"],
            "seed": kwargs.get("seed", None),
        }
        postprocess_kwargs = {
            "save_path": kwargs.get("save_path", None),
        }
        return preprocess_kwargs, forward_kwargs, postprocess_kwargs

    def preprocess(self, inputs, fmt: str, rescale: bool):
        if isinstance(inputs, (str, os.PathLike)):
            series = read_series(os.fspath(inputs), fmt=fmt)
        else:
            series = as_time_series(np.asarray(inputs, dtype=np.float64), "series")
        if rescale:
            series = rescale_unit(series)
        return {"series": series}

    def _forward(self, model_inputs: Dict[str, Any], kappa: int, seed: Optional[int]):
        return estimate_changepoints(model_inputs["series"], kappa, self.params, seed=seed)

    def postprocess(self, model_outputs: EstimateReport, save_path: Optional[str]):
        if save_path is not None:
            write_report(save_path, model_outputs)
        return model_outputs

    @classmethod
    def from_config(cls, config_path: str, rescale: bool = False):
        if not os.path.isfile(config_path):
            raise FileNotFoundError(f"Expected to find distance config at {config_path} but not found.")
        return cls(DistanceParams.from_file(config_path), rescale=rescale)
