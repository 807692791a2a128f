from typing import Any, Dict, Tuple


class Pipeline:
    """Three-stage pipeline: ``preprocess`` -> ``_forward`` -> ``postprocess``.

    ``_sanitize_parameters`` splits the call's keyword arguments into the
    keyword arguments of each stage.
    """

    def _sanitize_parameters(self, **kwargs) -> Tuple[Dict[str, Any], Dict[str, Any], Dict[str, Any]]:
        raise NotImplementedError

    def preprocess(self, inputs, **kwargs):
        raise NotImplementedError

    def _forward(self, model_inputs, **kwargs):
        raise NotImplementedError

    def postprocess(self, model_outputs, **kwargs):
        raise NotImplementedError

    def __call__(self, inputs=None, **kwargs):
        preprocess_kwargs, forward_kwargs, postprocess_kwargs = self._sanitize_parameters(**kwargs)
        model_inputs = self.preprocess(inputs, **preprocess_kwargs)
        model_outputs = self._forward(model_inputs, **forward_kwargs)
        return self.postprocess(model_outputs, **postprocess_kwargs)
