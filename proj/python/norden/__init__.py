"""Python access to the Norden verification toolkit."""

import json

from ._norden import (
    Model,
    ModelFormatError,
    NordenError,
    ValidationError,
    __version__,
    canonical_connection,
    check_catalog,
    christoffels,
    fundamental_tensor,
    generate,
    instance_kinds,
    load_model,
    nabla_J,
    parse_model,
    report_text,
    save_model,
    square_norm,
    tolerance_scale_from_env,
    validate,
)
from . import _norden


def verify(model, checks=(), tolerance_scale=None):
    """Run the check suite and return the report as a dict."""
    if tolerance_scale is None:
        tolerance_scale = tolerance_scale_from_env()
    return json.loads(_norden.verify_json(model, list(checks), tolerance_scale))


def run_corpus(directory, tolerance_scale=None):
    """Verify every model file under `directory`; returns the corpus report dict."""
    if tolerance_scale is None:
        tolerance_scale = tolerance_scale_from_env()
    return json.loads(_norden.run_corpus_json(str(directory), tolerance_scale))


def failing_checks(report):
    return [c["check_id"] for c in report["checks"] if c["verdict"] == "fail"]


__all__ = [
    "Model",
    "ModelFormatError",
    "NordenError",
    "ValidationError",
    "__version__",
    "canonical_connection",
    "check_catalog",
    "christoffels",
    "failing_checks",
    "fundamental_tensor",
    "generate",
    "instance_kinds",
    "load_model",
    "nabla_J",
    "parse_model",
    "report_text",
    "run_corpus",
    "save_model",
    "square_norm",
    "tolerance_scale_from_env",
    "validate",
    "verify",
]
