"""Radar cross-section target classification toolkit.

Thin Python surface over the C++ core: fleet synthesis, noise injection,
feature extraction, classifier training/prediction, Monte Carlo sweeps,
and wavelet scalogram export.
"""

import json as _json

from ._core import (
    Classifier,
    Dataset,
    NumericError,
    Signature,
    ValidationError,
    add_noise,
    boxplot,
    cwt_scalogram,
    extract_features,
    fit_gamma,
    fit_gpd,
    generate_fleet,
    load_classifier,
    restrict_azimuth,
    run_sweep,
    save_scalogram_png,
    train_classifier,
)

__version__ = "0.1.0"

__all__ = [
    "Classifier",
    "Dataset",
    "NumericError",
    "Signature",
    "ValidationError",
    "add_noise",
    "boxplot",
    "cwt_scalogram",
    "extract_features",
    "fit_gamma",
    "fit_gpd",
    "generate_fleet",
    "load_classifier",
    "restrict_azimuth",
    "run_sweep",
    "save_scalogram_png",
    "sweep_report",
    "train_classifier",
]


def sweep_report(*args, **kwargs):
    """Like :func:`run_sweep`, but returns the report as a parsed dict."""
    return _json.loads(run_sweep(*args, **kwargs))
