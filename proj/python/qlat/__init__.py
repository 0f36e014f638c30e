"""Ergodicity certificates for dissipative lattice models.

Thin wrapper over the compiled extension: every helper returns plain Python
dictionaries decoded from the JSON reports of the C++ core.
"""

import json

from ._qlat import (
    SchemaError,
    ErgodicityError,
    __version__,
    catalog_names,
    certify_from_config_json,
    certify_json,
    config_json,
    spectrum_json,
    verify_json,
)

__all__ = [
    "SchemaError",
    "ErgodicityError",
    "__version__",
    "catalog_names",
    "certify",
    "certify_config",
    "config",
    "spectrum",
    "verify",
]


def config(name):
    """Default configuration of a built-in model."""
    return json.loads(config_json(name))


def certify(name, shape=None):
    """Ergodicity certificate of a built-in model, optionally resized."""
    return json.loads(certify_json(name, list(shape) if shape else []))


def certify_config(cfg):
    """Certificate for a configuration dictionary (same layout as config())."""
    return json.loads(certify_from_config_json(json.dumps(cfg)))


def spectrum(name):
    """Single-site spectral data of a built-in model."""
    return json.loads(spectrum_json(name))


def verify(name, shape=None, seed=1, profile="default"):
    """Full check battery; returns the aggregated report."""
    return json.loads(verify_json(name, list(shape) if shape else [], seed, profile))
