"""Shifted pseudo-bosonic quadratic oscillator: eigenfamilies, bi-coherent states and checks."""

__version__ = "0.1.0"

from .params import PRESETS, DerivedParams, ModelParams, ParameterError, derive, spectrum  # noqa: E402

__all__ = ["PRESETS", "DerivedParams", "ModelParams", "ParameterError", "derive", "spectrum",
           "__version__"]
