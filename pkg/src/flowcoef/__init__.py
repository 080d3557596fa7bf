"""Exact rational coefficient solutions for routing in k-pair networks."""
__version__ = "0.1.0"

from .errors import FlowcoefError
from .evaluator import g_max_exhaustive, g_max_fixed, g_sample
from .kernels import BACKEND
from .perturb import build_cdd, build_shf, delta_star, epsilon_star, optimum
from .samples import Sample, enumerate_profiles
from .space import CoefficientTuple, FixedPointParams, expand

__all__ = [
    "BACKEND", "CoefficientTuple", "FixedPointParams", "FlowcoefError", "Sample",
    "build_cdd", "build_shf", "delta_star", "enumerate_profiles", "epsilon_star", "expand",
    "g_max_exhaustive", "g_max_fixed", "g_sample", "optimum",
]
