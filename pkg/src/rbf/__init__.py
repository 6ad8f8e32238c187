from .interpolant import (
    Factorization,
    Interpolant,
    assemble,
    evaluate,
    evaluate_gradient,
    fit,
)
from .kernels import KernelSpec

__all__ = [
    "Factorization",
    "Interpolant",
    "KernelSpec",
    "assemble",
    "evaluate",
    "evaluate_gradient",
    "fit",
]
