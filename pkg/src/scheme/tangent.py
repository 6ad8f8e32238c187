"""
Directions spanning the tangent space of the level sets, i.e. the columns of
sigma(Du) with P(Du) = I - Du (x) Du / |Du|^2 = sigma sigma^T.
"""
from typing import Tuple

import numpy as np

from .models import TangentFrame

E1 = np.array([1.0, 0.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


def tangent2d_batch(D: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """sigma = (D2, -D1) / |D| per row; rows with D = 0 are flagged and left zero."""
    D = np.atleast_2d(D)
    norm = np.linalg.norm(D, axis=1)
    degenerate = norm == 0.0
    sigma = np.zeros_like(D)
    ok = ~degenerate
    sigma[ok, 0] = D[ok, 1] / norm[ok]
    sigma[ok, 1] = -D[ok, 0] / norm[ok]
    return sigma, degenerate


def tangent3d_batch(D: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    nu1 = (-D3, 0, D1) / s,  nu2 = (-D1 D2 / s, s, -D2 D3 / s) / |D|,  s = sqrt(D1^2 + D3^2).
    Rows with s = 0 get (e1, e3) and the degenerate flag.
    """
    D = np.atleast_2d(D)
    s = np.hypot(D[:, 0], D[:, 2])
    norm = np.linalg.norm(D, axis=1)
    degenerate = s == 0.0
    ok = ~degenerate

    nu1 = np.tile(E1, (len(D), 1))
    nu2 = np.tile(E3, (len(D), 1))
    so, no = s[ok], norm[ok]
    nu1[ok] = np.column_stack([-D[ok, 2] / so, np.zeros_like(so), D[ok, 0] / so])
    nu2[ok] = np.column_stack(
        [-D[ok, 0] * D[ok, 1] / so / no, so / no, -D[ok, 1] * D[ok, 2] / so / no]
    )
    return nu1, nu2, degenerate


def tangent2d(D) -> TangentFrame:
    sigma, degenerate = tangent2d_batch(np.asarray(D, dtype=float))
    return TangentFrame(sigma=tuple(sigma[0]), degenerate=bool(degenerate[0]))


def tangent3d(D) -> TangentFrame:
    nu1, nu2, degenerate = tangent3d_batch(np.asarray(D, dtype=float))
    return TangentFrame(nu1=tuple(nu1[0]), nu2=tuple(nu2[0]), degenerate=bool(degenerate[0]))
