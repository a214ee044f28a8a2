"""Magnitude measurements, rays, and sign patterns.

The magnitude map sends x to (|<x, f_i>|)_i. It cannot distinguish x from
c*x for a unimodular scalar c (a sign in the real case), so its natural
domain is the set of rays {c*x : |c| = 1}. Sign patterns encode index
subsets S as bitmasks; flipping the coefficients on S is the coefficient-
space symmetry that makes two rays collide.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .frames import Frame, analysis
from .linalg import DEFAULT_TOL, Tolerance

__all__ = [
    "MAGNITUDE_KEYS",
    "SignPattern",
    "magnitude_map",
    "canonical_ray",
    "ray_equal",
    "apply_sign_pattern",
    "project_vanishing",
    "measurement_to_dict",
    "measurement_from_dict",
    "save_measurement",
    "load_measurement",
]


def magnitude_map(frame: Frame, x) -> np.ndarray:
    """Magnitudes of the analysis coefficients of x, length M, all >= 0."""
    return np.abs(analysis(frame, x))


def canonical_ray(x, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Canonical representative of the ray through x.

    The vector is rescaled by a unimodular factor so that its first entry
    of modulus above residual_eps becomes a positive real. Vectors with no
    such entry (the zero ray, up to tolerance) are returned unchanged.
    """
    arr = np.asarray(x).copy()
    for v in arr:
        mag = abs(v)
        if mag > tol.residual_eps:
            out = arr * (np.conj(v) / mag)
            if not np.iscomplexobj(arr):
                out = out.real
            return out
    return arr


def ray_equal(x, y, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether x and y generate the same ray.

    Tests min over unimodular c of ||x - c*y|| against
    residual_eps * max(||x||, 1). The minimizing c is <x, y>/|<x, y>| (and
    any c when the inner product vanishes).
    """
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {y.shape}")
    scale = max(float(np.linalg.norm(x)), 1.0)
    if np.iscomplexobj(x) or np.iscomplexobj(y):
        ip = np.vdot(y, x)  # = <x, y>
        c = ip / abs(ip) if abs(ip) > 0.0 else 1.0
        dist = float(np.linalg.norm(x - c * y))
    else:
        dist = min(
            float(np.linalg.norm(x - y)),
            float(np.linalg.norm(x + y)),
        )
    return dist <= tol.residual_eps * scale


@dataclass(frozen=True)
class SignPattern:
    """An index subset S of {0, ..., size-1} stored as a bitmask.

    Acting on coefficient vectors, the pattern flips the sign of every
    entry whose index lies in S.
    """

    mask: int
    size: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"size must be >= 1, got {self.size}")
        if not 0 <= self.mask < (1 << self.size):
            raise ValueError(f"mask {self.mask} out of range for size {self.size}")

    @classmethod
    def from_indices(cls, indices, size: int) -> "SignPattern":
        mask = 0
        for i in indices:
            if not 0 <= i < size:
                raise ValueError(f"index {i} out of range for size {size}")
            mask |= 1 << i
        return cls(mask, size)

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.size) if self.mask >> i & 1)

    def contains(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def complement(self) -> "SignPattern":
        return SignPattern(self.mask ^ ((1 << self.size) - 1), self.size)

    def signs(self) -> np.ndarray:
        """Vector of +-1 entries: -1 exactly on the subset."""
        out = np.ones(self.size)
        for i in self.indices():
            out[i] = -1.0
        return out


def apply_sign_pattern(pattern: SignPattern, a) -> np.ndarray:
    """Flip the entries of a coefficient vector on the subset."""
    a = np.asarray(a)
    if a.shape != (pattern.size,):
        raise ValueError(f"expected length {pattern.size}, got shape {a.shape}")
    return pattern.signs() * a


def project_vanishing(pattern: SignPattern, a) -> np.ndarray:
    """Project onto the coordinate subspace vanishing on the subset.

    Equals (a + apply_sign_pattern(pattern, a)) / 2: entries on S are
    zeroed, entries off S are kept. Fixed points are exactly the vectors
    already vanishing on S.
    """
    a = np.asarray(a)
    return 0.5 * (a + apply_sign_pattern(pattern, a))


MAGNITUDE_KEYS = ("m", "magnitudes")


def measurement_to_dict(magnitudes) -> dict:
    a = np.asarray(magnitudes, dtype=np.float64)
    if a.ndim != 1:
        raise ValueError("magnitudes must be a 1-d array")
    if np.any(a < 0.0) or not np.all(np.isfinite(a)):
        raise ValueError("magnitudes must be finite and nonnegative")
    return {"m": int(a.shape[0]), "magnitudes": [float(v) for v in a]}


def measurement_from_dict(data: dict) -> np.ndarray:
    for key in MAGNITUDE_KEYS:
        if key not in data:
            raise ValueError(f"measurement file is missing key {key!r}")
    a = np.asarray([float(v) for v in data["magnitudes"]], dtype=np.float64)
    if a.shape[0] != int(data["m"]):
        raise ValueError(
            f"magnitude block has length {a.shape[0]}, header says {data['m']}"
        )
    if np.any(a < 0.0) or not np.all(np.isfinite(a)):
        raise ValueError("magnitudes must be finite and nonnegative")
    return a


def save_measurement(magnitudes, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(measurement_to_dict(magnitudes), fh, indent=2)
        fh.write("\n")


def load_measurement(path: str | os.PathLike) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return measurement_from_dict(json.load(fh))
