"""Antipode-closed point sets on S^n.

Every grid stores a "half" of representatives followed by their exact negations,
so ``points[antipode[i]] == -points[i]`` holds bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm, qmc


@dataclass(frozen=True, eq=False)
class SphereGrid:
    n: int
    points: np.ndarray
    antipode: np.ndarray

    @classmethod
    def from_half(cls, n: int, half: np.ndarray) -> "SphereGrid":
        half = np.asarray(half, dtype=float)
        if half.ndim != 2 or half.shape[1] != n + 1:
            raise ValueError(f"expected points with {n + 1} coordinates")
        h = half.shape[0]
        pts = np.vstack([half, -half])
        anti = np.concatenate([np.arange(h, 2 * h), np.arange(h)])
        pts.setflags(write=False)
        anti.setflags(write=False)
        return cls(n, pts, anti)

    def __len__(self):
        return self.points.shape[0]


def circle_half(count: int) -> np.ndarray:
    """First half of a uniform angular grid with ``count`` (even) points on S^1."""
    if count < 2 or count % 2:
        raise ValueError("the circle grid needs an even number of points")
    theta = 2.0 * np.pi * np.arange(count // 2) / count
    return np.column_stack([np.cos(theta), np.sin(theta)])


def halton_half(n: int, count: int, seed: int) -> np.ndarray:
    """``count`` scrambled-Halton points pushed to S^n through the Gaussian map."""
    sampler = qmc.Halton(d=n + 1, scramble=True, seed=np.random.default_rng(seed))
    u = sampler.random(count)
    g = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    return g / np.sqrt(np.sum(g * g, axis=1))[:, None]


def make_grid(n: int, resolution: int, seed: int = 0, anchors: np.ndarray | None = None) -> SphereGrid:
    """``resolution`` base points (uniform on S^1, symmetrized Halton otherwise) plus anchors.

    Anchors are extra representatives appended after the base points; each one
    also gets its exact negation.
    """
    if resolution < 2 or resolution % 2:
        raise ValueError("grid resolution must be an even number >= 2")
    half = circle_half(resolution) if n == 1 else halton_half(n, resolution // 2, seed)
    if anchors is not None and len(anchors):
        half = np.vstack([half, np.asarray(anchors, float)])
    return SphereGrid.from_half(n, half)
