"""The epsilon-smoothed signed membership function and its layer-cake decomposition."""
from __future__ import annotations

import numpy as np

from ..errors import EpsilonTooLargeError, UnsupportedGeometryError
from ..samples import Sample
from .geometry import Cover, distance_to_set, effective_epsilon


def chi_values(u, cover: Cover, epsilon: float | None = None) -> dict[tuple[str, int], float]:
    """``max(1 - d(u, yF) / eps, 0)`` for every set ``F`` and sign ``y``."""
    if not cover.all_caps:
        raise UnsupportedGeometryError("chi needs a cap-union cover")
    eps = effective_epsilon(cover) if epsilon is None else epsilon
    u = np.asarray(u, float)
    out = {}
    for F in cover.sets:
        for y in (1, -1):
            out[(F.name, y)] = max(1.0 - distance_to_set(u, F, y) / eps, 0.0)
        if out[(F.name, 1)] > 0 and out[(F.name, -1)] > 0:
            raise EpsilonTooLargeError(F.name)
    return out


def _layer(cover: Cover, chi: dict, level: float) -> Sample:
    return Sample.from_mapping(cover.index, {F: y for (F, y), v in chi.items() if v >= level})


def chi_decompose(u, cover: Cover, epsilon: float | None = None) -> list[tuple[float, Sample]]:
    """Write ``chi_u`` as a convex combination over an increasing subsample chain.

    Returns ``[(alpha_1, s_1), ..., (alpha_q, s_q)]`` with ``s_1 < .. < s_q``,
    ``s_1 = {chi = 1}`` and ``s_q`` the support of ``chi_u``. When ``u`` is in no
    set, ``s_1`` is the zero sample.
    """
    chi = chi_values(u, cover, epsilon)
    levels = sorted({v for v in chi.values() if v > 0} | {1.0}, reverse=True)
    out = []
    for i, t in enumerate(levels):
        below = levels[i + 1] if i + 1 < len(levels) else 0.0
        out.append((t - below, _layer(cover, chi, t)))
    return out


def reconstruct(terms: list[tuple[float, Sample]]) -> dict[tuple[str, int], float]:
    """Evaluate ``sum alpha_i [ (F, y) in s_i ]`` on every signed index."""
    index = terms[0][1].index
    out = {(F, y): 0.0 for F in index.names for y in (1, -1)}
    for alpha, s in terms:
        for key in s.pairs():
            out[key] += alpha
    return out
