"""Builtin cover generators."""
from __future__ import annotations

import math
import re

import numpy as np

from ..errors import ConfigError, CoverInvalidError
from ..samples import IndexSet, LinearOrder
from ..sphere.geometry import Cap, CapUnion, Cover, CoverSet, VoronoiCell, angles
from ..sphere.grid import make_grid
from ..sphere.search import calibrate_epsilon, check_antipodal_free, check_coverage

RNG_NAME = "numpy.random.Generator(PCG64)"


def simplex_vertices(n: int) -> np.ndarray:
    """The n + 2 unit vertices of a regular simplex inscribed in S^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = n + 2
    pts = np.eye(k) - 1.0 / k
    basis = np.zeros((n + 1, k))
    for j in range(1, k):
        basis[j - 1, :j] = 1.0
        basis[j - 1, j] = -j
        basis[j - 1] /= math.sqrt(j * (j + 1))
    v = pts @ basis.T
    return v / np.linalg.norm(v, axis=1)[:, None]


def simplex_voronoi(n: int) -> Cover:
    verts = simplex_vertices(n)
    family = tuple(tuple(float(x) for x in v) for v in verts)
    sets = tuple(CoverSet(f"F{i + 1}", VoronoiCell(family[i], family)) for i in range(len(family)))
    return Cover(n, sets)


def caps_demo_s1() -> Cover:
    """Three closed 140-degree arcs centred at 90, 210 and 330 degrees."""
    sets = []
    for i, deg in enumerate((90.0, 210.0, 330.0)):
        t = math.radians(deg)
        sets.append(CoverSet(f"A{i + 1}", CapUnion((Cap((math.cos(t), math.sin(t)), math.radians(70.0)),))))
    return Cover(1, tuple(sets))


# (name, sign, distance from the point (1, 0) to the signed arc); radius 0.3 each
_CHI_DEMO = (
    ("F1", 1, 0.35),
    ("F2", -1, 0.37),
    ("F3", -1, 0.10),
    ("F4", 1, -0.20),
    ("F5", -1, -0.31),
)
CHI_DEMO_POINT = (1.0, 0.0)
CHI_DEMO_EPSILON = 0.1


def chi_demo_s1() -> Cover:
    """Five arcs whose smoothed membership at (1, 0) is (0.5, 0.3, 1, 1, 0.9) with eps = 0.1.

    Signs are (+, -, -, +, -), so under F1 < .. < F5 the layers map to
    patterns [4], [4], [-3], [-2].
    """
    sets = []
    for name, y, offset in _CHI_DEMO:
        t = offset if y > 0 else math.pi + offset
        sets.append(CoverSet(name, CapUnion((Cap((math.cos(t), math.sin(t)), 0.3),))))
    return Cover(1, tuple(sets), epsilon=CHI_DEMO_EPSILON)


def caps_random(n: int, k: int, seed: int, probe: int = 4000, margin: float = 0.05) -> Cover:
    """``k`` equal-radius caps with random centres, sized to cover a probe grid.

    The cover carries the largest halving of the default epsilon for which the
    chi-support claim holds on the (anchored) probe grid.

    Raises ``CoverInvalidError`` when the required radius reaches pi/2; try
    another seed or more caps.
    """
    if k < n + 2:
        raise CoverInvalidError(f"an antipodal-free cover of S^{n} needs at least {n + 2} sets")
    rng = np.random.default_rng(seed)
    centers = rng.standard_normal((k, n + 1))
    centers /= np.linalg.norm(centers, axis=1)[:, None]
    grid = make_grid(n, probe, seed)
    radius = float(np.max(np.min(angles(grid.points, centers), axis=1))) + margin
    if radius >= math.pi / 2:
        raise CoverInvalidError(
            f"caps-random({n}, {k}, seed={seed}) needs radius {radius:.4f} >= pi/2; retry with a new seed"
        )
    sets = tuple(CoverSet(f"C{i + 1}", CapUnion((Cap(tuple(c), radius),))) for i, c in enumerate(centers))
    cover = Cover(n, sets)
    if not check_antipodal_free(cover).passed or not check_coverage(cover, grid).passed:
        raise CoverInvalidError(f"caps-random({n}, {k}, seed={seed}) failed validation; retry with a new seed")
    # the quarter-gap default is too coarse for overlapping random caps; ship a checked value
    return cover.with_epsilon(calibrate_epsilon(cover, make_grid(n, probe, seed, anchors=cover.anchor_points())))


_BUILTINS = {
    "simplex-voronoi": (simplex_voronoi, 1),
    "caps-random": (caps_random, 3),
    "caps-demo-s1": (caps_demo_s1, 0),
    "chi-demo-s1": (chi_demo_s1, 0),
}

_SPEC = re.compile(r"^([a-z0-9-]+?)(?:[:(]([0-9,\s]*)\)?)?$")


def builtin_cover(name: str, *params: int) -> Cover:
    if name not in _BUILTINS:
        raise ConfigError(f"unknown builtin cover {name!r}; known: {', '.join(sorted(_BUILTINS))}")
    fn, arity = _BUILTINS[name]
    if len(params) != arity:
        raise ConfigError(f"builtin {name!r} takes {arity} integer parameter(s), got {len(params)}")
    return fn(*params)


def parse_builtin(spec: str) -> tuple[str, tuple[int, ...]] | None:
    """``"simplex-voronoi:2"`` or ``"caps-random(2,6,7)"`` -> (name, params); None if not builtin."""
    m = _SPEC.match(spec.strip())
    if not m or m.group(1) not in _BUILTINS:
        return None
    raw = m.group(2)
    params = tuple(int(p) for p in raw.split(",") if p.strip()) if raw else ()
    return m.group(1), params


def random_orders(index: IndexSet, count: int, seed: int) -> tuple[LinearOrder, ...]:
    rng = np.random.default_rng(seed)
    return tuple(LinearOrder.random(index, rng) for _ in range(count))
