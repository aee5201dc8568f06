"""Points on S^n, closed cover sets and covers, plus the cover file format.

Two geometries are supported: finite unions of closed geodesic caps, and closed
Voronoi cells of a spanning zero-sum vector family (``u`` lies in the cell of
``v`` iff ``<u, v>`` is maximal over the family). Every membership test is a
non-strict inequality with slack ``TOL``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import CoverInvalidError, UnsupportedGeometryError
from ..samples import IndexSet, LinearOrder

TOL = 1e-12


def unit_point(coords, normalize: bool = False) -> np.ndarray:
    u = np.asarray(coords, dtype=float)
    if u.ndim != 1 or u.size < 2:
        raise ValueError("a point on S^n needs n + 1 >= 2 coordinates")
    norm = float(np.sqrt(np.sum(u * u)))
    if normalize:
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return u / norm
    if abs(norm - 1.0) > TOL:
        raise ValueError(f"point {coords} has norm {norm}, not 1")
    return u


def _rowdot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # elementwise product then sum: same summation order for every row and
    # exactly odd under negation, unlike a BLAS matmul
    return np.sum(a[:, None, :] * b[None, :, :], axis=-1)


def angles(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Geodesic angles between every row of ``points`` and every row of ``centers``."""
    points = np.atleast_2d(points)
    centers = np.atleast_2d(centers)
    diff = points[:, None, :] - centers[None, :, :]
    summ = points[:, None, :] + centers[None, :, :]
    return 2.0 * np.arctan2(np.sqrt(np.sum(diff * diff, -1)), np.sqrt(np.sum(summ * summ, -1)))


def angle(u, c) -> float:
    return float(angles(np.asarray(u, float), np.asarray(c, float))[0, 0])


@dataclass(frozen=True)
class Cap:
    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        center = tuple(float(x) for x in unit_point(self.center))
        if not 0.0 < self.radius < math.pi:
            raise ValueError(f"cap radius must lie in (0, pi), got {self.radius}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True)
class CapUnion:
    caps: tuple[Cap, ...]

    def __post_init__(self):
        if not self.caps:
            raise ValueError("a cap union needs at least one cap")
        object.__setattr__(self, "caps", tuple(self.caps))

    @property
    def dim(self) -> int:
        return len(self.caps[0].center) - 1

    def centers(self) -> np.ndarray:
        return np.array([c.center for c in self.caps])

    def radii(self) -> np.ndarray:
        return np.array([c.radius for c in self.caps])


@dataclass(frozen=True)
class VoronoiCell:
    """Cell of ``vertex`` among ``family`` (which contains ``vertex``)."""

    vertex: tuple[float, ...]
    family: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        vertex = tuple(float(x) for x in self.vertex)
        family = tuple(tuple(float(x) for x in v) for v in self.family)
        if vertex not in family:
            raise ValueError("a Voronoi vertex must belong to its generating family")
        object.__setattr__(self, "vertex", vertex)
        object.__setattr__(self, "family", family)

    @property
    def dim(self) -> int:
        return len(self.vertex) - 1


@dataclass(frozen=True)
class CoverSet:
    name: str
    geometry: CapUnion | VoronoiCell

    @property
    def is_caps(self) -> bool:
        return isinstance(self.geometry, CapUnion)


def membership(u, F: CoverSet, y: int = 1) -> bool:
    """Whether ``u`` lies in ``y * F``."""
    return bool(membership_matrix(np.asarray(u, float)[None, :], [F], y)[0, 0])


def membership_matrix(points: np.ndarray, sets: Sequence[CoverSet], y: int = 1) -> np.ndarray:
    """Boolean matrix: rows are points, columns are sets, entry = point in ``y * F``."""
    pts = y * np.atleast_2d(np.asarray(points, float))
    out = np.zeros((pts.shape[0], len(sets)), dtype=bool)
    vor_cache: dict = {}
    for j, F in enumerate(sets):
        g = F.geometry
        if isinstance(g, CapUnion):
            ang = angles(pts, g.centers())
            out[:, j] = np.any(ang <= g.radii()[None, :] + TOL, axis=1)
        else:
            if g.family not in vor_cache:
                fam = np.array(g.family)
                ip = _rowdot(pts, fam)
                vor_cache[g.family] = (ip, np.max(ip, axis=1))
            ip, best = vor_cache[g.family]
            k = g.family.index(g.vertex)
            out[:, j] = ip[:, k] >= best - TOL
    return out


def distance_to_set(u, F: CoverSet, y: int = 1) -> float:
    """Geodesic distance from ``u`` to ``y * F``; cap unions only."""
    g = F.geometry
    if not isinstance(g, CapUnion):
        raise UnsupportedGeometryError(f"{F.name}: distance is only available for cap unions")
    pts = y * np.asarray(u, float)[None, :]
    ang = angles(pts, g.centers())[0]
    return float(np.min(np.maximum(ang - g.radii(), 0.0)))


@dataclass(frozen=True)
class Cover:
    dimension: int
    sets: tuple[CoverSet, ...]
    orders: tuple[LinearOrder, ...] = ()
    epsilon: float | None = None
    index: IndexSet = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        sets = tuple(self.sets)
        object.__setattr__(self, "sets", sets)
        if not sets:
            raise CoverInvalidError("a cover needs at least one set")
        index = IndexSet.of(F.name for F in sets)
        object.__setattr__(self, "index", index)
        for F in sets:
            if F.geometry.dim != self.dimension:
                raise CoverInvalidError(f"{F.name} lives on S^{F.geometry.dim}, cover is on S^{self.dimension}")
        vertices = tuple(F.geometry.vertex for F in sets if not F.is_caps)
        for F in sets:
            if not F.is_caps and set(F.geometry.family) != set(vertices):
                raise CoverInvalidError(f"{F.name}: Voronoi family must be the cover's Voronoi vertices")
        orders = tuple(self.orders) or (LinearOrder.identity(index),)
        for o in orders:
            if o.index.names != index.names:
                raise CoverInvalidError("every order must be on the cover's set names")
        object.__setattr__(self, "orders", orders)
        if self.epsilon is not None and not self.epsilon > 0:
            raise CoverInvalidError("epsilon must be positive")

    @property
    def names(self) -> tuple[str, ...]:
        return self.index.names

    @property
    def all_caps(self) -> bool:
        return all(F.is_caps for F in self.sets)

    def voronoi_family(self) -> np.ndarray | None:
        vs = [F.geometry.vertex for F in self.sets if not F.is_caps]
        return np.array(vs) if vs else None

    def with_orders(self, orders: Sequence[LinearOrder]) -> "Cover":
        return Cover(self.dimension, self.sets, tuple(orders), self.epsilon)

    def with_epsilon(self, epsilon: float | None) -> "Cover":
        return Cover(self.dimension, self.sets, self.orders, epsilon)

    def __getitem__(self, name: str) -> CoverSet:
        return self.sets[self.index.position(name)]

    def anchor_points(self) -> np.ndarray:
        """One representative per antipodal pair of structurally special points.

        Voronoi families contribute the normalized subset sums that contain the
        first vertex (their negations are the complementary sums); cap sets
        contribute their centers.
        """
        out = []
        fam = self.voronoi_family()
        if fam is not None:
            k = len(fam)
            for mask in range(1, 1 << (k - 1)):
                pick = [0] + [i + 1 for i in range(k - 1) if mask >> i & 1]
                if len(pick) == k:
                    continue
                out.append(np.sum(fam[pick], axis=0))
            out.append(fam[0].copy())
        for F in self.sets:
            if F.is_caps:
                out.extend(np.array(c.center) for c in F.geometry.caps)
        pts = [v / np.sqrt(np.sum(v * v)) for v in out if np.sqrt(np.sum(v * v)) > 1e-9]
        return np.array(pts) if pts else np.zeros((0, self.dimension + 1))


def antipodal_gap(F: CoverSet) -> float:
    """Geodesic distance between ``F`` and ``-F`` for cap unions (0 when they meet)."""
    g = F.geometry
    if not isinstance(g, CapUnion):
        raise UnsupportedGeometryError(f"{F.name}: antipodal gap needs a cap union")
    c = g.centers()
    ang = angles(c, -c)
    rr = g.radii()[:, None] + g.radii()[None, :]
    return float(np.min(np.maximum(ang - rr, 0.0)))


def default_epsilon(cover: Cover) -> float:
    """A quarter of the smallest antipodal gap over the cover's sets."""
    if not cover.all_caps:
        raise UnsupportedGeometryError("epsilon is only defined for cap-union covers")
    gap = min(antipodal_gap(F) for F in cover.sets)
    if gap <= 0:
        raise CoverInvalidError("cover is not antipodal-free; no epsilon exists")
    return gap / 4.0


def effective_epsilon(cover: Cover) -> float:
    return cover.epsilon if cover.epsilon is not None else default_epsilon(cover)


# -- file format -----------------------------------------------------------------

def cover_from_json(data: dict) -> Cover:
    try:
        n = int(data["dimension"])
        raw_sets = data["sets"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CoverInvalidError(f"cover needs 'dimension' and 'sets': {exc}") from None
    vertices = []
    for item in raw_sets:
        geom = item.get("geometry", {})
        if "voronoi_vertex" in geom:
            vertices.append(tuple(float(x) for x in geom["voronoi_vertex"]))
    sets = []
    for item in raw_sets:
        geom = item.get("geometry", {})
        name = str(item["name"])
        try:
            if "caps" in geom:
                caps = tuple(Cap(tuple(c["center"]), float(c["radius"])) for c in geom["caps"])
                sets.append(CoverSet(name, CapUnion(caps)))
            elif "voronoi_vertex" in geom:
                vertex = tuple(float(x) for x in geom["voronoi_vertex"])
                sets.append(CoverSet(name, VoronoiCell(vertex, tuple(vertices))))
            else:
                raise CoverInvalidError(f"set {name!r} needs 'caps' or 'voronoi_vertex' geometry")
        except (KeyError, ValueError) as exc:
            raise CoverInvalidError(f"set {name!r}: {exc}") from None
    index = IndexSet.of(s.name for s in sets)
    try:
        orders = tuple(LinearOrder(index, tuple(o)) for o in data.get("orders") or ())
    except ValueError as exc:
        raise CoverInvalidError(str(exc)) from None
    eps = data.get("epsilon")
    return Cover(n, tuple(sets), orders, None if eps is None else float(eps))


def cover_to_json(cover: Cover) -> dict:
    sets = []
    for F in cover.sets:
        g = F.geometry
        if isinstance(g, CapUnion):
            geom = {"caps": [{"center": list(c.center), "radius": c.radius} for c in g.caps]}
        else:
            geom = {"voronoi_vertex": list(g.vertex)}
        sets.append({"name": F.name, "geometry": geom})
    out = {
        "dimension": cover.dimension,
        "sets": sets,
        "orders": [o.to_json() for o in cover.orders],
    }
    if cover.epsilon is not None:
        out["epsilon"] = cover.epsilon
    return out


def load_cover(path: str | Path) -> Cover:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CoverInvalidError(f"{path}: not valid JSON ({exc})") from None
    return cover_from_json(data)


def save_cover(cover: Cover, path: str | Path):
    Path(path).write_text(json.dumps(cover_to_json(cover), indent=2) + "\n")
