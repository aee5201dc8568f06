"""Samples of grid points, cover validation, realized-sample sets and witness search."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import prod

import numpy as np

from .. import thresholds
from ..errors import CoverInvalidError, EpsilonTooLargeError, UnsupportedGeometryError
from ..poset import antichain_rank
from ..samples import (
    LinearOrder,
    Sample,
    alternating_witness,
    h_values,
    monotone_chain,
    rho_multi,
    rho_single,
    sample_leq,
    sign_functions,
)
from .geometry import Cover, angles, default_epsilon, effective_epsilon, membership_matrix
from .grid import SphereGrid


def sign_matrix(cover: Cover, points: np.ndarray) -> np.ndarray:
    """Rows of +1/-1/0 giving the sample of each point."""
    plus = membership_matrix(points, cover.sets, 1)
    minus = membership_matrix(points, cover.sets, -1)
    both = plus & minus
    if both.any():
        i, j = map(int, np.argwhere(both)[0])
        raise CoverInvalidError(
            f"point {np.asarray(points)[i].tolist()} lies in both {cover.names[j]} and its antipode"
        )
    return plus.astype(np.int8) - minus.astype(np.int8)


def sample_at(u, cover: Cover) -> Sample:
    row = sign_matrix(cover, np.asarray(u, float)[None, :])[0]
    return Sample(cover.index, tuple(int(v) for v in row))


def grid_samples(cover: Cover, grid: SphereGrid) -> list[Sample]:
    cache: dict[bytes, Sample] = {}
    out = []
    for row in sign_matrix(cover, grid.points):
        key = row.tobytes()
        if key not in cache:
            cache[key] = Sample(cover.index, tuple(int(v) for v in row))
        out.append(cache[key])
    return out


# -- validation --------------------------------------------------------------------

@dataclass
class CheckReport:
    passed: bool
    method: str
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"pass": self.passed, "method": self.method, "witness": self.witness, "details": self.details}


def check_antipodal_free(cover: Cover, grid: SphereGrid | None = None) -> CheckReport:
    """Exact test for cap unions; span/zero-sum certificate plus optional sweep for Voronoi cells."""
    for F in cover.sets:
        if not F.is_caps:
            continue
        g = F.geometry
        c, r = g.centers(), g.radii()
        ang = angles(c, -c)
        bad = np.argwhere(ang <= r[:, None] + r[None, :])
        if len(bad):
            i, j = map(int, bad[0])
            # a point of F meeting -F lies on the arc between c_i and -c_j
            return CheckReport(False, "cap-pairs", {
                "set": F.name, "caps": [i, j],
                "angle": float(ang[i, j]), "radius_sum": float(r[i] + r[j]),
            })
    details = {}
    fam = cover.voronoi_family()
    method = "cap-pairs"
    if fam is not None:
        method = "cap-pairs+voronoi-certificate" if any(F.is_caps for F in cover.sets) else "voronoi-certificate"
        rank = int(np.linalg.matrix_rank(fam, tol=1e-9))
        resid = float(np.max(np.abs(np.sum(fam, axis=0))))
        details.update({"family_rank": rank, "zero_sum_residual": resid})
        if rank != cover.dimension + 1 or resid > 1e-9:
            return CheckReport(False, method, {"reason": "family does not span or does not sum to zero"}, details)
    if grid is not None:
        plus = membership_matrix(grid.points, cover.sets, 1)
        minus = membership_matrix(grid.points, cover.sets, -1)
        both = np.argwhere(plus & minus)
        details["grid_sweep"] = len(grid)
        if len(both):
            i, j = map(int, both[0])
            return CheckReport(False, method + "+grid",
                               {"set": cover.names[j], "point": grid.points[i].tolist()}, details)
        method += "+grid"
    return CheckReport(True, method, None, details)


def check_coverage(cover: Cover, grid: SphereGrid) -> CheckReport:
    """Every grid point has a nonempty sample; flags when only F and -F together cover."""
    plus = membership_matrix(grid.points, cover.sets, 1)
    minus = membership_matrix(grid.points, cover.sets, -1)
    holes = np.flatnonzero(~(plus.any(axis=1) | minus.any(axis=1)))
    half_only = np.flatnonzero(~plus.any(axis=1))
    details = {
        "grid_size": len(grid),
        "uncovered": [int(i) for i in holes],
        "half_cover": bool(len(holes) == 0 and len(half_only) > 0),
    }
    witness = {"point": grid.points[holes[0]].tolist()} if len(holes) else None
    return CheckReport(len(holes) == 0, "grid", witness, details)


def compute_realized_samples(cover: Cover, grid: SphereGrid) -> frozenset[Sample]:
    return frozenset(grid_samples(cover, grid))


def is_in_interval_closure(s: Sample, realized) -> bool:
    if s.is_zero:
        return False
    return (any(sample_leq(t, s) for t in realized)
            and any(sample_leq(s, t) for t in realized))


def chi_support_matrix(cover: Cover, points: np.ndarray, epsilon: float | None = None) -> np.ndarray:
    """Rows of +1/-1/0: the sign ``y`` with ``d(u, yF) < eps``, i.e. the support of chi at each point."""

    if not cover.all_caps:
        raise UnsupportedGeometryError("chi needs a cap-union cover")
    eps = effective_epsilon(cover) if epsilon is None else epsilon
    pts = np.atleast_2d(np.asarray(points, float))
    out = np.zeros((pts.shape[0], len(cover.sets)), dtype=np.int8)
    for j, F in enumerate(cover.sets):
        g = F.geometry
        near = {}
        for y in (1, -1):
            dist = np.min(np.maximum(angles(y * pts, g.centers()) - g.radii()[None, :], 0.0), axis=1)
            near[y] = 1.0 - dist / eps > 0
        if np.any(near[1] & near[-1]):
            raise EpsilonTooLargeError(F.name)
        out[:, j] = near[1].astype(np.int8) - near[-1].astype(np.int8)
    return out


def check_epsilon_claim(cover: Cover, grid: SphereGrid, epsilon: float | None = None) -> list[int]:
    """Grid indices ``u`` whose chi-support is contained in no realized sample."""
    realized = np.unique(sign_matrix(cover, grid.points), axis=0)
    supp = chi_support_matrix(cover, grid.points, epsilon)
    keys, inverse = np.unique(supp, axis=0, return_inverse=True)
    ok = np.zeros(len(keys), dtype=bool)
    for i, row in enumerate(keys):
        mask = row != 0
        ok[i] = bool(np.any(np.all(realized[:, mask] == row[mask], axis=1)))
    return [int(i) for i in np.flatnonzero(~ok[np.ravel(inverse)])]


def calibrate_epsilon(cover: Cover, grid: SphereGrid, start: float | None = None,
                      max_halvings: int = 40) -> float:
    """Largest ``start / 2**k`` for which the chi-support claim holds on ``grid``."""
    eps = default_epsilon(cover) if start is None else start
    for _ in range(max_halvings + 1):
        try:
            if not check_epsilon_claim(cover, grid, eps):
                return eps
        except EpsilonTooLargeError:
            pass
        eps /= 2.0
    raise CoverInvalidError(f"no epsilon down to {eps * 2:.3g} satisfies the support claim on this grid")


# -- witness search ------------------------------------------------------------------

def r_label(r) -> str:
    return "".join("+" if v > 0 else "-" for v in r)


def _single_metrics(s: Sample, order: LinearOrder):
    return (rho_single(s, order).length,)


def _multi_metrics(s: Sample, orders):
    if s.is_zero:
        return (0, 0, -1)
    h = h_values(s, orders)
    rank0 = antichain_rank(rho_multi(s, orders).antichain) if s.is_realizable else -1
    return (prod(h.values()), max(h.values()), rank0)


def _scan_chunk(args):
    cover, points, mode = args
    cache: dict[bytes, tuple] = {}
    out = []
    for row in sign_matrix(cover, points):
        key = row.tobytes()
        if key not in cache:
            s = Sample(cover.index, tuple(int(v) for v in row))
            cache[key] = (_single_metrics(s, cover.orders[0]) if mode == "single"
                          else _multi_metrics(s, cover.orders))
        out.append(cache[key])
    return out


def scan(cover: Cover, grid: SphereGrid, mode: str = "single", workers: int = 1,
         chunk: int | None = None) -> np.ndarray:
    """Per-point metrics: ``(length,)`` in single mode, ``(product, max_h, rank_P0)`` in multi mode.

    Rows are independent, so the result does not depend on ``workers`` or ``chunk``.
    """
    pts = grid.points
    if chunk is None:
        chunk = max(256, -(-len(pts) // (4 * workers)))
    jobs = [(cover, pts[i:i + chunk], mode) for i in range(0, len(pts), chunk)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_scan_chunk, jobs))
    else:
        parts = [_scan_chunk(j) for j in jobs]
    return np.array([m for part in parts for m in part], dtype=np.int64)


@dataclass
class WitnessReport:
    mode: str
    dimension: int
    grid_size: int
    orders: list
    witness_index: int
    witness_point: list
    sample: dict
    achieved: dict
    threshold: dict
    passed: bool
    pattern: dict | None = None
    chain: list | None = None
    h_values: dict | None = None
    chains: dict | None = None
    rank_witness: dict | None = None

    def to_json(self) -> dict:
        out = {
            "mode": self.mode,
            "dimension": self.dimension,
            "grid_size": self.grid_size,
            "orders": self.orders,
            "witness_index": self.witness_index,
            "witness_point": self.witness_point,
            "sample": self.sample,
            "achieved": self.achieved,
            "threshold": self.threshold,
            "pass": self.passed,
        }
        for key in ("pattern", "chain", "h_values", "chains", "rank_witness"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out


def witness_search(cover: Cover, grid: SphereGrid, mode: str = "single", workers: int = 1,
                   metrics: np.ndarray | None = None) -> WitnessReport:
    """Scan the grid for the best point; ties go to the first point in grid order."""
    if mode not in ("single", "multi"):
        raise ValueError(f"mode must be 'single' or 'multi', got {mode!r}")
    if grid.n != cover.dimension:
        raise CoverInvalidError(f"grid is on S^{grid.n}, cover on S^{cover.dimension}")
    af = check_antipodal_free(cover)
    if not af.passed:
        raise CoverInvalidError(f"cover is not antipodal-free: {af.witness}")
    if mode == "multi" and len(cover.orders) < 2:
        raise CoverInvalidError("multi-order search needs at least two orders")
    if metrics is None:
        metrics = scan(cover, grid, mode, workers)
    n = cover.dimension
    best = int(np.argmax(metrics[:, 0]))
    u = grid.points[best]
    s = sample_at(u, cover)
    common = dict(
        dimension=n, grid_size=len(grid), orders=[o.to_json() for o in cover.orders],
        witness_index=best, witness_point=u.tolist(), sample=s.to_json(),
    )
    if mode == "single":
        order = cover.orders[0]
        pat = rho_single(s, order)
        need = thresholds.kfcl_length(n)
        return WitnessReport(
            mode="single-order", achieved={"pattern_length": pat.length},
            threshold={"pattern_length": need}, passed=pat.length >= need,
            pattern=pat.to_json(), chain=alternating_witness(s, order), **common,
        )
    d = len(cover.orders)
    h = h_values(s, cover.orders)
    prod_h, max_h = int(metrics[best, 0]), int(metrics[best, 1])
    rbest = int(np.argmax(metrics[:, 2]))
    rank0 = int(metrics[rbest, 2])
    need = {
        "product": thresholds.product_bound(n),
        "max_h": thresholds.multi_order_length(n, d),
        "rank_P": thresholds.lemma_rank(n),
    }
    ok = prod_h >= need["product"] and max_h >= need["max_h"] and rank0 - 1 >= need["rank_P"]
    return WitnessReport(
        mode="multi-order",
        achieved={"product": prod_h, "max_h": max_h, "rank_P0": rank0, "rank_P": rank0 - 1},
        threshold=need, passed=bool(ok),
        h_values={r_label(r): v for r, v in h.items()},
        chains={r_label(r): monotone_chain(s, cover.orders, r) for r in sign_functions(d)},
        rank_witness={"index": rbest, "point": grid.points[rbest].tolist(), "rank_P0": rank0},
        **common,
    )
