"""Experiment orchestration and machine-readable reports."""
from __future__ import annotations

import csv
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import thresholds
from ..errors import ConfigError, CoverInvalidError
from ..samples import observation_checks, rho_single
from ..sharpness import (
    ENUMERATION_LIMIT,
    SharpnessInstance,
    longest_common_monotone,
    longest_common_monotone_bruteforce,
)
from ..sphere import (
    check_antipodal_free,
    check_coverage,
    check_epsilon_claim,
    chi_decompose,
    chi_values,
    compute_realized_samples,
    load_cover,
    make_grid,
    reconstruct,
    scan,
    unit_point,
    witness_search,
)
from ..sphere.geometry import Cover, effective_epsilon
from .builtin import CHI_DEMO_POINT, RNG_NAME, builtin_cover, parse_builtin, random_orders
from .config import ExperimentConfig

log = logging.getLogger(__name__)

EXIT_PASS, EXIT_ERROR, EXIT_THRESHOLD = 0, 1, 2
CHI_TOL = 1e-12


@dataclass
class ExperimentReport:
    config: dict
    achieved: dict
    thresholds: dict
    passed: bool
    witnesses: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_json(self, include_timing: bool = False) -> dict:
        out = {
            "config": self.config,
            "rng": RNG_NAME,
            "achieved": self.achieved,
            "thresholds": self.thresholds,
            "pass": self.passed,
            "witnesses": self.witnesses,
            "details": self.details,
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return out

    def dumps(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_json(include_timing), indent=2, sort_keys=True) + "\n"

    @property
    def exit_code(self) -> int:
        if self.passed:
            return EXIT_PASS
        # a cover that fails validation is an input problem, not a theorem check
        return EXIT_ERROR if self.config.get("kind") == "validate-cover" else EXIT_THRESHOLD


def resolve_cover(spec: str) -> Cover:
    parsed = parse_builtin(spec)
    if parsed is not None:
        return builtin_cover(parsed[0], *parsed[1])
    if not Path(spec).exists():
        raise ConfigError(f"cover {spec!r} is neither a builtin name nor an existing file")
    return load_cover(spec)


def prepare_cover(config: ExperimentConfig) -> Cover:
    cover = resolve_cover(config.cover)
    if config.epsilon is not None:
        cover = cover.with_epsilon(config.epsilon)
    need = config.order_count
    if config.order_seed is not None:
        cover = cover.with_orders(random_orders(cover.index, need, config.order_seed))
    elif len(cover.orders) < need:
        raise ConfigError(
            f"experiment needs {need} orders but the cover defines {len(cover.orders)}; pass an order seed"
        )
    else:
        cover = cover.with_orders(cover.orders[:need])
    return cover


def prepare_grid(config: ExperimentConfig, cover: Cover):
    anchors = cover.anchor_points() if config.anchors else None
    return make_grid(cover.dimension, config.resolution, config.seed, anchors)


def _validate(cover: Cover, grid) -> dict:
    af = check_antipodal_free(cover)
    if not af.passed:
        raise CoverInvalidError(f"cover is not antipodal-free: {af.witness}")
    cov = check_coverage(cover, grid)
    if not cov.passed:
        raise CoverInvalidError(
            f"{len(cov.details['uncovered'])} grid points lie in no set or antipodal set, "
            f"first at {cov.witness['point']}"
        )
    return {"antipodal_free": af.to_json(), "coverage": {"pass": True, "half_cover": cov.details["half_cover"]}}


def _write_csv(path: str, grid, metrics: np.ndarray, columns: list[str]):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index"] + [f"x{k}" for k in range(grid.points.shape[1])] + columns)
        for i, (p, m) in enumerate(zip(grid.points, metrics)):
            w.writerow([i] + [repr(float(x)) for x in p] + [int(v) for v in m])


def _run_kfcl(config, cover, grid):
    details = _validate(cover, grid)
    metrics = scan(cover, grid, "single", config.workers)
    rep = witness_search(cover, grid, "single", metrics=metrics)
    order = cover.orders[0]
    realized = sorted(compute_realized_samples(cover, grid), key=lambda s: s.signs)
    failures = [s.to_json() for s in realized if not observation_checks(s, order).passed]
    lengths = [rho_single(s, order).length for s in realized]
    details.update({
        "realized_samples": len(realized),
        "observation_failures": failures,
        "min_pattern_length": min(lengths),
    })
    if config.csv:
        _write_csv(config.csv, grid, metrics, ["pattern_length"])
    n = cover.dimension
    achieved = {"pattern_length": rep.achieved["pattern_length"],
                "rank_H": rep.achieved["pattern_length"] - 2}
    need = {"pattern_length": thresholds.kfcl_length(n), "rank_H": n}
    ok = rep.passed and not failures
    return ExperimentReport(config.echo(), achieved, need, ok, {"best": rep.to_json()}, details)


def _run_multi(config, cover, grid):
    details = _validate(cover, grid)
    metrics = scan(cover, grid, "multi", config.workers)
    rep = witness_search(cover, grid, "multi", metrics=metrics)
    if config.csv:
        _write_csv(config.csv, grid, metrics, ["product_h", "max_h", "rank_P0"])
    n, d = cover.dimension, len(cover.orders)
    if config.kind == "lemma-rank":
        achieved = {"rank_P": rep.achieved["rank_P"], "rank_P0": rep.achieved["rank_P0"]}
        need = {"rank_P": thresholds.lemma_rank(n), "rank_P0": (n + 3) / 2}
        ok = achieved["rank_P"] >= need["rank_P"]
    else:
        achieved = {k: rep.achieved[k] for k in ("product", "max_h")}
        need = {"product": thresholds.product_bound(n), "max_h": thresholds.multi_order_length(n, d)}
        ok = achieved["product"] >= need["product"] and achieved["max_h"] >= need["max_h"]
    details["orders"] = d
    return ExperimentReport(config.echo(), achieved, need, bool(ok), {"best": rep.to_json()}, details)


def _run_chi(config):
    cover = resolve_cover(config.cover or "chi-demo-s1")
    if config.epsilon is not None:
        cover = cover.with_epsilon(config.epsilon)
    u = unit_point(config.point if config.point is not None else CHI_DEMO_POINT)
    if u.size != cover.dimension + 1:
        raise ConfigError(f"point has {u.size} coordinates, cover lives in R^{cover.dimension + 1}")
    terms = chi_decompose(u, cover)
    chi = chi_values(u, cover)
    back = reconstruct(terms)
    err = max(abs(back[k] - chi[k]) for k in chi)
    total = sum(a for a, _ in terms)
    chain_ok = all(
        set(terms[i][1].pairs()) < set(terms[i + 1][1].pairs()) for i in range(len(terms) - 1)
    )
    order = cover.orders[0]
    layers = [
        {"coefficient": a, "size": len(s), "sample": s.to_json(), "pattern": rho_single(s, order).to_json()}
        for a, s in terms
    ]
    achieved = {
        "coefficients": [a for a, _ in terms],
        "sizes": [len(s) for _, s in terms],
        "coefficient_sum": total,
        "reconstruction_error": err,
    }
    ok = err <= CHI_TOL and abs(total - 1.0) <= CHI_TOL and chain_ok
    details = {"epsilon": effective_epsilon(cover), "chi": {f"{F}{'+' if y > 0 else '-'}": v for (F, y), v in chi.items()},
               "strict_chain": chain_ok}
    return ExperimentReport(config.echo(), achieved, {"tolerance": CHI_TOL}, bool(ok), {"layers": layers}, details)


def _run_sharpness(config):
    inst = SharpnessInstance(config.d, config.m)
    res = longest_common_monotone(inst)
    details = {}
    ok = res.longest == inst.m
    if inst.size <= ENUMERATION_LIMIT:
        bf = longest_common_monotone_bruteforce(inst)
        details["bruteforce_longest"] = bf
        ok = ok and bf == res.longest
    body = res.to_json()
    achieved = {"longest": res.longest, "|X|": inst.size}
    return ExperimentReport(config.echo(), achieved, {"bound_m": inst.m}, bool(ok), {"sequence": body}, details)


def _run_validate(config):
    cover = resolve_cover(config.cover)
    if config.epsilon is not None:
        cover = cover.with_epsilon(config.epsilon)
    grid = prepare_grid(config, cover)
    af = check_antipodal_free(cover, grid)
    cov = check_coverage(cover, grid)
    details = {"antipodal_free": af.to_json(), "coverage": cov.to_json()}
    if cover.all_caps and af.passed:
        bad = check_epsilon_claim(cover, grid)
        details["epsilon"] = effective_epsilon(cover)
        details["epsilon_claim_failures"] = len(bad)
    ok = af.passed and cov.passed
    achieved = {"antipodal_free": af.passed, "covered": cov.passed}
    return ExperimentReport(config.echo(), achieved, {}, bool(ok), {}, details)


def run(config: ExperimentConfig, write: bool = True) -> ExperimentReport:
    """Run one experiment; writes the report to ``config.output`` when set."""
    t0 = time.perf_counter()
    if config.kind == "sharpness":
        report = _run_sharpness(config)
    elif config.kind == "chi-demo":
        report = _run_chi(config)
    elif config.kind == "validate-cover":
        report = _run_validate(config)
    else:
        cover = prepare_cover(config)
        grid = prepare_grid(config, cover)
        log.info("scanning %d grid points on S^%d", len(grid), cover.dimension)
        if config.kind == "kfcl":
            report = _run_kfcl(config, cover, grid)
        else:
            report = _run_multi(config, cover, grid)
    report.wall_time = time.perf_counter() - t0
    if write and config.output:
        Path(config.output).write_text(report.dumps())
    return report
