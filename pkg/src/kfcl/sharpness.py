"""The product construction X = [m]^R with d twisted lexicographic orders.

Coordinates of X are indexed by the sign functions R (lexicographic, + before -).
Order ``i`` compares two points at their first differing coordinate ``r``,
reading that coordinate upwards when ``r(i) = +1`` and downwards otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import product

from .errors import SizeGuardError
from .samples import SignFunction, sign_functions

DP_LIMIT = 10 ** 5
ENUMERATION_LIMIT = 16


@dataclass(frozen=True)
class SharpnessInstance:
    d: int
    m: int
    R: tuple[SignFunction, ...] = field(init=False)

    def __post_init__(self):
        if self.d < 1 or self.m < 1:
            raise ValueError("need d >= 1 and m >= 1")
        object.__setattr__(self, "R", tuple(sign_functions(self.d)))

    @property
    def size(self) -> int:
        return self.m ** len(self.R)

    def points(self) -> list[tuple[int, ...]]:
        return list(product(range(1, self.m + 1), repeat=len(self.R)))


def order_leq_i(x, y, i: int, inst: SharpnessInstance) -> bool:
    """``x <=_i y`` for the 1-based order index ``i``."""
    if not 1 <= i <= inst.d:
        raise ValueError(f"order index must lie in 1..{inst.d}")
    for r, a, b in zip(inst.R, x, y):
        if a != b:
            return r[i - 1] * a < r[i - 1] * b
    return True


def _ranks(inst: SharpnessInstance, pts) -> list[dict]:
    out = []
    for i in range(1, inst.d + 1):
        cmp = lambda a, b, i=i: 0 if a == b else (-1 if order_leq_i(a, b, i, inst) else 1)
        ordered = sorted(pts, key=cmp_to_key(cmp))
        out.append({p: k for k, p in enumerate(ordered)})
    return out


@dataclass
class SharpnessResult:
    inst: SharpnessInstance
    longest: int
    witness: list
    directions: tuple[int, ...]
    method: str

    def to_json(self) -> dict:
        return {
            "d": self.inst.d,
            "m": self.inst.m,
            "|X|": self.inst.size,
            "longest": self.longest,
            "witness": [list(p) for p in self.witness],
            "directions": list(self.directions),
            "method": self.method,
            "bound_m": self.inst.m,
            "pass": self.longest == self.inst.m,
        }


def _lex_least_longest(pts, keys) -> list:
    """Lexicographically least longest chain in the strict dominance order on ``keys``."""
    below = lambda a, b: all(x < y for x, y in zip(keys[a], keys[b]))
    order = sorted(pts, key=lambda p: keys[p])
    start = {}
    for b in reversed(order):
        start[b] = 1 + max((start[c] for c in order if below(b, c)), default=0)
    length = max(start.values())
    chain, need, cur = [], length, None
    while need:
        cur = min(p for p in pts if start[p] == need and (cur is None or below(cur, p)))
        chain.append(cur)
        need -= 1
    return chain


def longest_common_monotone(inst: SharpnessInstance) -> SharpnessResult:
    """Longest sequence of distinct points, monotone (either way) in every order."""
    if inst.size > DP_LIMIT:
        raise SizeGuardError(f"|X| = {inst.size} exceeds the DP guard {DP_LIMIT}")
    pts = inst.points()
    ranks = _ranks(inst, pts)
    best = None
    for dirs in product((1, -1), repeat=inst.d):
        keys = {p: tuple(s * rk[p] for s, rk in zip(dirs, ranks)) for p in pts}
        chain = _lex_least_longest(pts, keys)
        cand = (-len(chain), chain, dirs)
        if best is None or cand[:2] < best[:2]:
            best = cand
    return SharpnessResult(inst, -best[0], best[1], best[2], "dp")


def longest_common_monotone_bruteforce(inst: SharpnessInstance) -> int:
    """Independent check: largest subset whose order-1 sorting is monotone in every order."""
    if inst.size > ENUMERATION_LIMIT:
        raise SizeGuardError(f"|X| = {inst.size} exceeds the enumeration guard {ENUMERATION_LIMIT}")
    pts = inst.points()
    ranks = _ranks(inst, pts)
    best = 0
    for mask in range(1, 1 << len(pts)):
        sub = sorted((p for k, p in enumerate(pts) if mask >> k & 1), key=ranks[0].get)
        if len(sub) <= best:
            continue
        ok = True
        for rk in ranks[1:]:
            seq = [rk[p] for p in sub]
            if seq != sorted(seq) and seq != sorted(seq, reverse=True):
                ok = False
                break
        if ok:
            best = len(sub)
    return best
