"""Order-theoretic core.

Three posets live here:

* alternating patterns ``[±k]`` ordered as in the Hasse diagram H(2, m),
  extended downwards by the degenerate values ``[0] < [±1]``;
* nonempty order ideals of N^R, each stored by its antichain of maximal
  elements, ordered by inclusion;
* signed antichains ``(a, f)`` where ``(a, f) <= (b, g)`` iff ``a < b`` or
  ``a == b`` and ``f == g``.

Grid vectors are plain tuples of positive ints; coordinate ``k`` refers to the
``k``-th sign function of whatever ordered index set R the caller uses.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .errors import IndexMismatchError, OutOfPosetError

GridVector = tuple[int, ...]

# generator count up to which ideal sizes use inclusion-exclusion
INCLUSION_EXCLUSION_LIMIT = 8


# -- patterns ---------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Pattern:
    """An alternating pattern ``[sign * length]``; ``Pattern.zero()`` is ``[0]``."""

    length: int
    sign: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError(f"pattern length must be >= 0, got {self.length}")
        if self.length == 0 and self.sign != 0:
            raise ValueError("the zero pattern carries no sign")
        if self.length > 0 and self.sign not in (1, -1):
            raise ValueError(f"signed pattern needs sign +1 or -1, got {self.sign}")

    @classmethod
    def zero(cls) -> "Pattern":
        return cls(0, 0)

    @classmethod
    def signed(cls, value: int) -> "Pattern":
        """``Pattern.signed(-3)`` is ``[-3]``."""
        if value == 0:
            return cls.zero()
        return cls(abs(value), 1 if value > 0 else -1)

    @property
    def kind(self) -> str:
        return "zero" if self.length == 0 else "signed"

    @property
    def value(self) -> int:
        return self.sign * self.length

    @property
    def is_degenerate(self) -> bool:
        return self.length < 2

    def __neg__(self) -> "Pattern":
        return Pattern(self.length, -self.sign)

    def __str__(self):
        return f"[{self.value}]"

    def to_json(self) -> dict:
        if self.length == 0:
            return {"kind": "zero"}
        return {"kind": "signed", "sign": self.sign, "length": self.length}

    @classmethod
    def from_json(cls, data: dict) -> "Pattern":
        if data["kind"] == "zero":
            return cls.zero()
        if data["kind"] != "signed":
            raise ValueError(f"unknown pattern kind {data['kind']!r}")
        return cls(int(data["length"]), int(data["sign"]))


def pattern_leq(p: Pattern, q: Pattern) -> bool:
    # [0] has length 0, so it sits below everything; equal lengths compare only to themselves
    return p == q or p.length < q.length


def pattern_rank(p: Pattern) -> int:
    if p.is_degenerate:
        raise OutOfPosetError(f"{p} is not an element of H(2, inf)")
    return p.length - 2


@dataclass(frozen=True)
class PatternPoset:
    """The finite poset H(2, m) of patterns ``[±2] .. [±m]``."""

    m: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("H(2, m) needs m >= 2")

    def elements(self) -> list[Pattern]:
        return [Pattern(k, s) for k in range(2, self.m + 1) for s in (1, -1)]

    def covers(self, p: Pattern) -> list[Pattern]:
        """Elements covered by ``p``: both patterns one step shorter."""
        if p.length <= 2:
            return []
        return [Pattern(p.length - 1, 1), Pattern(p.length - 1, -1)]

    def __contains__(self, p: Pattern) -> bool:
        return 2 <= p.length <= self.m


# -- grid vectors, ideals, antichains ---------------------------------------

def vector_leq(x: GridVector, y: GridVector) -> bool:
    return all(a <= b for a, b in zip(x, y))


def maximal_elements(points: Iterable[GridVector]) -> list[GridVector]:
    """Maximal elements of a finite set of grid vectors, lexicographically sorted."""
    pts = sorted(set(points))
    return [p for p in pts if not any(q != p and vector_leq(p, q) for q in pts)]


@dataclass(frozen=True)
class Antichain:
    """Nonempty antichain in N^R, canonically sorted; stands for the ideal it generates."""

    points: tuple[GridVector, ...]

    def __post_init__(self):
        pts = tuple(sorted({tuple(int(c) for c in p) for p in self.points}))
        if not pts:
            raise ValueError("antichain must be nonempty")
        dim = len(pts[0])
        if dim == 0:
            raise ValueError("grid vectors need at least one coordinate")
        for p in pts:
            if len(p) != dim:
                raise IndexMismatchError("antichain mixes grid vectors of different dimension")
            if min(p) < 1:
                raise ValueError(f"grid vector coordinates must be >= 1, got {p}")
        for p, q in combinations(pts, 2):
            if vector_leq(p, q) or vector_leq(q, p):
                raise ValueError(f"{p} and {q} are comparable")
        object.__setattr__(self, "points", pts)

    @classmethod
    def generated_by(cls, points: Iterable[GridVector]) -> "Antichain":
        """Antichain of maximal elements of an arbitrary finite point set."""
        return cls(tuple(maximal_elements(points)))

    @classmethod
    def bottom(cls, dim: int) -> "Antichain":
        return cls(((1,) * dim,))

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.points

    def heights(self) -> GridVector:
        """Coordinate-wise maxima; the value h_r for each r."""
        return tuple(max(col) for col in zip(*self.points))

    def ideal(self) -> frozenset[GridVector]:
        """Explicit enumeration of the generated order ideal."""
        out = set()
        for p in self.points:
            out.update(_box(p))
        return frozenset(out)

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self.points]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]]) -> "Antichain":
        return cls(tuple(tuple(p) for p in data))


def _box(p: GridVector):
    if not p:
        yield ()
        return
    for head in range(1, p[0] + 1):
        for tail in _box(p[1:]):
            yield (head,) + tail


def _check_dims(a: Antichain, b: Antichain):
    if a.dim != b.dim:
        raise IndexMismatchError(f"index sets differ: |R| = {a.dim} vs {b.dim}")


def antichain_leq(a: Antichain, b: Antichain) -> bool:
    _check_dims(a, b)
    return all(any(vector_leq(p, q) for q in b.points) for p in a.points)


def antichain_lt(a: Antichain, b: Antichain) -> bool:
    return a != b and antichain_leq(a, b)


def _prod(xs) -> int:
    return reduce(lambda u, v: u * v, xs, 1)


def _meet(vectors) -> GridVector:
    return tuple(min(col) for col in zip(*vectors))


def _ideal_size_ie(points: Sequence[GridVector]) -> int:
    total = 0
    for k in range(1, len(points) + 1):
        sign = 1 if k % 2 else -1
        for group in combinations(points, k):
            total += sign * _prod(_meet(group))
    return total


def _ideal_size_sweep(points: Sequence[GridVector]) -> int:
    # slice on the first coordinate: level t keeps the generators reaching it
    if len(points[0]) == 1:
        return max(p[0] for p in points)
    total = 0
    for t in range(1, max(p[0] for p in points) + 1):
        rest = maximal_elements(p[1:] for p in points if p[0] >= t)
        total += _ideal_size(rest)
    return total


def _ideal_size(points: Sequence[GridVector]) -> int:
    if len(points) <= INCLUSION_EXCLUSION_LIMIT:
        return _ideal_size_ie(points)
    return _ideal_size_sweep(points)


def ideal_size(a: Antichain) -> int:
    return _ideal_size(a.points)


def antichain_rank(a: Antichain) -> int:
    """Rank in the poset of nonempty ideals: ``|ideal(a)| - 1``."""
    return ideal_size(a) - 1


# -- signed antichains -------------------------------------------------------

@dataclass(frozen=True)
class SignedAntichain:
    """``(a, f)`` with ``signs[i]`` the value of ``f`` at ``antichain.points[i]``."""

    antichain: Antichain
    signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if len(signs) != len(self.antichain):
            raise ValueError("signs must be parallel to the antichain points")
        if any(s not in (1, -1) for s in signs):
            raise ValueError("signs must be +1 or -1")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def from_mapping(cls, coloring: dict) -> "SignedAntichain":
        a = Antichain(tuple(coloring))
        return cls(a, tuple(coloring[p] for p in a.points))

    def sign_of(self, point: GridVector) -> int:
        return self.signs[self.antichain.points.index(tuple(point))]

    def as_mapping(self) -> dict[GridVector, int]:
        return dict(zip(self.antichain.points, self.signs))

    def __neg__(self) -> "SignedAntichain":
        return SignedAntichain(self.antichain, tuple(-s for s in self.signs))

    def __str__(self):
        body = ", ".join(
            "".join(map(str, p)) + ("+" if s > 0 else "-")
            for p, s in zip(self.antichain.points, self.signs)
        )
        return "{" + body + "}"

    def to_json(self) -> dict:
        return {"antichain": self.antichain.to_json(), "signs": list(self.signs)}

    @classmethod
    def from_json(cls, data: dict) -> "SignedAntichain":
        return cls(Antichain.from_json(data["antichain"]), tuple(data["signs"]))


def signed_antichain_leq(w1: SignedAntichain, w2: SignedAntichain) -> bool:
    _check_dims(w1.antichain, w2.antichain)
    if w1.antichain == w2.antichain:
        return w1.signs == w2.signs
    return antichain_leq(w1.antichain, w2.antichain)


def signed_rank(w: SignedAntichain, punctured: bool = False) -> int:
    """Rank of ``w`` in P0, or in P = P0 minus the two bottom elements when ``punctured``."""
    r = antichain_rank(w.antichain)
    if not punctured:
        return r
    if r == 0:
        raise OutOfPosetError(f"{w} is removed from the punctured poset")
    return r - 1


# -- monotonicity harness ----------------------------------------------------

@dataclass(frozen=True)
class Violation:
    lower: object
    upper: object
    image_lower: object
    image_upper: object


def check_monotone(
    pairs: Iterable[tuple[object, object]],
    fn: Callable[[object], object],
    target_leq: Callable[[object, object], bool],
) -> list[Violation]:
    """Return every supplied comparable pair ``x <= y`` with ``fn(x) <= fn(y)`` failing."""
    out = []
    for x, y in pairs:
        fx, fy = fn(x), fn(y)
        if not target_leq(fx, fy):
            out.append(Violation(x, y, fx, fy))
    return out
