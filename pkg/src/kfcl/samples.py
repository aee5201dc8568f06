"""Samples, linear orders and the pattern-extraction maps.

A sample is a partial sign assignment on a finite index set. It is stored as a
tuple parallel to ``IndexSet.names`` holding ``+1``, ``-1`` or ``0`` (undefined),
so samples are hashable and cheap to negate.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import IndexMismatchError, InvariantViolation, NotRealizableError
from .poset import Antichain, Pattern, SignedAntichain, maximal_elements


@dataclass(frozen=True)
class IndexSet:
    names: tuple[str, ...]
    _pos: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        if not names:
            raise ValueError("index set must be nonempty")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate names in index set {names}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_pos", {n: i for i, n in enumerate(names)})

    @classmethod
    def of(cls, names: Iterable[str]) -> "IndexSet":
        return cls(tuple(names))

    def position(self, name: str) -> int:
        try:
            return self._pos[name]
        except KeyError:
            raise KeyError(f"{name!r} is not in the index set") from None

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name) -> bool:
        return name in self._pos


@dataclass(frozen=True)
class Sample:
    index: IndexSet
    signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if len(signs) != len(self.index):
            raise ValueError("sign vector must be parallel to the index set")
        if any(s not in (-1, 0, 1) for s in signs):
            raise ValueError("sample values must be -1, 0 (undefined) or +1")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def zero(cls, index: IndexSet) -> "Sample":
        return cls(index, (0,) * len(index))

    @classmethod
    def from_mapping(cls, index: IndexSet, assignment: Mapping[str, int]) -> "Sample":
        signs = [0] * len(index)
        for name, y in assignment.items():
            if y not in (1, -1):
                raise ValueError(f"sign for {name!r} must be +1 or -1, got {y!r}")
            signs[index.position(name)] = y
        return cls(index, tuple(signs))

    @property
    def assignment(self) -> dict[str, int]:
        return {n: s for n, s in zip(self.index.names, self.signs) if s}

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(n for n, s in zip(self.index.names, self.signs) if s)

    def __getitem__(self, name: str) -> int:
        """Sign at ``name``; 0 when undefined."""
        return self.signs[self.index.position(name)]

    def __len__(self):
        return sum(1 for s in self.signs if s)

    @property
    def is_zero(self) -> bool:
        return not any(self.signs)

    @property
    def is_realizable(self) -> bool:
        return 1 in self.signs and -1 in self.signs

    def __neg__(self) -> "Sample":
        return Sample(self.index, tuple(-s for s in self.signs))

    def restrict(self, names: Iterable[str]) -> "Sample":
        keep = {self.index.position(n) for n in names}
        return Sample(self.index, tuple(s if i in keep else 0 for i, s in enumerate(self.signs)))

    def pairs(self) -> frozenset[tuple[str, int]]:
        """The sample as a consistent subset of index x {+1, -1}."""
        return frozenset(self.assignment.items())

    def __str__(self):
        body = ", ".join(f"{n}:{'+' if s > 0 else '-'}" for n, s in self.assignment.items())
        return "{" + body + "}"

    def to_json(self) -> dict:
        return {"indices": list(self.index.names), "signs": self.assignment}

    @classmethod
    def from_json(cls, data: dict) -> "Sample":
        return cls.from_mapping(IndexSet.of(data["indices"]), data["signs"])


def _same_index(a: IndexSet, b: IndexSet):
    if a is not b and a.names != b.names:
        raise IndexMismatchError(f"index sets differ: {a.names} vs {b.names}")


def sample_leq(s1: Sample, s2: Sample) -> bool:
    _same_index(s1.index, s2.index)
    return all(a == 0 or a == b for a, b in zip(s1.signs, s2.signs))


def negate(s: Sample) -> Sample:
    return -s


def all_samples(index: IndexSet, nonzero: bool = True) -> list[Sample]:
    """Every sample over ``index`` (3^|index| of them, minus the zero sample by default)."""
    out = [Sample(index, signs) for signs in product((0, 1, -1), repeat=len(index))]
    return [s for s in out if not (nonzero and s.is_zero)]


# -- orders -------------------------------------------------------------------

@dataclass(frozen=True)
class LinearOrder:
    """Total order on an index set, listed from smallest to largest."""

    index: IndexSet
    sequence: tuple[str, ...]
    _rank: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        seq = tuple(str(n) for n in self.sequence)
        if sorted(seq) != sorted(self.index.names) or len(set(seq)) != len(seq):
            raise ValueError(f"order {seq} is not a permutation of {self.index.names}")
        object.__setattr__(self, "sequence", seq)
        object.__setattr__(self, "_rank", {n: i + 1 for i, n in enumerate(seq)})

    @classmethod
    def identity(cls, index: IndexSet) -> "LinearOrder":
        return cls(index, index.names)

    @classmethod
    def random(cls, index: IndexSet, rng) -> "LinearOrder":
        """Uniform random order drawn from a ``numpy.random.Generator``."""
        perm = rng.permutation(len(index))
        return cls(index, tuple(index.names[i] for i in perm))

    def rank(self, name: str) -> int:
        """Position 1..n of ``name``."""
        return self._rank[name]

    def ranks(self) -> tuple[int, ...]:
        """Ranks parallel to ``index.names``."""
        return tuple(self._rank[n] for n in self.index.names)

    def reversed(self) -> "LinearOrder":
        return LinearOrder(self.index, self.sequence[::-1])

    def lt(self, a: str, b: str) -> bool:
        return self._rank[a] < self._rank[b]

    def to_json(self) -> list[str]:
        return list(self.sequence)


SignFunction = tuple[int, ...]


def sign_functions(d: int) -> list[SignFunction]:
    """All r: [d] -> {+1, -1} with r(1) = +1, lexicographic with + before -."""
    if d < 1:
        raise ValueError("need at least one order")
    return [(1,) + tail for tail in product((1, -1), repeat=d - 1)]


def check_sign_function(r: Sequence[int], d: int) -> SignFunction:
    r = tuple(int(v) for v in r)
    if len(r) != d or r[0] != 1 or any(v not in (1, -1) for v in r):
        raise ValueError(f"{r} is not a sign function on [{d}] with r(1) = +1")
    return r


# -- single order --------------------------------------------------------------

def alternating_witness(s: Sample, order: LinearOrder) -> list[str]:
    """A maximal alternating chain: the first element of every sign run in ``order``."""
    _same_index(s.index, order.index)
    chain, last = [], 0
    for name in order.sequence:
        y = s[name]
        if y and y != last:
            chain.append(name)
            last = y
    return chain


def rho_single(s: Sample, order: LinearOrder) -> Pattern:
    chain = alternating_witness(s, order)
    if not chain:
        return Pattern.zero()
    return Pattern(len(chain), s[chain[0]])


def witnesses(s: Sample, order: LinearOrder, pattern: Pattern) -> list[str] | None:
    """Greedy search for a chain ``F1 < .. < Fk`` with ``s(Fi) = sign * (-1)^(i-1)``."""
    _same_index(s.index, order.index)
    if pattern.length == 0:
        return []
    want, chain = pattern.sign, []
    for name in order.sequence:
        if s[name] == want:
            chain.append(name)
            if len(chain) == pattern.length:
                return chain
            want = -want
    return None


@dataclass
class ObservationReport:
    results: dict[str, bool]
    witnesses: dict[str, list] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.results.values())

    def to_json(self) -> dict:
        return {"results": dict(self.results), "witnesses": dict(self.witnesses), "pass": self.passed}


def observation_checks(s: Sample, order: LinearOrder) -> ObservationReport:
    """Evaluate the four elementary witnessing facts on ``s`` by direct chain search."""
    top = len(s) + 1
    pos = {k: witnesses(s, order, Pattern(k, 1)) for k in range(1, top + 1)}
    neg = {k: witnesses(s, order, Pattern(k, -1)) for k in range(1, top + 1)}
    res, wit = {}, {}

    if s.is_realizable:
        w = pos[2] or neg[2]
        res["two_or_minus_two"] = w is not None
        wit["two_or_minus_two"] = w
    else:
        res["two_or_minus_two"] = True

    ok = True
    for k in range(3, top + 1):
        if pos[k] is not None or neg[k] is not None:
            for l in range(2, k):
                if pos[l] is None or neg[l] is None:
                    ok = False
                    wit.setdefault("downward_closed", [k, l])
    res["downward_closed"] = ok

    ok = True
    for k in range(1, top):
        if pos[k] is not None and neg[k] is not None:
            nxt = pos[k + 1] or neg[k + 1]
            if nxt is None:
                ok = False
                wit.setdefault("both_signs_extend", [k])
    res["both_signs_extend"] = ok

    flipped = -s
    ok = True
    for k in range(1, top + 1):
        if (pos[k] is not None) != (witnesses(flipped, order, Pattern(k, -1)) is not None):
            ok = False
            wit.setdefault("antipodal_mirror", [k])
    res["antipodal_mirror"] = ok
    return ObservationReport(res, wit)


# -- several orders --------------------------------------------------------------

def _check_orders(s: Sample, orders: Sequence[LinearOrder]):
    if not orders:
        raise ValueError("need at least one order")
    for o in orders:
        _same_index(s.index, o.index)


def _iota_dp(s: Sample, orders: Sequence[LinearOrder], r: Sequence[int]):
    _check_orders(s, orders)
    r = check_sign_function(r, len(orders))
    if s.is_zero:
        raise ValueError("iota is undefined on the zero sample")
    # r(1) = +1, so every admissible chain is increasing in the first order
    support = sorted(s.support, key=orders[0].rank)
    keys = [tuple(rj * o.rank(name) for rj, o in zip(r, orders)) for name in support]
    sgn = [s[name] for name in support]
    best = [1] * len(support)
    prev = [-1] * len(support)
    for b in range(len(support)):
        kb = keys[b]
        for a in range(b):
            if sgn[a] != sgn[b] and best[a] >= best[b] and all(x < y for x, y in zip(keys[a], kb)):
                best[b] = best[a] + 1
                prev[b] = a
    return support, best, prev


def iota_multi(s: Sample, orders: Sequence[LinearOrder], r: Sequence[int]) -> dict[str, int]:
    """Longest alternating chain ending at each support element, monotone in direction ``r``.

    The chain must be increasing in order ``j`` when ``r[j] = +1`` and decreasing
    when ``r[j] = -1``, for every ``j``.
    """
    support, best, _ = _iota_dp(s, orders, r)
    return dict(zip(support, best))


def monotone_chain(s: Sample, orders: Sequence[LinearOrder], r: Sequence[int]) -> list[str]:
    """A longest alternating chain monotone in direction ``r`` (first maximum in the first order)."""
    support, best, prev = _iota_dp(s, orders, r)
    i = best.index(max(best))
    chain = []
    while i >= 0:
        chain.append(support[i])
        i = prev[i]
    return chain[::-1]


def iota_vectors(s: Sample, orders: Sequence[LinearOrder]) -> dict[str, tuple[int, ...]]:
    """``iota(F) = (iota_r(F))_{r in R}`` with R in lexicographic order."""
    per_r = [iota_multi(s, orders, r) for r in sign_functions(len(orders))]
    return {name: tuple(m[name] for m in per_r) for name in s.support}


def h_values(s: Sample, orders: Sequence[LinearOrder]) -> dict[SignFunction, int]:
    """``h_r`` = longest alternating chain monotone in direction ``r``."""
    return {r: max(iota_multi(s, orders, r).values()) for r in sign_functions(len(orders))}


def rho_multi(s: Sample, orders: Sequence[LinearOrder]) -> SignedAntichain:
    if not s.is_realizable:
        raise NotRealizableError(f"{s} needs at least one + and one - entry")
    iota = iota_vectors(s, orders)
    color: dict[tuple[int, ...], int] = {}
    for name, x in iota.items():
        y = s[name]
        if color.setdefault(x, y) != y:
            raise InvariantViolation(f"iota collides on opposite signs at {x} for {s}")
    top = maximal_elements(iota.values())
    return SignedAntichain(Antichain(tuple(top)), tuple(color[x] for x in top))


def iota_collisions(s: Sample, orders: Sequence[LinearOrder]) -> list[tuple[str, str]]:
    """Pairs ``F, G`` with ``s(F) != s(G)`` but ``iota(F) == iota(G)``; always empty."""
    groups = defaultdict(list)
    for name, x in iota_vectors(s, orders).items():
        groups[x].append(name)
    bad = []
    for names in groups.values():
        for i, f in enumerate(names):
            bad.extend((f, g) for g in names[i + 1:] if s[f] != s[g])
    return bad
