import json
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import kfcl.samples as samples_mod
from kfcl.errors import IndexMismatchError, InvariantViolation, NotRealizableError
from kfcl.poset import Antichain, Pattern, SignedAntichain, pattern_leq, signed_antichain_leq
from kfcl.samples import (
    IndexSet,
    LinearOrder,
    Sample,
    all_samples,
    alternating_witness,
    h_values,
    iota_collisions,
    iota_multi,
    iota_vectors,
    monotone_chain,
    negate,
    observation_checks,
    rho_multi,
    rho_single,
    sample_leq,
    sign_functions,
    witnesses,
)

from oracles import iota_bruteforce, max_alternating_single

ABC = IndexSet.of("ABC")


def smp(index, **signs):
    return Sample.from_mapping(index, signs)


def random_sample(rng, index, realizable=False, min_size=1):
    while True:
        k = rng.randint(min_size, len(index))
        names = rng.sample(index.names, k)
        s = Sample.from_mapping(index, {n: rng.choice((1, -1)) for n in names})
        if not realizable or s.is_realizable:
            return s


def random_order(rng, index):
    names = list(index.names)
    rng.shuffle(names)
    return LinearOrder(index, tuple(names))


# -- basic sample algebra --------------------------------------------------------

def test_sample_leq_examples():
    idx = IndexSet.of("AB")
    assert sample_leq(smp(idx, A=1), smp(idx, A=1, B=-1))
    assert not sample_leq(smp(idx, A=1), smp(idx, A=-1, B=-1))
    assert sample_leq(Sample.zero(idx), smp(idx, B=-1))


def test_sample_leq_index_mismatch():
    with pytest.raises(IndexMismatchError):
        sample_leq(smp(ABC, A=1), smp(IndexSet.of("AB"), A=1))


def test_negate_examples():
    assert negate(smp(ABC, A=1, C=-1)) == smp(ABC, A=-1, C=1)
    assert negate(Sample.zero(ABC)) == Sample.zero(ABC)


def test_negate_involution_random():
    rng = random.Random(11)
    idx = IndexSet.of(f"F{i}" for i in range(8))
    for _ in range(1000):
        s = random_sample(rng, idx)
        assert negate(negate(s)) == s
        assert negate(s).support == s.support


def test_sample_invariants():
    with pytest.raises(ValueError):
        Sample(ABC, (1, 2, 0))
    with pytest.raises(ValueError):
        IndexSet.of("AA")
    with pytest.raises(ValueError):
        LinearOrder(ABC, ("A", "B", "B"))


def test_sample_json_roundtrip():
    s = smp(ABC, A=1, C=-1)
    data = json.loads(json.dumps(s.to_json()))
    assert data == {"indices": ["A", "B", "C"], "signs": {"A": 1, "C": -1}}
    assert Sample.from_json(data) == s


def test_all_samples_count():
    assert len(all_samples(ABC)) == 26
    assert len(all_samples(ABC, nonzero=False)) == 27


# -- single order ---------------------------------------------------------------------

def test_rho_single_examples():
    order = LinearOrder.identity(ABC)
    assert rho_single(smp(ABC, A=1, B=-1, C=1), order) == Pattern.signed(3)
    # brute force over all chains gives (2, -) with - the only maximal first sign
    assert rho_single(smp(ABC, A=-1, B=-1, C=1), order) == Pattern.signed(-2)
    five = IndexSet.of("VWXYZ")
    assert rho_single(Sample.from_mapping(five, dict.fromkeys("VWXYZ", 1)), LinearOrder.identity(five)) == Pattern.signed(1)
    assert rho_single(Sample.zero(ABC), order) == Pattern.zero()


def test_rho_single_matches_bruteforce():
    rng = random.Random(5)
    idx = IndexSet.of(f"F{i}" for i in range(9))
    for _ in range(300):
        s, order = random_sample(rng, idx), random_order(rng, idx)
        (length, sign), firsts = max_alternating_single(s.assignment, {n: order.rank(n) for n in idx})
        assert firsts == {sign}
        assert rho_single(s, order) == Pattern(length, sign)
        chain = alternating_witness(s, order)
        assert len(chain) == length
        assert witnesses(s, order, Pattern(length, sign)) is not None
        assert witnesses(s, order, Pattern(length + 1, 1)) is None


def test_rho_single_mirror_and_monotone():
    rng = random.Random(8)
    idx = IndexSet.of(f"F{i}" for i in range(10))
    for _ in range(10_000):
        order = random_order(rng, idx)
        big = random_sample(rng, idx)
        small = big.restrict(rng.sample(big.support, rng.randint(0, len(big))))
        assert rho_single(negate(big), order) == -rho_single(big, order)
        assert pattern_leq(rho_single(small, order), rho_single(big, order))


def test_observation_checks_examples():
    order = LinearOrder.identity(ABC)
    s = smp(ABC, A=1, B=-1, C=-1)
    rep = observation_checks(s, order)
    assert rep.passed and set(rep.results) == {
        "two_or_minus_two", "downward_closed", "both_signs_extend", "antipodal_mirror"}
    assert observation_checks(negate(s), order).passed
    assert rho_single(negate(s), order) == -rho_single(s, order)


def test_observation_checks_detect_bad_oracle(monkeypatch):
    # a broken witness search must be noticed
    order = LinearOrder.identity(ABC)
    s = smp(ABC, A=1, B=-1, C=1)
    monkeypatch.setattr(samples_mod, "witnesses", lambda *a: None)
    assert not samples_mod.observation_checks(s, order).passed


# -- several orders --------------------------------------------------------------------------

def six_point_instance():
    idx = IndexSet.of("123456")
    ys = {"1": 3, "2": 1, "3": 5, "4": 2, "5": 6, "6": 4}
    orders = [LinearOrder.identity(idx), LinearOrder(idx, tuple(sorted(ys, key=ys.get)))]
    # white = +, black = -
    s = Sample.from_mapping(idx, {"1": 1, "2": -1, "3": 1, "4": -1, "5": 1, "6": -1})
    return s, orders


def test_iota_six_point_instance():
    s, orders = six_point_instance()
    iota = iota_vectors(s, orders)
    assert [iota[n] for n in "123456"] == [(1, 1), (1, 2), (2, 1), (1, 2), (2, 1), (2, 2)]
    assert rho_multi(s, orders) == SignedAntichain(Antichain(((2, 2),)), (-1,))


def test_iota_singleton():
    idx = IndexSet.of("ABCD")
    s = smp(idx, C=-1)
    rng = np.random.default_rng(0)
    for d in (1, 2, 3):
        orders = [LinearOrder.random(idx, rng) for _ in range(d)]
        for r in sign_functions(d):
            assert iota_multi(s, orders, r) == {"C": 1}


def test_iota_zero_sample_rejected():
    with pytest.raises(ValueError):
        iota_multi(Sample.zero(ABC), [LinearOrder.identity(ABC)], (1,))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_iota_matches_bruteforce(d):
    rng = random.Random(100 + d)
    idx = IndexSet.of(f"F{i}" for i in range(10))
    for trial in range(40):
        s = random_sample(rng, idx, min_size=8 if trial < 20 else 1)
        orders = [random_order(rng, idx) for _ in range(d)]
        ranks = [{n: o.rank(n) for n in idx} for o in orders]
        for r in sign_functions(d):
            assert iota_multi(s, orders, r) == iota_bruteforce(s.assignment, ranks, r)
            chain = monotone_chain(s, orders, r)
            assert len(chain) == max(iota_multi(s, orders, r).values())


def test_two_point_instance():
    idx = IndexSet.of("AB")
    orders = [LinearOrder.identity(idx), LinearOrder.identity(idx)]
    s = smp(idx, A=1, B=-1)
    # brute force: iota(A) = (1, 1), iota(B) = (2, 1)
    assert iota_vectors(s, orders) == {"A": (1, 1), "B": (2, 1)}
    assert rho_multi(s, orders) == SignedAntichain(Antichain(((2, 1),)), (-1,))


def test_rho_multi_sign_symmetry():
    rng = random.Random(3)
    idx = IndexSet.of(f"F{i}" for i in range(7))
    for _ in range(1000):
        s = random_sample(rng, idx, realizable=True)
        orders = [random_order(rng, idx) for _ in range(rng.choice((2, 3)))]
        w, v = rho_multi(s, orders), rho_multi(negate(s), orders)
        assert v == -w and v != w


def test_rho_multi_requires_realizable():
    with pytest.raises(NotRealizableError):
        rho_multi(smp(ABC, A=1, B=1), [LinearOrder.identity(ABC)] * 2)


def test_rho_multi_flags_internal_collision(monkeypatch):
    s, orders = six_point_instance()
    monkeypatch.setattr(samples_mod, "iota_vectors", lambda s, o: {n: (1, 1) for n in s.support})
    with pytest.raises(InvariantViolation):
        samples_mod.rho_multi(s, orders)


def test_single_order_iota_matches_rho_single():
    rng = random.Random(21)
    idx = IndexSet.of(f"F{i}" for i in range(9))
    for _ in range(500):
        s, order = random_sample(rng, idx), random_order(rng, idx)
        assert max(iota_multi(s, [order], (1,)).values()) == rho_single(s, order).length
        assert h_values(s, [order]) == {(1,): rho_single(s, order).length}


def test_sign_functions_lexicographic():
    assert sign_functions(1) == [(1,)]
    assert sign_functions(2) == [(1, 1), (1, -1)]
    assert sign_functions(3) == [(1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)]


idx6 = IndexSet.of("ABCDEF")
sample_strategy = st.lists(st.sampled_from([-1, 0, 1]), min_size=6, max_size=6).map(lambda v: Sample(idx6, tuple(v)))
order_strategy = st.permutations(list("ABCDEF")).map(lambda p: LinearOrder(idx6, tuple(p)))


@settings(max_examples=300)
@given(sample_strategy, st.lists(order_strategy, min_size=2, max_size=3))
def test_observation_star(s, orders):
    if not s.is_zero:
        assert iota_collisions(s, orders) == []


@settings(max_examples=300)
@given(sample_strategy, order_strategy)
def test_observations_property(s, order):
    assert observation_checks(s, order).passed


@settings(max_examples=200)
@given(sample_strategy, sample_strategy, st.lists(order_strategy, min_size=2, max_size=3))
def test_rho_multi_monotone_property(a, b, orders):
    # meet-style restriction of b to a's support keeps nesting
    small = b.restrict(a.support)
    if small.is_realizable:
        assert signed_antichain_leq(rho_multi(small, orders), rho_multi(b, orders))
