import json
from fractions import Fraction

import pytest

from sphord import backforth
from sphord.backforth import PartialIso, coverage_ok, is_partial_iso, run, step, verify_last_pair
from sphord.dense import DenseOracle
from sphord.errors import ArityError, SearchExhausted


def test_first_step_pairs_first_elements():
    a, b = DenseOracle(3, 1), DenseOracle(3, 2)
    p = step(PartialIso(a, b))
    assert p.pairs == [(a.element_at(0), b.element_at(0))]


def test_two_steps_cover_first_elements():
    a, b = DenseOracle(4, 1), DenseOracle(4, 2)
    p = run(a, b, 2)
    assert a.element_at(0) in p.forward
    assert b.element_at(0) in p.backward
    assert coverage_ok(p)


def test_zero_steps():
    p = run(DenseOracle(3), DenseOracle(3, 5), 0)
    assert len(p) == 0 and p.pairs == []


def test_arity_mismatch():
    with pytest.raises(ArityError):
        run(DenseOracle(2), DenseOracle(3), 4)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_short_run_is_partial_iso_at_every_step(n):
    a, b = DenseOracle(n, 3), DenseOracle(n, 4)
    p = PartialIso(a, b)
    for _ in range(14):
        step(p)
        verify_last_pair(p)
        assert is_partial_iso(p)
        if len(p) % 2 == 0:
            assert coverage_ok(p)


def test_deterministic():
    p1 = run(DenseOracle(3, 7), DenseOracle(3, 8), 30)
    p2 = run(DenseOracle(3, 7), DenseOracle(3, 8), 30)
    assert p1.pairs == p2.pairs


def test_verify_last_pair_catches_corruption():
    a, b = DenseOracle(3, 1), DenseOracle(3, 2)
    # 0 < 1 < 2 is sent to 0 < 1/2 < 1 with the last two swapped
    bad = PartialIso(a, b, forward={Fraction(0): Fraction(0), Fraction(1): Fraction(1), Fraction(2): Fraction(1, 2)})
    assert not is_partial_iso(bad)
    with pytest.raises(AssertionError):
        verify_last_pair(bad)


def test_search_bound_exhaustion():
    p = PartialIso(DenseOracle(3, 1), DenseOracle(3, 2))
    step(p, search_bound=1)
    with pytest.raises(SearchExhausted):
        for _ in range(5):
            step(p, search_bound=1)


def test_trace_line_and_dict():
    p = run(DenseOracle(3, 1), DenseOracle(3, 2), 3)
    rec = json.loads(backforth.trace_line(p.history[0]))
    assert rec["step"] == 1 and rec["direction"] == "forth"
    assert "/" in rec["a"] and "/" in rec["b"]
    d = p.to_dict()
    assert d["steps"] == 3 and len(d["pairs"]) == 3


@pytest.mark.slow
def test_known_stuck_seed_pair_for_n4():
    # greedy first-witness choice can paint itself into a corner for n = 4
    with pytest.raises(SearchExhausted):
        run(DenseOracle(4, 5), DenseOracle(4, 6), 10, search_bound=2000)
